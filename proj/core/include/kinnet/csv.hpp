#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace kinnet::csv {

/// One parsed table: header row plus data rows. Lines starting with '#' are
/// treated as metadata comments and collected separately.
struct Table {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
  std::vector<std::string> comments;

  /// Index of a header column, or -1 when absent.
  int column(std::string_view name) const;
};

Table read_file(const std::string& path, char delimiter = ',');
Table parse(std::string_view text, char delimiter = ',');

/// Quotes a field if it contains the delimiter, a quote, a newline, or a
/// leading '#'.
std::string escape_field(std::string_view field, char delimiter);

struct Writer {
  explicit Writer(char delimiter = ',') : delimiter_(delimiter) {}

  void comment(std::string_view text);
  void row(const std::vector<std::string>& fields);
  const std::string& str() const { return out_; }

private:
  char delimiter_;
  std::string out_;
};

/// Shortest-round-trip style numeric formatting ("%.12g"); used by every CSV
/// emitter so reruns stay byte-identical.
std::string format_double(double value);

void write_text_file(const std::string& path, std::string_view content);
std::string read_text_file(const std::string& path);

} // namespace kinnet::csv
