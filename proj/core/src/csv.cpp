#include "kinnet/csv.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace kinnet::csv {

int Table::column(std::string_view name) const {
  for (std::size_t i = 0; i < header.size(); ++i) {
    if (header[i] == name) return static_cast<int>(i);
  }
  return -1;
}

namespace {

// Splits one logical CSV record starting at `pos`. Handles quoted fields with
// doubled quotes; a quoted field may contain newlines.
std::vector<std::string> parse_record(std::string_view text, std::size_t& pos, char delim) {
  std::vector<std::string> fields;
  std::string field;
  bool in_quotes = false;
  bool done = false;
  while (pos < text.size() && !done) {
    char c = text[pos];
    if (in_quotes) {
      if (c == '"') {
        if (pos + 1 < text.size() && text[pos + 1] == '"') {
          field.push_back('"');
          ++pos;
        } else {
          in_quotes = false;
        }
      } else {
        field.push_back(c);
      }
      ++pos;
    } else {
      switch (c) {
      case '"':
        in_quotes = true;
        ++pos;
        break;
      case '\r':
        ++pos;
        break;
      case '\n':
        ++pos;
        done = true;
        break;
      default:
        if (c == delim) {
          fields.push_back(std::move(field));
          field.clear();
        } else {
          field.push_back(c);
        }
        ++pos;
      }
    }
  }
  fields.push_back(std::move(field));
  return fields;
}

} // namespace

Table parse(std::string_view text, char delimiter) {
  Table table;
  std::size_t pos = 0;
  bool header_seen = false;
  while (pos < text.size()) {
    if (text[pos] == '#') {
      std::size_t eol = text.find('\n', pos);
      if (eol == std::string_view::npos) eol = text.size();
      std::string_view line = text.substr(pos, eol - pos);
      if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
      table.comments.emplace_back(line);
      pos = eol == text.size() ? eol : eol + 1;
      continue;
    }
    if (text[pos] == '\n' || text[pos] == '\r') {
      ++pos;
      continue;
    }
    auto fields = parse_record(text, pos, delimiter);
    if (!header_seen) {
      table.header = std::move(fields);
      header_seen = true;
    } else {
      table.rows.push_back(std::move(fields));
    }
  }
  return table;
}

Table read_file(const std::string& path, char delimiter) {
  return parse(read_text_file(path), delimiter);
}

std::string escape_field(std::string_view field, char delimiter) {
  bool needs_quote = !field.empty() && field.front() == '#';
  for (char c : field) {
    if (c == delimiter || c == '"' || c == '\n' || c == '\r') {
      needs_quote = true;
      break;
    }
  }
  if (!needs_quote) return std::string(field);
  std::string out;
  out.reserve(field.size() + 2);
  out.push_back('"');
  for (char c : field) {
    if (c == '"') out.push_back('"');
    out.push_back(c);
  }
  out.push_back('"');
  return out;
}

void Writer::comment(std::string_view text) {
  out_ += "# ";
  out_ += text;
  out_ += '\n';
}

void Writer::row(const std::vector<std::string>& fields) {
  for (std::size_t i = 0; i < fields.size(); ++i) {
    if (i) out_.push_back(delimiter_);
    out_ += escape_field(fields[i], delimiter_);
  }
  out_.push_back('\n');
}

std::string format_double(double value) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.12g", value);
  return buf;
}

void write_text_file(const std::string& path, std::string_view content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open for writing: " + path);
  out.write(content.data(), static_cast<std::streamsize>(content.size()));
  if (!out) throw std::runtime_error("write failed: " + path);
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

} // namespace kinnet::csv
