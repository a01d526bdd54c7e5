#pragma once

#include "kinnet/records.hpp"

#include <cstddef>
#include <string>
#include <vector>

namespace kinnet {

/// Maps logical record fields onto header names in an input file.
/// last_name, first_name, position, province and year are required; the rest
/// are used when present.
struct ColumnMap {
  std::string last_name = "last_name";
  std::string first_name = "first_name";
  std::string middle_name = "middle_name";
  std::string position = "position";
  std::string party = "party";
  std::string region = "region";
  std::string province = "province";
  std::string municipality = "municipality";
  std::string year = "year";
  std::string community_id = "community_id";
  std::string dynastic = "dynastic";
  std::string hopper = "hopper";
};

struct RowError {
  std::size_t line;   // 1-based data-row index within the file
  std::string message;
};

struct ParseResult {
  Dataset records;
  std::vector<RowError> errors;
};

/// Parses a delimiter-separated file into normalized records. Rows with an
/// unmappable position or malformed/out-of-set year are rejected into
/// `errors`; the rest of the file is still processed. A missing required
/// column throws, naming the column.
ParseResult parse_records(const std::string& path, const ColumnMap& columns,
                          const std::vector<int>& election_years,
                          char delimiter = ',');

/// Canonical CSV: fixed column order, '#' metadata comment lines on top.
/// parse -> serialize -> parse is the identity on canonical datasets.
std::string canonical_csv(const Dataset& records,
                          const std::vector<std::string>& meta_lines);
void write_canonical_csv(const std::string& path, const Dataset& records,
                         const std::vector<std::string>& meta_lines);
ParseResult read_canonical_csv(const std::string& path,
                               const std::vector<int>& election_years);

enum class LinkField { MiddleName, Party };

struct LinkageReport {
  struct Item {
    std::size_t base_index;
    std::string field;
    std::string outcome; // "matched" | "ambiguous" | "unmatched"
    double similarity;   // best candidate similarity, 0 when no candidate
    std::string detail;
  };
  std::size_t matched = 0;
  std::size_t ambiguous = 0;
  std::size_t unmatched = 0;
  std::vector<Item> items;
};

/// Fills absent fields of `base` from `aux` records in the same
/// (province, year, position) block whose name similarity reaches the
/// threshold. A unique candidate is copied; two or more candidates above the
/// threshold leave the field absent. Present fields are never overwritten.
LinkageReport link_auxiliary(Dataset& base, const Dataset& aux,
                             const std::vector<LinkField>& fields,
                             double threshold = 0.90);

struct HopperReport {
  std::size_t flagged = 0;
  std::size_t excluded_duplicates = 0;
  std::vector<std::string> log;
};

/// Sets the hopper flag on every record: true iff the record's PersonKey has
/// exactly one record in the previous election cycle, both parties are known
/// and differ. First-cycle records get false. Duplicate PersonKeys inside one
/// (province, year) are excluded from matching and logged.
HopperReport assign_hopper(Dataset& records,
                           const std::vector<int>& election_years);

} // namespace kinnet
