#include "kinnet/ingest.hpp"

#include "kinnet/csv.hpp"
#include "kinnet/names.hpp"

#include <algorithm>
#include <charconv>
#include <map>
#include <stdexcept>

namespace kinnet {

namespace {

std::optional<int> parse_int(std::string_view s) {
  int value = 0;
  const char* first = s.data();
  const char* last = s.data() + s.size();
  auto [ptr, ec] = std::from_chars(first, last, value);
  if (ec != std::errc{} || ptr != last) return std::nullopt;
  return value;
}

std::optional<bool> parse_flag(std::string_view s) {
  if (s == "1" || s == "true" || s == "TRUE") return true;
  if (s == "0" || s == "false" || s == "FALSE") return false;
  return std::nullopt;
}

} // namespace

ParseResult parse_records(const std::string& path, const ColumnMap& columns,
                          const std::vector<int>& election_years,
                          char delimiter) {
  const csv::Table table = csv::read_file(path, delimiter);

  auto required = [&](const std::string& name) {
    int idx = table.column(name);
    if (idx < 0) {
      throw std::runtime_error(path + ": missing required column '" + name + "'");
    }
    return idx;
  };
  const int c_last = required(columns.last_name);
  const int c_first = required(columns.first_name);
  const int c_position = required(columns.position);
  const int c_province = required(columns.province);
  const int c_year = required(columns.year);
  const int c_middle = table.column(columns.middle_name);
  const int c_party = table.column(columns.party);
  const int c_region = table.column(columns.region);
  const int c_municipality = table.column(columns.municipality);
  const int c_community = table.column(columns.community_id);
  const int c_dynastic = table.column(columns.dynastic);
  const int c_hopper = table.column(columns.hopper);

  ParseResult result;
  result.records.reserve(table.rows.size());
  for (std::size_t r = 0; r < table.rows.size(); ++r) {
    const auto& row = table.rows[r];
    auto field = [&](int idx) -> std::string_view {
      if (idx < 0 || static_cast<std::size_t>(idx) >= row.size()) return {};
      return row[static_cast<std::size_t>(idx)];
    };

    ElectionRecord rec;
    rec.last_name = normalize_name(field(c_last));
    rec.first_name = normalize_name(field(c_first));
    std::string middle = normalize_name(field(c_middle));
    if (!middle.empty()) rec.middle_name = std::move(middle);

    auto position = parse_position(field(c_position));
    if (!position) {
      result.errors.push_back(
          {r + 1, "unmapped position '" + std::string(field(c_position)) + "'"});
      continue;
    }
    rec.position = *position;

    auto year = parse_int(field(c_year));
    if (!year) {
      result.errors.push_back(
          {r + 1, "malformed year '" + std::string(field(c_year)) + "'"});
      continue;
    }
    if (std::find(election_years.begin(), election_years.end(), *year) ==
        election_years.end()) {
      result.errors.push_back(
          {r + 1, "year " + std::to_string(*year) + " outside the configured election-year set"});
      continue;
    }
    rec.year = *year;

    rec.party = normalize_party(field(c_party));
    rec.region = normalize_name(field(c_region));
    rec.province = normalize_name(field(c_province));
    rec.municipality = normalize_name(field(c_municipality));

    if (!field(c_community).empty()) {
      if (auto id = parse_int(field(c_community))) rec.community_id = *id;
    }
    if (auto flag = parse_flag(field(c_dynastic))) rec.dynastic = flag;
    if (auto flag = parse_flag(field(c_hopper))) rec.hopper = flag;

    result.records.push_back(std::move(rec));
  }
  return result;
}

namespace {

const std::vector<std::string> kCanonicalHeader = {
    "region",       "province",  "municipality", "year",
    "last_name",    "first_name", "middle_name", "position",
    "party",        "community_id", "dynastic",  "hopper",
};

} // namespace

std::string canonical_csv(const Dataset& records,
                          const std::vector<std::string>& meta_lines) {
  csv::Writer w;
  for (const auto& line : meta_lines) w.comment(line);
  w.row(kCanonicalHeader);
  for (const auto& r : records) {
    w.row({
        r.region,
        r.province,
        r.municipality,
        std::to_string(r.year),
        r.last_name,
        r.first_name,
        r.middle_name.value_or(""),
        std::string(position_token(r.position)),
        r.party.value_or(""),
        r.community_id ? std::to_string(*r.community_id) : "",
        r.dynastic ? (*r.dynastic ? "1" : "0") : "",
        r.hopper ? (*r.hopper ? "1" : "0") : "",
    });
  }
  return w.str();
}

void write_canonical_csv(const std::string& path, const Dataset& records,
                         const std::vector<std::string>& meta_lines) {
  csv::write_text_file(path, canonical_csv(records, meta_lines));
}

ParseResult read_canonical_csv(const std::string& path,
                               const std::vector<int>& election_years) {
  return parse_records(path, ColumnMap{}, election_years, ',');
}

namespace {

struct Block {
  std::vector<std::size_t> indices;
};

using BlockKey = std::tuple<std::string, int, Position>;

std::map<BlockKey, Block> block_by_province_year_position(const Dataset& records) {
  std::map<BlockKey, Block> blocks;
  for (std::size_t i = 0; i < records.size(); ++i) {
    const auto& r = records[i];
    blocks[BlockKey{r.province, r.year, r.position}].indices.push_back(i);
  }
  return blocks;
}

bool has_field(const ElectionRecord& r, LinkField field) {
  return field == LinkField::MiddleName ? r.middle_name.has_value()
                                        : r.party.has_value();
}

std::string_view field_name(LinkField field) {
  return field == LinkField::MiddleName ? "middle_name" : "party";
}

} // namespace

LinkageReport link_auxiliary(Dataset& base, const Dataset& aux,
                             const std::vector<LinkField>& fields,
                             double threshold) {
  LinkageReport report;
  const auto aux_blocks = block_by_province_year_position(aux);

  for (std::size_t i = 0; i < base.size(); ++i) {
    auto& rec = base[i];
    auto block_it = aux_blocks.find(BlockKey{rec.province, rec.year, rec.position});

    for (LinkField field : fields) {
      if (has_field(rec, field)) continue;

      std::size_t candidates = 0;
      double best = 0.0;
      std::size_t best_index = 0;
      if (block_it != aux_blocks.end()) {
        for (std::size_t j : block_it->second.indices) {
          const auto& cand = aux[j];
          if (!has_field(cand, field)) continue;
          double sim = name_pair_similarity(rec.last_name, rec.first_name,
                                            cand.last_name, cand.first_name);
          if (sim >= threshold) {
            ++candidates;
            if (sim > best) {
              best = sim;
              best_index = j;
            }
          } else if (sim > best && candidates == 0) {
            best = sim;
          }
        }
      }

      LinkageReport::Item item;
      item.base_index = i;
      item.field = std::string(field_name(field));
      item.similarity = best;
      if (candidates == 1) {
        const auto& src = aux[best_index];
        if (field == LinkField::MiddleName) {
          rec.middle_name = src.middle_name;
        } else {
          rec.party = src.party;
        }
        item.outcome = "matched";
        item.detail = src.last_name + ", " + src.first_name;
        ++report.matched;
      } else if (candidates >= 2) {
        item.outcome = "ambiguous";
        item.detail = std::to_string(candidates) + " candidates above threshold";
        ++report.ambiguous;
      } else {
        item.outcome = "unmatched";
        ++report.unmatched;
      }
      report.items.push_back(std::move(item));
    }
  }
  return report;
}

HopperReport assign_hopper(Dataset& records,
                           const std::vector<int>& election_years) {
  HopperReport report;
  std::vector<int> years = election_years;
  std::sort(years.begin(), years.end());

  std::map<int, int> prior_year; // cycle year -> previous cycle year
  for (std::size_t i = 1; i < years.size(); ++i) prior_year[years[i]] = years[i - 1];

  // (key, year) -> record count; duplicates within one (province, year) are
  // excluded from matching on both sides.
  std::map<std::pair<PersonKey, int>, int> occurrences;
  for (const auto& r : records) {
    ++occurrences[{person_key(r), r.year}];
  }
  std::map<std::pair<PersonKey, int>, const ElectionRecord*> unique_by_year;
  for (const auto& r : records) {
    auto key = std::make_pair(person_key(r), r.year);
    if (occurrences[key] == 1) unique_by_year[key] = &r;
  }

  for (auto& r : records) {
    r.hopper = false;
    auto self_key = std::make_pair(person_key(r), r.year);
    if (occurrences[self_key] > 1) {
      ++report.excluded_duplicates;
      report.log.push_back("duplicate person key excluded from hopper matching: " +
                           r.last_name + ", " + r.first_name + " (" + r.province +
                           " " + std::to_string(r.year) + ")");
      continue;
    }
    auto prior_it = prior_year.find(r.year);
    if (prior_it == prior_year.end()) continue; // first cycle
    auto prev = unique_by_year.find({person_key(r), prior_it->second});
    if (prev == unique_by_year.end()) continue; // no unique prior record
    const ElectionRecord& p = *prev->second;
    if (!r.party || !p.party) continue; // both parties must be known
    if (*r.party != *p.party) {
      r.hopper = true;
      ++report.flagged;
    }
  }
  return report;
}

} // namespace kinnet
