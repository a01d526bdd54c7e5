#include "kinnet/records.hpp"

#include "kinnet/names.hpp"

#include <algorithm>
#include <map>

namespace kinnet {

std::string_view position_token(Position p) {
  switch (p) {
  case Position::Governor: return "GOVERNOR";
  case Position::ViceGovernor: return "VICE_GOVERNOR";
  case Position::HouseRep: return "HOUSE_REP";
  case Position::Mayor: return "MAYOR";
  case Position::ViceMayor: return "VICE_MAYOR";
  case Position::BoardMember: return "BOARD_MEMBER";
  case Position::Councilor: return "COUNCILOR";
  }
  return "?";
}

namespace {

// Position lookup key: normalized, with commas/hyphens/underscores folded to
// spaces so "VICE-MAYOR", "VICE_MAYOR" and "VICE MAYOR" coincide.
std::string position_key(std::string_view raw) {
  std::string s = normalize_name(raw);
  for (char& c : s) {
    if (c == ',' || c == '-' || c == '_') c = ' ';
  }
  std::string out;
  out.reserve(s.size());
  bool pending = false;
  for (char c : s) {
    if (c == ' ') {
      pending = !out.empty();
      continue;
    }
    if (pending) out.push_back(' ');
    pending = false;
    out.push_back(c);
  }
  return out;
}

const std::map<std::string, Position, std::less<>>& position_aliases() {
  static const std::map<std::string, Position, std::less<>> aliases = {
      {"GOVERNOR", Position::Governor},
      {"PROVINCIAL GOVERNOR", Position::Governor},
      {"VICE GOVERNOR", Position::ViceGovernor},
      {"PROVINCIAL VICE GOVERNOR", Position::ViceGovernor},
      {"HOUSE REP", Position::HouseRep},
      {"MEMBER HOUSE OF REPRESENTATIVES", Position::HouseRep},
      {"HOUSE OF REPRESENTATIVES", Position::HouseRep},
      {"REPRESENTATIVE", Position::HouseRep},
      {"CONGRESSIONAL DISTRICT REPRESENTATIVE", Position::HouseRep},
      {"DISTRICT REPRESENTATIVE", Position::HouseRep},
      {"CONGRESSMAN", Position::HouseRep},
      {"MAYOR", Position::Mayor},
      {"MUNICIPAL MAYOR", Position::Mayor},
      {"CITY MAYOR", Position::Mayor},
      {"VICE MAYOR", Position::ViceMayor},
      {"MUNICIPAL VICE MAYOR", Position::ViceMayor},
      {"CITY VICE MAYOR", Position::ViceMayor},
      {"BOARD MEMBER", Position::BoardMember},
      {"PROVINCIAL BOARD MEMBER", Position::BoardMember},
      {"SANGGUNIANG PANLALAWIGAN", Position::BoardMember},
      {"SANGGUNIANG PANLALAWIGAN MEMBER", Position::BoardMember},
      {"SP MEMBER", Position::BoardMember},
      {"COUNCILOR", Position::Councilor},
      {"COUNCILLOR", Position::Councilor},
      {"CITY COUNCILOR", Position::Councilor},
      {"MUNICIPAL COUNCILOR", Position::Councilor},
      {"SANGGUNIANG PANLUNGSOD", Position::Councilor},
      {"SANGGUNIANG PANLUNGSOD MEMBER", Position::Councilor},
      {"SANGGUNIANG BAYAN", Position::Councilor},
      {"SANGGUNIANG BAYAN MEMBER", Position::Councilor},
  };
  return aliases;
}

} // namespace

std::optional<Position> parse_position(std::string_view raw) {
  const auto& aliases = position_aliases();
  auto it = aliases.find(position_key(raw));
  if (it == aliases.end()) return std::nullopt;
  return it->second;
}

PersonKey person_key(const ElectionRecord& r) {
  return PersonKey{
      r.first_name,
      r.middle_name.value_or(""),
      r.last_name,
      r.province,
  };
}

std::vector<std::pair<ProvinceYear, std::vector<std::size_t>>>
group_by_province_year(const Dataset& records) {
  std::map<ProvinceYear, std::vector<std::size_t>> groups;
  for (std::size_t i = 0; i < records.size(); ++i) {
    groups[ProvinceYear{records[i].province, records[i].year}].push_back(i);
  }
  return {groups.begin(), groups.end()};
}

std::optional<std::string> normalize_party(std::string_view raw) {
  std::string s = normalize_name(raw);
  if (s.empty()) return std::nullopt;
  if (s == "IND" || s == "INDEPENDENT" || s == "INDEPENDIENTE") return std::string("IND");
  return s;
}

} // namespace kinnet
