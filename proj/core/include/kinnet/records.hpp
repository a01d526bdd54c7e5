#pragma once

#include <compare>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace kinnet {

enum class Position : std::uint8_t {
  Governor,
  ViceGovernor,
  HouseRep,
  Mayor,
  ViceMayor,
  BoardMember,
  Councilor,
};

inline constexpr int kNumPositions = 7;

/// Canonical serialized token, e.g. "GOVERNOR", "VICE_GOVERNOR".
std::string_view position_token(Position p);

/// Maps a raw position string onto the enum via the alias table (canonical
/// tokens, COMELEC-style long forms, Sangguniang names). Returns nullopt for
/// anything unrecognized.
std::optional<Position> parse_position(std::string_view raw);

/// One elected official in one (province, year).
struct ElectionRecord {
  std::string last_name;
  std::string first_name;
  std::optional<std::string> middle_name;
  Position position = Position::Councilor;
  std::optional<std::string> party; // absent = unknown, never empty
  std::string region;
  std::string province;
  std::string municipality;
  int year = 0;
  std::optional<int> community_id;
  std::optional<bool> dynastic;
  std::optional<bool> hopper;
};

using Dataset = std::vector<ElectionRecord>;

/// Identity used for cross-cycle matching: exact equality on the normalized
/// 4-tuple. An absent middle name participates as the empty string.
struct PersonKey {
  std::string first_name;
  std::string middle_name;
  std::string last_name;
  std::string province;

  auto operator<=>(const PersonKey&) const = default;
};

PersonKey person_key(const ElectionRecord& r);

struct ProvinceYear {
  std::string province;
  int year = 0;

  auto operator<=>(const ProvinceYear&) const = default;
};

/// Groups record indices by (province, year), keys ascending, indices in
/// input order.
std::vector<std::pair<ProvinceYear, std::vector<std::size_t>>>
group_by_province_year(const Dataset& records);

/// Normalizes a party string: name normalization plus independent aliasing
/// ("INDEPENDENT" and variants become "IND"). Empty after normalization maps
/// to nullopt.
std::optional<std::string> normalize_party(std::string_view raw);

} // namespace kinnet
