#pragma once

#include "kinnet/records.hpp"

#include <map>
#include <optional>
#include <string>
#include <vector>

namespace kinnet {

enum class Group { Dynastic, NonDynastic };

std::string_view group_token(Group g);

/// Party-hopping tally for one (province, year, group). Dynastic and
/// non-dynastic cells of the same province-year are emitted adjacently so
/// paired tests can consume them directly.
struct HoppingCell {
  std::string province;
  int year = 0;
  Group group = Group::Dynastic;
  int hoppers = 0;
  int eligible = 0;
  std::optional<double> rate; // hoppers/eligible, undefined when eligible == 0
};

struct OverlapRow {
  std::string province;
  int year = 0;
  std::optional<double> mean_overlap; // undefined without dynastic communities
  int n_communities = 0;              // communities included in the mean
};

struct BandwagonRow {
  int year = 0;
  Group group = Group::Dynastic;
  int numerator = 0;   // group members who hopped into the year's major party
  int denominator = 0; // all group members who won that year
  std::optional<double> rate;
};

struct MembershipRow {
  std::string party;
  int year = 0;
  Group group = Group::Dynastic;
  int count = 0;
};

/// Election year -> party of the sitting president at the time.
using MajorPartyMap = std::map<int, std::string>;
MajorPartyMap default_major_party_map();

/// dynastic = true iff at least two records share (province, year,
/// community_id). Throws when a record has no community id. Returns the
/// number of dynastic records.
std::size_t assign_dynastic(Dataset& records);

/// Hopping cells for every (province, year>=second cycle, group).
std::vector<HoppingCell> hopping_rates(const Dataset& records,
                                       const std::vector<int>& election_years);

/// Per province-year mean modal-party share over communities with >= 2
/// simultaneous members; members with unknown party are ignored and
/// all-unknown communities excluded. Unweighted mean by default; the
/// size-weighted variant weights each community by its member count.
std::vector<OverlapRow> dynasty_party_overlap(const Dataset& records,
                                              bool size_weighted = false);

/// National bandwagoning rate per (year, group). Throws when a year in the
/// data is missing from the map.
std::vector<BandwagonRow> bandwagon_rates(const Dataset& records,
                                          const MajorPartyMap& map);

/// Winner counts per (party, year, group); parties outside `parties`
/// aggregate into "OTHER". Records with unknown party are not counted.
std::vector<MembershipRow> party_membership_table(
    const Dataset& records, const std::vector<std::string>& parties);

/// Fraction of dynastic winners per year.
std::map<int, double> dynastic_share_by_year(const Dataset& records);

} // namespace kinnet
