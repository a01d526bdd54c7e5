#include "kinnet/party.hpp"

#include <algorithm>
#include <stdexcept>
#include <tuple>

namespace kinnet {

std::string_view group_token(Group g) {
  return g == Group::Dynastic ? "dynastic" : "non_dynastic";
}

MajorPartyMap default_major_party_map() {
  return {
      {2004, "LKS-CMD"}, {2007, "LKS-CMD"}, {2010, "LKS-KAM"}, {2013, "LP"},
      {2016, "LP"},      {2019, "PDPLBN"},  {2022, "PDPLBN"},
  };
}

std::size_t assign_dynastic(Dataset& records) {
  std::map<std::tuple<std::string, int, int>, int> community_sizes;
  for (const auto& r : records) {
    if (!r.community_id) {
      throw std::runtime_error("assign_dynastic: record without community id: " +
                               r.last_name + ", " + r.first_name + " (" + r.province +
                               " " + std::to_string(r.year) + ")");
    }
    ++community_sizes[{r.province, r.year, *r.community_id}];
  }
  std::size_t flagged = 0;
  for (auto& r : records) {
    const bool dynastic = community_sizes[{r.province, r.year, *r.community_id}] >= 2;
    r.dynastic = dynastic;
    if (dynastic) ++flagged;
  }
  return flagged;
}

std::vector<HoppingCell> hopping_rates(const Dataset& records,
                                       const std::vector<int>& election_years) {
  std::vector<int> years = election_years;
  std::sort(years.begin(), years.end());
  const int first_year = years.empty() ? 0 : years.front();

  struct Tally {
    int hoppers[2] = {0, 0};
    int eligible[2] = {0, 0};
  };
  std::map<std::pair<std::string, int>, Tally> cells;
  for (const auto& r : records) {
    if (r.year <= first_year) continue; // hopper undefined on the first cycle
    if (!r.dynastic || !r.hopper) {
      throw std::runtime_error("hopping_rates: dynastic/hopper flags not assigned");
    }
    auto& tally = cells[{r.province, r.year}];
    const int g = *r.dynastic ? 0 : 1;
    tally.eligible[g] += 1;
    if (*r.hopper) tally.hoppers[g] += 1;
  }

  std::vector<HoppingCell> out;
  out.reserve(cells.size() * 2);
  for (const auto& [key, tally] : cells) {
    for (int g = 0; g < 2; ++g) {
      HoppingCell cell;
      cell.province = key.first;
      cell.year = key.second;
      cell.group = g == 0 ? Group::Dynastic : Group::NonDynastic;
      cell.hoppers = tally.hoppers[g];
      cell.eligible = tally.eligible[g];
      if (cell.eligible > 0) {
        cell.rate = static_cast<double>(cell.hoppers) / cell.eligible;
      }
      out.push_back(std::move(cell));
    }
  }
  return out;
}

std::vector<OverlapRow> dynasty_party_overlap(const Dataset& records,
                                              bool size_weighted) {
  // (province, year, community) -> member count and per-party counts
  struct Community {
    int size = 0;
    std::map<std::string, int> party_counts;
  };
  std::map<std::pair<std::string, int>, std::map<int, Community>> by_py;
  for (const auto& r : records) {
    if (!r.community_id) {
      throw std::runtime_error("dynasty_party_overlap: record without community id");
    }
    auto& community = by_py[{r.province, r.year}][*r.community_id];
    community.size += 1;
    if (r.party) community.party_counts[*r.party] += 1;
  }

  std::vector<OverlapRow> out;
  out.reserve(by_py.size());
  for (const auto& [key, communities] : by_py) {
    OverlapRow row;
    row.province = key.first;
    row.year = key.second;
    double weighted_sum = 0.0;
    double weight_total = 0.0;
    for (const auto& [id, community] : communities) {
      (void)id;
      if (community.size < 2) continue; // not a dynastic community
      int known = 0;
      int modal = 0;
      for (const auto& [party, count] : community.party_counts) {
        (void)party;
        known += count;
        modal = std::max(modal, count);
      }
      if (known == 0) continue; // all parties unknown
      const double share = static_cast<double>(modal) / known;
      const double weight = size_weighted ? community.size : 1.0;
      weighted_sum += share * weight;
      weight_total += weight;
      row.n_communities += 1;
    }
    if (weight_total > 0.0) row.mean_overlap = weighted_sum / weight_total;
    out.push_back(std::move(row));
  }
  return out;
}

std::vector<BandwagonRow> bandwagon_rates(const Dataset& records,
                                          const MajorPartyMap& map) {
  struct Tally {
    int numerator[2] = {0, 0};
    int denominator[2] = {0, 0};
  };
  std::map<int, Tally> by_year;
  for (const auto& r : records) {
    auto major = map.find(r.year);
    if (major == map.end()) {
      throw std::runtime_error("bandwagon_rates: year " + std::to_string(r.year) +
                               " missing from the major-party map");
    }
    if (!r.dynastic || !r.hopper) {
      throw std::runtime_error("bandwagon_rates: dynastic/hopper flags not assigned");
    }
    auto& tally = by_year[r.year];
    const int g = *r.dynastic ? 0 : 1;
    tally.denominator[g] += 1;
    if (*r.hopper && r.party && *r.party == major->second) {
      tally.numerator[g] += 1;
    }
  }

  std::vector<BandwagonRow> out;
  for (const auto& [year, tally] : by_year) {
    for (int g = 0; g < 2; ++g) {
      BandwagonRow row;
      row.year = year;
      row.group = g == 0 ? Group::Dynastic : Group::NonDynastic;
      row.numerator = tally.numerator[g];
      row.denominator = tally.denominator[g];
      if (row.denominator > 0) {
        row.rate = static_cast<double>(row.numerator) / row.denominator;
      }
      out.push_back(row);
    }
  }
  return out;
}

std::vector<MembershipRow> party_membership_table(
    const Dataset& records, const std::vector<std::string>& parties) {
  std::map<std::tuple<std::string, int, int>, int> counts;
  for (const auto& r : records) {
    if (!r.dynastic) {
      throw std::runtime_error("party_membership_table: dynastic flags not assigned");
    }
    if (!r.party) continue;
    const bool listed =
        std::find(parties.begin(), parties.end(), *r.party) != parties.end();
    const std::string label = listed ? *r.party : "OTHER";
    ++counts[{label, r.year, *r.dynastic ? 0 : 1}];
  }
  std::vector<MembershipRow> out;
  out.reserve(counts.size());
  for (const auto& [key, count] : counts) {
    out.push_back({std::get<0>(key), std::get<1>(key),
                   std::get<2>(key) == 0 ? Group::Dynastic : Group::NonDynastic,
                   count});
  }
  return out;
}

std::map<int, double> dynastic_share_by_year(const Dataset& records) {
  std::map<int, std::pair<int, int>> tallies; // year -> (dynastic, total)
  for (const auto& r : records) {
    if (!r.dynastic) {
      throw std::runtime_error("dynastic_share_by_year: dynastic flags not assigned");
    }
    auto& [dyn, total] = tallies[r.year];
    if (*r.dynastic) ++dyn;
    ++total;
  }
  std::map<int, double> out;
  for (const auto& [year, tally] : tallies) {
    out[year] = static_cast<double>(tally.first) / tally.second;
  }
  return out;
}

} // namespace kinnet
