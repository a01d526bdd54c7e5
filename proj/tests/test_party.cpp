#include "kinnet/party.hpp"

#include <doctest.h>

#include <algorithm>

using namespace kinnet;

namespace {

ElectionRecord rec(std::string last, std::string first, std::string province, int year,
                   int community, std::string party = "", Position position = Position::Councilor) {
  ElectionRecord r;
  r.last_name = std::move(last);
  r.first_name = std::move(first);
  r.position = position;
  if (!party.empty()) r.party = std::move(party);
  r.province = std::move(province);
  r.year = year;
  r.community_id = community;
  return r;
}

const std::vector<int> kYears = {2004, 2007, 2010, 2013, 2016, 2019, 2022};

} // namespace

TEST_CASE("assign_dynastic flags communities with 2+ simultaneous members") {
  Dataset records;
  records.push_back(rec("A", "1", "SAMAR", 2016, 0));
  records.push_back(rec("A", "2", "SAMAR", 2016, 0));
  records.push_back(rec("A", "3", "SAMAR", 2016, 0));
  records.push_back(rec("B", "4", "SAMAR", 2016, 1)); // singleton community
  // same surname in another province, community ids reused per province
  records.push_back(rec("A", "5", "CEBU", 2016, 0));

  const std::size_t flagged = assign_dynastic(records);
  CHECK(flagged == 3);
  CHECK(records[0].dynastic == true);
  CHECK(records[1].dynastic == true);
  CHECK(records[2].dynastic == true);
  CHECK(records[3].dynastic == false);
  CHECK(records[4].dynastic == false); // within-province matching only

  records[0].community_id.reset();
  CHECK_THROWS(assign_dynastic(records));
}

TEST_CASE("hopping_rates per province-year-group") {
  Dataset records;
  // 2016 SAMAR: 10 dynastic with 3 hoppers; 4 non-dynastic with 0 hoppers
  for (int i = 0; i < 10; ++i) {
    auto r = rec("DYN", std::to_string(i), "SAMAR", 2016, 0, "LP");
    r.dynastic = true;
    r.hopper = i < 3;
    records.push_back(r);
  }
  for (int i = 0; i < 4; ++i) {
    auto r = rec("SOLO", std::to_string(i), "SAMAR", 2016, 100 + i, "LP");
    r.dynastic = false;
    r.hopper = false;
    records.push_back(r);
  }
  // first-cycle records never enter the tally
  auto first_cycle = rec("DYN", "X", "SAMAR", 2004, 0, "LP");
  first_cycle.dynastic = true;
  first_cycle.hopper = false;
  records.push_back(first_cycle);

  const auto cells = hopping_rates(records, kYears);
  REQUIRE(cells.size() == 2);
  CHECK(cells[0].group == Group::Dynastic);
  CHECK(cells[0].hoppers == 3);
  CHECK(cells[0].eligible == 10);
  CHECK(cells[0].rate.value() == doctest::Approx(0.3));
  CHECK(cells[1].group == Group::NonDynastic);
  CHECK(cells[1].rate.value() == 0.0);

  // eligible tally equals total winners past the first cycle
  int eligible = 0;
  for (const auto& cell : cells) eligible += cell.eligible;
  CHECK(eligible == 14);
}

TEST_CASE("hopping_rates leaves empty groups undefined") {
  Dataset records;
  auto r = rec("DYN", "1", "SAMAR", 2016, 0, "LP");
  r.dynastic = true;
  r.hopper = false;
  records.push_back(r);
  auto r2 = rec("DYN", "2", "SAMAR", 2016, 0, "LP");
  r2.dynastic = true;
  r2.hopper = true;
  records.push_back(r2);

  const auto cells = hopping_rates(records, kYears);
  REQUIRE(cells.size() == 2);
  CHECK(cells[0].rate.value() == doctest::Approx(0.5));
  CHECK(cells[1].eligible == 0);
  CHECK_FALSE(cells[1].rate.has_value()); // excluded from paired tests
}

TEST_CASE("dynasty_party_overlap modal share") {
  Dataset records;
  // community of 4: LP, LP, LP, NPC -> 0.75
  records.push_back(rec("A", "1", "SAMAR", 2016, 0, "LP"));
  records.push_back(rec("A", "2", "SAMAR", 2016, 0, "LP"));
  records.push_back(rec("A", "3", "SAMAR", 2016, 0, "LP"));
  records.push_back(rec("A", "4", "SAMAR", 2016, 0, "NPC"));
  // community of 2 all same party -> 1.0
  records.push_back(rec("B", "5", "SAMAR", 2016, 1, "NP"));
  records.push_back(rec("B", "6", "SAMAR", 2016, 1, "NP"));
  // singleton: excluded
  records.push_back(rec("C", "7", "SAMAR", 2016, 2, "LP"));
  // community with all parties unknown: excluded
  records.push_back(rec("D", "8", "SAMAR", 2016, 3));
  records.push_back(rec("D", "9", "SAMAR", 2016, 3));

  const auto rows = dynasty_party_overlap(records);
  REQUIRE(rows.size() == 1);
  CHECK(rows[0].n_communities == 2);
  CHECK(rows[0].mean_overlap.value() == doctest::Approx((0.75 + 1.0) / 2.0));

  // the size-weighted variant favors the larger community
  const auto weighted = dynasty_party_overlap(records, true);
  CHECK(weighted[0].mean_overlap.value() ==
        doctest::Approx((0.75 * 4 + 1.0 * 2) / 6.0));

  // bounds: overlap of an included community lies in [1/size, 1]
  for (const auto& row : rows) {
    if (row.mean_overlap) {
      CHECK(*row.mean_overlap <= 1.0);
      CHECK(*row.mean_overlap >= 0.25);
    }
  }
}

TEST_CASE("dynasty_party_overlap undefined without dynastic communities") {
  Dataset records;
  records.push_back(rec("A", "1", "SAMAR", 2016, 0, "LP"));
  records.push_back(rec("B", "2", "SAMAR", 2016, 1, "NP"));
  const auto rows = dynasty_party_overlap(records);
  REQUIRE(rows.size() == 1);
  CHECK_FALSE(rows[0].mean_overlap.has_value());
  CHECK(rows[0].n_communities == 0);
}

TEST_CASE("bandwagon_rates counts hops into the year's major party") {
  Dataset records;
  // 100 dynastic winners in 2016, 8 of them hopped into LP (map(2016) = LP)
  for (int i = 0; i < 100; ++i) {
    auto r = rec("DYN", std::to_string(i), "SAMAR", 2016, 0,
                 i < 8 ? "LP" : "NPC");
    r.dynastic = true;
    r.hopper = i < 12; // 8 hopped into LP, 4 hopped elsewhere
    records.push_back(r);
  }
  const auto rows = bandwagon_rates(records, default_major_party_map());
  REQUIRE(rows.size() == 2);
  CHECK(rows[0].group == Group::Dynastic);
  CHECK(rows[0].numerator == 8);
  CHECK(rows[0].denominator == 100);
  CHECK(rows[0].rate.value() == doctest::Approx(0.08));
  // empty group stays undefined
  CHECK(rows[1].denominator == 0);
  CHECK_FALSE(rows[1].rate.has_value());

  // numerator never exceeds the hopper count
  int hoppers = 0;
  for (const auto& r : records) {
    if (*r.hopper && *r.dynastic) ++hoppers;
  }
  CHECK(rows[0].numerator <= hoppers);

  // a year missing from the map is an error
  auto odd = rec("X", "1", "SAMAR", 2016, 0, "LP");
  odd.dynastic = false;
  odd.hopper = false;
  odd.year = 2016;
  Dataset bad{odd};
  MajorPartyMap empty_map;
  CHECK_THROWS(bandwagon_rates(bad, empty_map));
}

TEST_CASE("party_membership_table aggregates unlisted parties as OTHER") {
  Dataset records;
  auto add = [&](std::string party, int year, bool dynastic) {
    auto r = rec("A", std::to_string(records.size()), "SAMAR", year, 0, std::move(party));
    r.dynastic = dynastic;
    records.push_back(r);
  };
  add("LP", 2013, true);
  add("LP", 2013, true);
  add("NPC", 2013, false);
  add("LP", 2016, false);

  const auto rows = party_membership_table(records, {"LP"});
  auto find = [&](const std::string& party, int year, Group group) -> int {
    for (const auto& row : rows) {
      if (row.party == party && row.year == year && row.group == group) return row.count;
    }
    return 0;
  };
  CHECK(find("LP", 2013, Group::Dynastic) == 2);
  CHECK(find("OTHER", 2013, Group::NonDynastic) == 1);
  CHECK(find("LP", 2016, Group::NonDynastic) == 1);

  // empty party list: everything known lands in OTHER
  const auto other_only = party_membership_table(records, {});
  for (const auto& row : other_only) CHECK(row.party == "OTHER");
}

TEST_CASE("dynastic share per year is reproducible from the flags") {
  Dataset records;
  for (int i = 0; i < 10; ++i) {
    auto r = rec("A", std::to_string(i), "SAMAR", 2016, i < 6 ? 0 : 10 + i);
    records.push_back(r);
  }
  assign_dynastic(records);
  const auto share = dynastic_share_by_year(records);
  CHECK(share.at(2016) == doctest::Approx(0.6));
}
