#include "kinnet/ingest.hpp"

#include "kinnet/csv.hpp"
#include "test_util.hpp"

#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>

using namespace kinnet;

namespace {

const std::vector<int> kYears = {2004, 2007, 2010, 2013, 2016, 2019, 2022};

std::string temp_file(const std::string& name, const std::string& content) {
  const std::string path =
      (std::filesystem::temp_directory_path() / ("kinnet_test_" + name)).string();
  std::ofstream out(path, std::ios::binary);
  out << content;
  return path;
}

ElectionRecord make_record(std::string last, std::string first, std::string middle,
                           Position position, std::string party, std::string province,
                           int year) {
  ElectionRecord r;
  r.last_name = std::move(last);
  r.first_name = std::move(first);
  if (!middle.empty()) r.middle_name = std::move(middle);
  r.position = position;
  if (!party.empty()) r.party = std::move(party);
  r.province = std::move(province);
  r.year = year;
  return r;
}

} // namespace

TEST_CASE("parse_records maps rows and collects row errors") {
  const std::string path = temp_file(
      "parse.csv",
      "Last Name,First Name,Middle Name,Position,Party,Province,Year\n"
      "CRUZ,JUAN,SANTOS,GOVERNOR,LP,SAMAR,2016\n"
      "Reyes,Maria,,\"MEMBER, HOUSE OF REPRESENTATIVES\",NPC,SAMAR,2016\n"
      "Uy,Pedro,Tan,MAYOR,npc,SAMAR,20x4\n"
      "Go,Ana,,CHIEF WIZARD,LP,SAMAR,2016\n"
      "Peña,Jose,,COUNCILOR,Independent,SAMAR,2016\n");
  ColumnMap columns;
  columns.last_name = "Last Name";
  columns.first_name = "First Name";
  columns.middle_name = "Middle Name";
  columns.position = "Position";
  columns.party = "Party";
  columns.province = "Province";
  columns.year = "Year";

  const ParseResult result = parse_records(path, columns, kYears);
  REQUIRE(result.records.size() == 3);
  CHECK(result.records[0].last_name == "CRUZ");
  CHECK(result.records[0].position == Position::Governor);
  CHECK(result.records[0].party == "LP");
  CHECK(result.records[1].position == Position::HouseRep);
  CHECK_FALSE(result.records[1].middle_name.has_value());
  CHECK(result.records[2].last_name == "PENA");
  CHECK(result.records[2].party == "IND"); // independents normalize to IND

  REQUIRE(result.errors.size() == 2);
  CHECK(result.errors[0].message.find("malformed year") != std::string::npos);
  CHECK(result.errors[1].message.find("CHIEF WIZARD") != std::string::npos);
}

TEST_CASE("parse_records hard-errors on a missing required column") {
  const std::string path = temp_file("missing_col.csv",
                                     "last_name,first_name,province,year\n"
                                     "CRUZ,JUAN,SAMAR,2016\n");
  CHECK_THROWS_WITH_AS(parse_records(path, ColumnMap{}, kYears),
                       doctest::Contains("position"), std::runtime_error);
}

TEST_CASE("canonical round trip: parse(serialize(parse)) is the identity") {
  Dataset records;
  records.push_back(make_record("DELA CRUZ", "JOSE", "RIZAL", Position::Mayor, "LP",
                                "SAMAR", 2016));
  records.push_back(make_record("UY-TAN", "STEPHANY", "", Position::ViceMayor, "",
                                "SAMAR", 2016));
  records.push_back(
      make_record("O\"HARA, JR", "MA LUISA", "X", Position::Councilor, "IND", "CEBU", 2019));
  records[0].community_id = 3;
  records[0].dynastic = true;
  records[0].hopper = false;
  records[1].municipality = "CATBALOGAN";
  records[2].region = "REGION VII";

  const std::string path =
      (std::filesystem::temp_directory_path() / "kinnet_roundtrip.csv").string();
  write_canonical_csv(path, records, {"fixture"});
  const ParseResult once = read_canonical_csv(path, kYears);
  REQUIRE(once.errors.empty());
  REQUIRE(once.records.size() == records.size());

  write_canonical_csv(path, once.records, {"fixture"});
  const ParseResult twice = read_canonical_csv(path, kYears);
  REQUIRE(twice.errors.empty());
  REQUIRE(twice.records.size() == records.size());
  for (std::size_t i = 0; i < records.size(); ++i) {
    const auto& a = once.records[i];
    const auto& b = twice.records[i];
    CHECK(a.last_name == b.last_name);
    CHECK(a.first_name == b.first_name);
    CHECK(a.middle_name == b.middle_name);
    CHECK(a.position == b.position);
    CHECK(a.party == b.party);
    CHECK(a.province == b.province);
    CHECK(a.municipality == b.municipality);
    CHECK(a.year == b.year);
    CHECK(a.community_id == b.community_id);
    CHECK(a.dynastic == b.dynastic);
    CHECK(a.hopper == b.hopper);
  }
}

TEST_CASE("link_auxiliary fills absent fields from unique block matches") {
  Dataset base;
  base.push_back(make_record("DELA CRUZ", "JOSE", "", Position::Mayor, "LP", "RIZAL", 2016));
  Dataset aux;
  aux.push_back(make_record("DELA CRUZ", "JOSE", "RIZAL", Position::Mayor, "NPC", "RIZAL", 2016));

  const LinkageReport report = link_auxiliary(base, aux, {LinkField::MiddleName});
  CHECK(report.matched == 1);
  CHECK(base[0].middle_name == "RIZAL");
  CHECK(base[0].party == "LP"); // present fields are never overwritten
}

TEST_CASE("link_auxiliary leaves ambiguous fields absent") {
  Dataset base;
  base.push_back(make_record("SANTOS", "ANA", "", Position::Mayor, "", "RIZAL", 2016));
  Dataset aux;
  aux.push_back(make_record("SANTOS", "ANA", "X", Position::Mayor, "LP", "RIZAL", 2016));
  aux.push_back(make_record("SANTOS", "ANA", "Y", Position::Mayor, "NPC", "RIZAL", 2016));

  const LinkageReport report =
      link_auxiliary(base, aux, {LinkField::MiddleName, LinkField::Party});
  CHECK(report.ambiguous == 2);
  CHECK_FALSE(base[0].middle_name.has_value());
  CHECK_FALSE(base[0].party.has_value());
}

TEST_CASE("link_auxiliary accepts near matches above the threshold") {
  // JW("SANTOS MA LUISA", "SANTOS MARIA LUISA") = 0.92666.. >= 0.90
  Dataset base;
  base.push_back(make_record("SANTOS", "MA LUISA", "", Position::Councilor, "", "CEBU", 2019));
  Dataset aux;
  aux.push_back(
      make_record("SANTOS", "MARIA LUISA", "GO", Position::Councilor, "LP", "CEBU", 2019));

  LinkageReport report = link_auxiliary(base, aux, {LinkField::MiddleName}, 0.90);
  REQUIRE(report.items.size() == 1);
  CHECK(report.items[0].similarity == doctest::Approx(0.9266666666666666));
  CHECK(base[0].middle_name == "GO");

  // a stricter threshold rejects the same pair
  Dataset base2;
  base2.push_back(make_record("SANTOS", "MA LUISA", "", Position::Councilor, "", "CEBU", 2019));
  report = link_auxiliary(base2, aux, {LinkField::MiddleName}, 0.95);
  CHECK(report.unmatched == 1);
  CHECK_FALSE(base2[0].middle_name.has_value());
}

TEST_CASE("assign_hopper flags party changes between successive cycles") {
  Dataset records;
  records.push_back(make_record("CRUZ", "JUAN", "M", Position::Mayor, "LP", "SAMAR", 2013));
  records.push_back(make_record("CRUZ", "JUAN", "M", Position::Mayor, "PDPLBN", "SAMAR", 2016));
  records.push_back(make_record("GO", "ANA", "", Position::Mayor, "LP", "SAMAR", 2016));
  records.push_back(make_record("TAN", "BEN", "", Position::Mayor, "", "SAMAR", 2013));
  records.push_back(make_record("TAN", "BEN", "", Position::Mayor, "NPC", "SAMAR", 2016));

  const HopperReport report = assign_hopper(records, kYears);
  CHECK(report.flagged == 1);
  CHECK(records[0].hopper == false); // 2013 has no prior cycle in the data
  CHECK(records[1].hopper == true);  // LP -> PDPLBN
  CHECK(records[2].hopper == false); // no prior record
  CHECK(records[4].hopper == false); // prior party unknown
}

TEST_CASE("assign_hopper excludes duplicate person keys") {
  Dataset records;
  records.push_back(make_record("CRUZ", "JUAN", "M", Position::Mayor, "LP", "SAMAR", 2013));
  records.push_back(make_record("CRUZ", "JUAN", "M", Position::Councilor, "NPC", "SAMAR", 2013));
  records.push_back(make_record("CRUZ", "JUAN", "M", Position::Mayor, "PDPLBN", "SAMAR", 2016));

  const HopperReport report = assign_hopper(records, kYears);
  CHECK(report.excluded_duplicates == 2);
  CHECK(records[2].hopper == false); // no unique prior record
}

TEST_CASE("hopper flags are consistent under a re-scan") {
  // property: hopper=true implies a unique prior-cycle record with a
  // different known party
  Dataset records;
  testutil::Rng rng(99);
  const std::vector<std::string> parties = {"LP", "NPC", "PDPLBN"};
  for (int person = 0; person < 40; ++person) {
    const std::string last = "FAM" + std::to_string(person % 7);
    const std::string first = "P" + std::to_string(person);
    for (std::size_t yi = 0; yi < kYears.size(); ++yi) {
      if (rng.uniform01() < 0.3) continue; // gaps in service
      std::string party;
      if (rng.uniform01() < 0.9) party = parties[rng.below(3)];
      records.push_back(make_record(last, first, "M", Position::Councilor, party,
                                    "SAMAR", kYears[yi]));
    }
  }
  assign_hopper(records, kYears);
  for (const auto& r : records) {
    REQUIRE(r.hopper.has_value());
    if (!*r.hopper) continue;
    int prior_count = 0;
    const ElectionRecord* prior = nullptr;
    for (const auto& other : records) {
      if (other.year == r.year - 3 && person_key(other) == person_key(r)) {
        ++prior_count;
        prior = &other;
      }
    }
    CHECK(prior_count == 1);
    REQUIRE(prior != nullptr);
    REQUIRE(prior->party.has_value());
    REQUIRE(r.party.has_value());
    CHECK(*prior->party != *r.party);
  }
}
