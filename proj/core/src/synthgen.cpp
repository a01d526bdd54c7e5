#include "kinnet/synthgen.hpp"

#include "kinnet/kin_graph.hpp"
#include "kinnet/partition.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>

namespace kinnet {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ull;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
  return x ^ (x >> 31);
}

class Rng {
public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}
  std::uint64_t next() { return engine_(); }
  std::uint32_t below(std::uint32_t n) {
    return static_cast<std::uint32_t>(
        (static_cast<unsigned __int128>(next()) * n) >> 64);
  }
  int uniform_int(int lo, int hi) { // inclusive
    return lo + static_cast<int>(below(static_cast<std::uint32_t>(hi - lo + 1)));
  }
  double uniform01() {
    return static_cast<double>(next() >> 11) * 0x1.0p-53;
  }
  bool bernoulli(double p) { return uniform01() < p; }
  double gaussian() {
    // Box-Muller on fixed draws keeps the stream platform-independent.
    double u1 = uniform01();
    while (u1 <= 0.0) u1 = uniform01();
    const double u2 = uniform01();
    return std::sqrt(-2.0 * std::log(u1)) *
           std::cos(2.0 * 3.14159265358979323846 * u2);
  }
  template <typename T>
  void shuffle(std::vector<T>& values) {
    for (std::uint32_t i = static_cast<std::uint32_t>(values.size()); i > 1; --i) {
      std::swap(values[i - 1], values[below(i)]);
    }
  }

private:
  std::mt19937_64 engine_;
};

std::string base26(int value, int width) {
  std::string out(static_cast<std::size_t>(width), 'A');
  for (int i = width - 1; i >= 0 && value > 0; --i) {
    out[static_cast<std::size_t>(i)] = static_cast<char>('A' + value % 26);
    value /= 26;
  }
  return out;
}

struct Seat {
  Position position;
  std::string municipality;
};

std::vector<Seat> seat_pool(const SynthConfig& config) {
  std::vector<Seat> seats;
  seats.push_back({Position::Governor, "CAPITOL"});
  seats.push_back({Position::ViceGovernor, "CAPITOL"});
  for (int i = 0; i < config.house_reps; ++i) {
    seats.push_back({Position::HouseRep, "CAPITOL"});
  }
  for (int i = 0; i < config.board_members; ++i) {
    seats.push_back({Position::BoardMember, "CAPITOL"});
  }
  for (int m = 0; m < config.municipalities; ++m) {
    const std::string muni = "MUNI " + base26(m, 2);
    seats.push_back({Position::Mayor, muni});
    seats.push_back({Position::ViceMayor, muni});
    for (int c = 0; c < config.councilors_per_municipality; ++c) {
      seats.push_back({Position::Councilor, muni});
    }
  }
  return seats;
}

struct Person {
  std::string last, first;
  std::string middle; // always set for synthetic persons
  int clan = -1;      // -1 = singleton
  Seat seat;
  std::string party;
  bool active_prev_cycle = false;
};

} // namespace

SynthData generate(const SynthConfig& config) {
  if (config.n_provinces <= 0 || config.years.empty()) {
    throw std::invalid_argument("synthgen: need provinces and years");
  }
  if (config.clan_size_min < 2 || config.clan_size_max < config.clan_size_min) {
    throw std::invalid_argument("synthgen: clan sizes must satisfy 2 <= min <= max");
  }
  if (config.parties.empty()) {
    throw std::invalid_argument("synthgen: party list is empty");
  }

  std::vector<int> years = config.years;
  std::sort(years.begin(), years.end());

  SynthData data;
  data.truth.hop_records.clear();

  int clan_counter = 0;
  int person_counter = 0;

  for (int p = 0; p < config.n_provinces; ++p) {
    Rng rng(splitmix64(config.seed ^ (0xA5A5A5A5ull + 7919ull * (p + 1))));
    const std::string province = "PROVINCE " + base26(p, 2);
    const std::string region = "REGION " + base26(p % 4, 1);

    // clan pools
    const int n_clans = rng.uniform_int(config.clans_min, config.clans_max);
    std::vector<std::vector<Person>> clans(static_cast<std::size_t>(n_clans));
    std::vector<std::string> clan_surnames;
    for (int c = 0; c < n_clans; ++c) {
      const std::string surname = "CLAN" + base26(clan_counter++, 3);
      clan_surnames.push_back(surname);
      const int size = rng.uniform_int(config.clan_size_min, config.clan_size_max);
      for (int i = 0; i < size; ++i) {
        Person person;
        person.last = surname;
        person.first = "FIRST" + base26(person_counter, 3);
        person.middle = "MID" + base26(person_counter, 3);
        ++person_counter;
        person.clan = c;
        clans[static_cast<std::size_t>(c)].push_back(std::move(person));
      }
      // intermarriage: the clan's senior member carries the previous clan's
      // surname as a middle name, bridging the two components
      if (c > 0 && rng.bernoulli(config.intermarriage_prob)) {
        clans[static_cast<std::size_t>(c)][0].middle = clan_surnames[static_cast<std::size_t>(c - 1)];
      }
    }

    const int n_singletons = rng.uniform_int(config.singletons_min, config.singletons_max);
    std::vector<Person> singletons;
    for (int i = 0; i < n_singletons; ++i) {
      Person person;
      person.last = "SOLO" + base26(person_counter, 3);
      person.first = "FIRST" + base26(person_counter, 3);
      person.middle = "MID" + base26(person_counter, 3);
      ++person_counter;
      singletons.push_back(std::move(person));
    }

    // stable seat assignment for the whole panel
    std::vector<Person*> persons;
    for (auto& clan : clans) {
      for (auto& person : clan) persons.push_back(&person);
    }
    for (auto& person : singletons) persons.push_back(&person);
    std::vector<Seat> seats = seat_pool(config);
    if (persons.size() > seats.size()) {
      throw std::runtime_error(
          "synthgen: infeasible config, " + std::to_string(persons.size()) +
          " politicians for " + std::to_string(seats.size()) + " positions in " + province);
    }
    rng.shuffle(seats);
    for (std::size_t i = 0; i < persons.size(); ++i) persons[i]->seat = seats[i];

    // initial parties
    for (int c = 0; c < n_clans; ++c) {
      const std::string clan_party =
          config.parties[rng.below(static_cast<std::uint32_t>(config.parties.size()))];
      for (auto& person : clans[static_cast<std::size_t>(c)]) {
        person.party = rng.bernoulli(config.party_cohesion)
                           ? clan_party
                           : config.parties[rng.below(static_cast<std::uint32_t>(config.parties.size()))];
      }
    }
    for (auto& person : singletons) {
      person.party = config.parties[rng.below(static_cast<std::uint32_t>(config.parties.size()))];
    }

    const double hdi_intercept = rng.gaussian() * config.hdi_model.sigma_province;
    const double pov_intercept = rng.gaussian() * config.pov_model.sigma_province;
    data.truth.hdi_intercepts[province] = hdi_intercept;
    data.truth.pov_intercepts[province] = pov_intercept;

    for (int year : years) {
      const bool first_cycle = year == years.front();

      // active roster this cycle
      std::vector<Person*> active;
      std::vector<bool> singleton_active(singletons.size(), false);
      for (auto& clan : clans) {
        const int max_active = static_cast<int>(clan.size());
        const int count = rng.uniform_int(std::min(2, max_active), max_active);
        for (int i = 0; i < count; ++i) active.push_back(&clan[static_cast<std::size_t>(i)]);
      }
      for (std::size_t i = 0; i < singletons.size(); ++i) {
        if (rng.bernoulli(config.singleton_presence)) {
          singleton_active[i] = true;
          active.push_back(&singletons[i]);
        }
      }

      // party evolution and the records themselves
      std::vector<std::size_t> group_indices;
      for (Person* person : active) {
        bool hopped = false;
        if (!first_cycle && person->active_prev_cycle) {
          const double hop_prob = person->clan >= 0 ? config.hop_prob_dynastic
                                                    : config.hop_prob_non_dynastic;
          if (config.parties.size() > 1 && rng.bernoulli(hop_prob)) {
            std::string next_party = person->party;
            while (next_party == person->party) {
              next_party = config.parties[rng.below(static_cast<std::uint32_t>(config.parties.size()))];
            }
            person->party = next_party;
            hopped = true;
          }
        }

        ElectionRecord rec;
        rec.last_name = person->last;
        rec.first_name = person->first;
        rec.middle_name = person->middle;
        rec.position = person->seat.position;
        rec.party = person->party;
        rec.region = region;
        rec.province = province;
        rec.municipality = person->seat.municipality;
        rec.year = year;
        group_indices.push_back(data.records.size());
        data.truth.clan_of_record.push_back(person->clan);
        if (hopped) data.truth.hop_records.push_back(data.records.size());
        data.records.push_back(std::move(rec));
      }

      // mark presence for the next cycle
      for (auto& clan : clans) {
        for (auto& person : clan) person.active_prev_cycle = false;
      }
      for (auto& person : singletons) person.active_prev_cycle = false;
      for (Person* person : active) person->active_prev_cycle = true;

      // true indicators under the planted partition
      const KinGraph graph = build_graph(data.records, group_indices, province, year);
      Partition planted;
      planted.assignment.resize(graph.nodes.size());
      std::map<int, int> label_map; // clan id (or -node) -> dense community
      int next_label = 0;
      for (std::size_t v = 0; v < graph.nodes.size(); ++v) {
        const std::size_t rec_index = graph.nodes[v].record_index;
        const int clan = data.truth.clan_of_record[rec_index];
        const int key = clan >= 0 ? clan : -static_cast<int>(rec_index) - 1;
        auto [it, inserted] = label_map.emplace(key, next_label);
        if (inserted) ++next_label;
        planted.assignment[v] = it->second;
      }
      planted.num_communities = next_label;

      IndicatorRow truth_row;
      truth_row.province = province;
      truth_row.year = year;
      truth_row.hhi = political_hhi(graph, planted);
      truth_row.cgc = centrality_gini(graph);
      truth_row.ccd = connected_component_density(graph);
      truth_row.acc = average_community_connectivity(graph, planted);
      truth_row.n_nodes = static_cast<int>(graph.nodes.size());
      truth_row.n_edges = static_cast<int>(graph.edges.size());
      truth_row.n_communities = planted.num_communities;
      truth_row.n_components = count_components(graph);
      data.truth.true_indicators.push_back(truth_row);

      auto socio_value = [&](const SynthSocioModel& model, double intercept_draw) {
        double value = model.intercept + intercept_draw +
                       model.c_acc * truth_row.acc + model.c_ccd * truth_row.ccd +
                       model.c_cgc * truth_row.cgc.value_or(0.0);
        if (truth_row.hhi > 0.0) value += model.c_log_hhi * std::log(truth_row.hhi);
        return value + rng.gaussian() * model.sigma_noise;
      };
      SocioRow socio;
      socio.province = province;
      socio.year = year;
      socio.hdi = socio_value(config.hdi_model, hdi_intercept);
      socio.pov = socio_value(config.pov_model, pov_intercept);
      data.socio.push_back(std::move(socio));
    }
  }
  return data;
}

} // namespace kinnet
