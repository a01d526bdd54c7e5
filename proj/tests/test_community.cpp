#include "kinnet/leiden.hpp"

#include "kinnet/modularity.hpp"
#include "test_util.hpp"

#include <doctest.h>

#include <algorithm>
#include <numeric>
#include <queue>

using namespace kinnet;
using testutil::TestGraph;

namespace {

TestGraph two_triangles() {
  TestGraph g;
  g.n = 6;
  for (int base : {0, 3}) {
    g.edges.emplace_back(base, base + 1, 1.0);
    g.edges.emplace_back(base + 1, base + 2, 1.0);
    g.edges.emplace_back(base, base + 2, 1.0);
  }
  return g;
}

TestGraph clique(int n, int offset, TestGraph g = {}) {
  g.n = std::max(g.n, offset + n);
  for (int u = 0; u < n; ++u) {
    for (int v = u + 1; v < n; ++v) {
      g.edges.emplace_back(offset + u, offset + v, 1.0);
    }
  }
  return g;
}

bool community_connected(const KinGraph& graph, const Partition& partition) {
  const auto adjacency = graph.adjacency();
  for (const auto& members : partition.members()) {
    if (members.empty()) return false;
    std::vector<bool> in_community(graph.nodes.size(), false);
    for (auto v : members) in_community[v] = true;
    std::vector<bool> seen(graph.nodes.size(), false);
    std::queue<std::uint32_t> queue;
    queue.push(members[0]);
    seen[members[0]] = true;
    std::size_t reached = 1;
    while (!queue.empty()) {
      const auto v = queue.front();
      queue.pop();
      for (const auto& [u, w] : adjacency[v]) {
        (void)w;
        if (in_community[u] && !seen[u]) {
          seen[u] = true;
          ++reached;
          queue.push(u);
        }
      }
    }
    if (reached != members.size()) return false;
  }
  return true;
}

Partition partition_of(const std::vector<int>& assignment) {
  Partition p;
  p.assignment = assignment;
  p.num_communities = *std::max_element(assignment.begin(), assignment.end()) + 1;
  return p;
}

} // namespace

TEST_CASE("modularity hand values") {
  // two disjoint unit triangles split into the two triangles: H = 0.5
  const TestGraph g = two_triangles();
  const KinGraph graph = testutil::to_kin_graph(g);
  CHECK(modularity(graph, partition_of({0, 0, 0, 1, 1, 1}), 1.0) ==
        doctest::Approx(0.5).epsilon(1e-12));
  // agreement with the direct formula oracle
  CHECK(modularity(graph, partition_of({0, 0, 0, 1, 1, 1}), 1.0) ==
        doctest::Approx(testutil::modularity_oracle(g, {0, 0, 0, 1, 1, 1}, 1.0)));

  // everything in one community scores 1 - gamma
  CHECK(modularity(graph, partition_of({0, 0, 0, 0, 0, 0}), 1.0) ==
        doctest::Approx(0.0).epsilon(1e-12));
  CHECK(modularity(graph, partition_of({0, 0, 0, 0, 0, 0}), 0.25) ==
        doctest::Approx(0.75).epsilon(1e-12));

  // zero-weight graph is defined as 0
  TestGraph edgeless;
  edgeless.n = 4;
  CHECK(modularity(testutil::to_kin_graph(edgeless), partition_of({0, 1, 2, 3}), 1.0) == 0.0);
}

TEST_CASE("modularity matches the oracle on random partitions") {
  testutil::Rng rng(2024);
  for (int trial = 0; trial < 100; ++trial) {
    const TestGraph g = testutil::random_graph(rng, 9);
    std::vector<int> assignment(static_cast<std::size_t>(g.n));
    int k = 1 + static_cast<int>(rng.below(static_cast<std::uint32_t>(g.n)));
    for (auto& a : assignment) a = static_cast<int>(rng.below(static_cast<std::uint32_t>(k)));
    // densify labels so num_communities is honest
    std::vector<int> remap(static_cast<std::size_t>(k), -1);
    int next = 0;
    for (auto& a : assignment) {
      if (remap[static_cast<std::size_t>(a)] < 0) remap[static_cast<std::size_t>(a)] = next++;
      a = remap[static_cast<std::size_t>(a)];
    }
    const double gamma = 0.25 + 1.5 * rng.uniform01();
    CHECK(modularity(testutil::to_kin_graph(g), partition_of(assignment), gamma) ==
          doctest::Approx(testutil::modularity_oracle(g, assignment, gamma)).epsilon(1e-10));
  }
}

TEST_CASE("leiden matches the brute-force optimum on the curated suite") {
  std::vector<std::pair<std::string, TestGraph>> suite;
  suite.emplace_back("two disjoint 4-cliques", clique(4, 4, clique(4, 0)));
  {
    TestGraph barbell = clique(4, 4, clique(4, 0));
    barbell.edges.emplace_back(3, 4, 1.0); // bridge
    suite.emplace_back("barbell", barbell);
  }
  {
    // star of cliques: a hub node attached to two triangles
    TestGraph star = clique(3, 1, clique(3, 4));
    star.n = 7;
    star.edges.emplace_back(0, 1, 1.0);
    star.edges.emplace_back(0, 4, 1.0);
    suite.emplace_back("star of cliques", star);
  }
  {
    TestGraph edgeless;
    edgeless.n = 6;
    suite.emplace_back("edgeless", edgeless);
  }
  suite.emplace_back("two triangles", two_triangles());

  for (const auto& [name, g] : suite) {
    CAPTURE(name);
    const KinGraph graph = testutil::to_kin_graph(g);
    LeidenOptions options;
    options.seed = 7;
    const Partition partition = leiden(graph, options);
    const double best = testutil::brute_force_best_modularity(g, 1.0);
    CHECK(partition.modularity == doctest::Approx(best).epsilon(1e-9));
    CHECK(community_connected(graph, partition));
  }
}

TEST_CASE("leiden splits the barbell into its two cliques") {
  TestGraph barbell = clique(4, 4, clique(4, 0));
  barbell.edges.emplace_back(3, 4, 1.0);
  const Partition partition = leiden(testutil::to_kin_graph(barbell));
  REQUIRE(partition.num_communities == 2);
  for (int v : {1, 2, 3}) CHECK(partition.assignment[0] == partition.assignment[v]);
  for (int v : {5, 6, 7}) CHECK(partition.assignment[4] == partition.assignment[v]);
  CHECK(partition.assignment[0] != partition.assignment[4]);
}

TEST_CASE("resolution controls granularity") {
  // the barbell at a low resolution merges into one community
  TestGraph barbell = clique(4, 4, clique(4, 0));
  barbell.edges.emplace_back(3, 4, 1.0);
  const KinGraph graph = testutil::to_kin_graph(barbell);
  LeidenOptions coarse;
  coarse.gamma = 0.1;
  const Partition merged = leiden(graph, coarse);
  CHECK(merged.num_communities == 1);
  CHECK(merged.modularity ==
        doctest::Approx(testutil::brute_force_best_modularity(barbell, 0.1)).epsilon(1e-9));
}

TEST_CASE("leiden on an edgeless graph yields singletons") {
  TestGraph g;
  g.n = 5;
  const Partition partition = leiden(testutil::to_kin_graph(g));
  CHECK(partition.num_communities == 5);
  CHECK(partition.modularity == 0.0);
}

TEST_CASE("leiden is deterministic for a fixed seed") {
  testutil::Rng rng(555);
  for (int trial = 0; trial < 20; ++trial) {
    const TestGraph g = testutil::random_graph(rng, 10);
    const KinGraph graph = testutil::to_kin_graph(g);
    LeidenOptions options;
    options.seed = 1234 + static_cast<std::uint64_t>(trial);
    const Partition a = leiden(graph, options);
    const Partition b = leiden(graph, options);
    CHECK(a.assignment == b.assignment);
    CHECK(a.modularity == b.modularity);
  }
}

TEST_CASE("leiden results admit no improving single-node move") {
  testutil::Rng rng(121212);
  for (int trial = 0; trial < 60; ++trial) {
    const TestGraph g = testutil::random_graph(rng, 8);
    const KinGraph graph = testutil::to_kin_graph(g);
    LeidenOptions options;
    options.seed = 40 + static_cast<std::uint64_t>(trial);
    const Partition p = leiden(graph, options);
    const double base = modularity(graph, p, 1.0);
    for (std::size_t v = 0; v < graph.nodes.size(); ++v) {
      for (int target = 0; target <= p.num_communities; ++target) {
        if (target == p.assignment[v]) continue;
        Partition q = p;
        q.assignment[v] = target;
        q.num_communities = p.num_communities + (target == p.num_communities ? 1 : 0);
        std::vector<int> remap(static_cast<std::size_t>(q.num_communities), -1);
        int next = 0;
        for (int& a : q.assignment) {
          if (remap[static_cast<std::size_t>(a)] < 0) remap[static_cast<std::size_t>(a)] = next++;
          a = remap[static_cast<std::size_t>(a)];
        }
        q.num_communities = next;
        CHECK(modularity(graph, q, 1.0) <= base + 1e-9);
      }
    }
  }
}

TEST_CASE("leiden communities are always connected, isolated nodes singleton") {
  testutil::Rng rng(808);
  for (int trial = 0; trial < 60; ++trial) {
    TestGraph g = testutil::random_graph(rng, 10);
    g.n += 2; // guarantee two isolated nodes
    const KinGraph graph = testutil::to_kin_graph(g);
    const Partition partition = leiden(graph);
    CHECK(community_connected(graph, partition));
    const auto members = partition.members();
    const auto degrees = graph.weighted_degrees();
    for (std::size_t v = 0; v < graph.nodes.size(); ++v) {
      if (degrees[v] == 0.0) {
        CHECK(members[static_cast<std::size_t>(partition.assignment[v])].size() == 1);
      }
    }
  }
}

TEST_CASE("weighted switch changes the objective") {
  // heavy bridge between two unit triangles: with weights the bridge holds
  // everything together, unweighted it splits into the triangles
  TestGraph g = two_triangles();
  g.edges.emplace_back(2, 3, 100.0);
  const KinGraph graph = testutil::to_kin_graph(g);

  LeidenOptions weighted;
  weighted.weighted = true;
  const Partition merged = leiden(graph, weighted);
  TestGraph unit = g; // brute force over the weighted objective
  CHECK(merged.modularity ==
        doctest::Approx(testutil::brute_force_best_modularity(unit, 1.0)).epsilon(1e-9));

  LeidenOptions unweighted;
  unweighted.weighted = false;
  const Partition split = leiden(graph, unweighted);
  CHECK(split.num_communities == 2);
  CHECK(split.assignment[0] == split.assignment[1]);
  CHECK(split.assignment[0] == split.assignment[2]);
  CHECK(split.assignment[3] == split.assignment[4]);
  CHECK(split.assignment[3] == split.assignment[5]);
}

TEST_CASE("community ids are ordered by descending node weight") {
  // one large-weight pair and one small triangle
  Dataset records;
  auto rec = [](std::string last, std::string first, Position p) {
    ElectionRecord r;
    r.last_name = std::move(last);
    r.first_name = std::move(first);
    r.position = p;
    r.province = "X";
    r.year = 2004;
    return r;
  };
  records.push_back(rec("AAA", "A", Position::Councilor));
  records.push_back(rec("AAA", "B", Position::Councilor));
  records.push_back(rec("AAA", "C", Position::Councilor));
  records.push_back(rec("ZZZ", "D", Position::Governor));
  records.push_back(rec("ZZZ", "E", Position::Governor));
  std::vector<std::size_t> indices = {0, 1, 2, 3, 4};
  const KinGraph graph = build_graph(records, indices, "X", 2004);
  const Partition partition = leiden(graph);
  REQUIRE(partition.num_communities == 2);
  // the governor pair (weight 10) outranks the councilor triangle (weight 6)
  for (std::size_t v = 0; v < graph.nodes.size(); ++v) {
    const auto& record = records[graph.nodes[v].record_index];
    if (record.last_name == "ZZZ") CHECK(partition.assignment[v] == 0);
    if (record.last_name == "AAA") CHECK(partition.assignment[v] == 1);
  }
}
