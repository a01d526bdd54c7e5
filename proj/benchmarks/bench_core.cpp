#include "kinnet/indicators.hpp"
#include "kinnet/kin_graph.hpp"
#include "kinnet/leiden.hpp"
#include "kinnet/regress.hpp"
#include "kinnet/stats.hpp"
#include "kinnet/synthgen.hpp"

#include <benchmark/benchmark.h>

#include <random>

namespace {

using namespace kinnet;

// clique mixture: k cliques of size s plus sparse bridges
KinGraph clique_mixture(int cliques, int size, std::uint64_t seed) {
  KinGraph graph;
  graph.province = "BENCH";
  graph.year = 2004;
  std::mt19937_64 rng(seed);
  const int n = cliques * size;
  for (int v = 0; v < n; ++v) {
    graph.nodes.push_back({static_cast<std::size_t>(v), 2.0});
  }
  for (int c = 0; c < cliques; ++c) {
    const int base = c * size;
    for (int u = 0; u < size; ++u) {
      for (int v = u + 1; v < size; ++v) {
        graph.edges.push_back({static_cast<std::uint32_t>(base + u),
                               static_cast<std::uint32_t>(base + v), 3.0,
                               MatchKind::LastOnly});
      }
    }
    if (c > 0 && rng() % 4 == 0) {
      graph.edges.push_back({static_cast<std::uint32_t>(base - size),
                             static_cast<std::uint32_t>(base), 1.0,
                             MatchKind::MiddleOnly});
    }
  }
  return graph;
}

void bench_leiden(benchmark::State& state) {
  const int cliques = static_cast<int>(state.range(0));
  const KinGraph graph = clique_mixture(cliques, 8, 42);
  LeidenOptions options;
  for (auto _ : state) {
    benchmark::DoNotOptimize(leiden(graph, options));
  }
  state.SetItemsProcessed(state.iterations() * static_cast<int64_t>(graph.size()));
}
BENCHMARK(bench_leiden)->Arg(8)->Arg(32)->Arg(128);

void bench_build_graph(benchmark::State& state) {
  SynthConfig config;
  config.n_provinces = 1;
  config.years = {2004};
  config.clans_min = config.clans_max = 5;
  config.clan_size_min = 2;
  config.clan_size_max = 6;
  config.seed = 7;
  const SynthData data = generate(config);
  std::vector<std::size_t> indices(data.records.size());
  for (std::size_t i = 0; i < indices.size(); ++i) indices[i] = i;
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        build_graph(data.records, indices, data.records.front().province, 2004));
  }
}
BENCHMARK(bench_build_graph);

void bench_vertex_connectivity(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  std::mt19937_64 rng(99);
  std::vector<std::vector<int>> adj(static_cast<std::size_t>(n));
  // ring plus chords keeps it connected with nontrivial cuts
  for (int v = 0; v < n; ++v) {
    const int next = (v + 1) % n;
    adj[static_cast<std::size_t>(v)].push_back(next);
    adj[static_cast<std::size_t>(next)].push_back(v);
  }
  for (int extra = 0; extra < n; ++extra) {
    const int u = static_cast<int>(rng() % n);
    const int v = static_cast<int>(rng() % n);
    if (u == v) continue;
    adj[static_cast<std::size_t>(u)].push_back(v);
    adj[static_cast<std::size_t>(v)].push_back(u);
  }
  for (auto _ : state) {
    benchmark::DoNotOptimize(vertex_connectivity(adj));
  }
}
BENCHMARK(bench_vertex_connectivity)->Arg(12)->Arg(24)->Arg(48);

void bench_lmm(benchmark::State& state) {
  std::mt19937_64 rng(3);
  std::normal_distribution<double> normal;
  std::vector<double> y;
  std::vector<std::vector<double>> cols(4);
  std::vector<int> groups;
  for (int g = 0; g < 80; ++g) {
    const double alpha = 2.0 * normal(rng);
    for (int i = 0; i < 5; ++i) {
      double mu = alpha;
      for (std::size_t j = 0; j < cols.size(); ++j) {
        cols[j].push_back(normal(rng));
        mu += 0.25 * cols[j].back();
      }
      y.push_back(mu + normal(rng));
      groups.push_back(g);
    }
  }
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        lmm_random_intercept(y, cols, {"a", "b", "c", "d"}, groups, "y"));
  }
}
BENCHMARK(bench_lmm);

void bench_wilcoxon_exact(benchmark::State& state) {
  std::mt19937_64 rng(5);
  std::normal_distribution<double> normal;
  std::vector<std::pair<double, double>> pairs;
  for (int i = 0; i < 25; ++i) pairs.emplace_back(normal(rng), normal(rng));
  for (auto _ : state) {
    benchmark::DoNotOptimize(wilcoxon_signed_rank(pairs, Alternative::TwoSided, 25));
  }
}
BENCHMARK(bench_wilcoxon_exact);

} // namespace

BENCHMARK_MAIN();
