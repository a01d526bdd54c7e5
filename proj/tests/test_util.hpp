// Shared oracles and generators for the test suites. Everything here is an
// independent implementation path: brute-force or textbook-formula versions
// of quantities the library computes by smarter means.
#pragma once

#include "kinnet/kin_graph.hpp"
#include "kinnet/partition.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

namespace testutil {

// Bounded draws via multiply-high so sequences are platform-independent.
class Rng {
public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}
  std::uint64_t next() { return engine_(); }
  std::uint32_t below(std::uint32_t n) {
    return static_cast<std::uint32_t>(
        (static_cast<unsigned __int128>(next()) * n) >> 64);
  }
  double uniform01() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }
  double gaussian() {
    double u1 = uniform01();
    while (u1 <= 0.0) u1 = uniform01();
    return std::sqrt(-2.0 * std::log(u1)) *
           std::cos(2.0 * 3.14159265358979323846 * uniform01());
  }

private:
  std::mt19937_64 engine_;
};

// Plain edge-list graph for oracle work.
struct TestGraph {
  int n = 0;
  std::vector<std::tuple<int, int, double>> edges;
};

inline kinnet::KinGraph to_kin_graph(const TestGraph& g, double node_weight = 2.0) {
  kinnet::KinGraph graph;
  graph.province = "TEST";
  graph.year = 2004;
  for (int v = 0; v < g.n; ++v) {
    graph.nodes.push_back({static_cast<std::size_t>(v), node_weight});
  }
  for (const auto& [u, v, w] : g.edges) {
    graph.edges.push_back({static_cast<std::uint32_t>(u),
                           static_cast<std::uint32_t>(v), w,
                           kinnet::MatchKind::LastOnly});
  }
  return graph;
}

inline TestGraph random_graph(Rng& rng, int max_n = 10) {
  TestGraph g;
  g.n = 1 + static_cast<int>(rng.below(static_cast<std::uint32_t>(max_n)));
  const double p = rng.uniform01();
  for (int u = 0; u < g.n; ++u) {
    for (int v = u + 1; v < g.n; ++v) {
      if (rng.uniform01() < p) {
        g.edges.emplace_back(u, v, 0.25 + 24.75 * rng.uniform01());
      }
    }
  }
  return g;
}

// Direct evaluation of the modularity formula from per-community sums; kept
// independent of the library implementation.
inline double modularity_oracle(const TestGraph& g, const std::vector<int>& assignment,
                                double gamma) {
  double m = 0.0;
  for (const auto& [u, v, w] : g.edges) m += w;
  if (m <= 0.0) return 0.0;
  const int k = *std::max_element(assignment.begin(), assignment.end()) + 1;
  std::vector<double> intra(static_cast<std::size_t>(k), 0.0);
  std::vector<double> degree(static_cast<std::size_t>(k), 0.0);
  for (const auto& [u, v, w] : g.edges) {
    degree[static_cast<std::size_t>(assignment[static_cast<std::size_t>(u)])] += w;
    degree[static_cast<std::size_t>(assignment[static_cast<std::size_t>(v)])] += w;
    if (assignment[static_cast<std::size_t>(u)] == assignment[static_cast<std::size_t>(v)]) {
      intra[static_cast<std::size_t>(assignment[static_cast<std::size_t>(u)])] += w;
    }
  }
  double h = 0.0;
  for (int c = 0; c < k; ++c) {
    h += intra[static_cast<std::size_t>(c)] / m -
         gamma * degree[static_cast<std::size_t>(c)] * degree[static_cast<std::size_t>(c)] /
             (4.0 * m * m);
  }
  return h;
}

// Enumerates every set partition of n elements (restricted growth strings)
// and returns the maximum oracle modularity.
inline double brute_force_best_modularity(const TestGraph& g, double gamma) {
  std::vector<int> assignment(static_cast<std::size_t>(g.n), 0);
  double best = -1e300;
  // iterative restricted-growth enumeration
  std::vector<int> rgs(static_cast<std::size_t>(g.n), 0);
  for (;;) {
    best = std::max(best, modularity_oracle(g, rgs, gamma));
    int i = g.n - 1;
    for (; i > 0; --i) {
      int max_prefix = 0;
      for (int j = 0; j < i; ++j) max_prefix = std::max(max_prefix, rgs[static_cast<std::size_t>(j)]);
      if (rgs[static_cast<std::size_t>(i)] <= max_prefix) {
        ++rgs[static_cast<std::size_t>(i)];
        break;
      }
      rgs[static_cast<std::size_t>(i)] = 0;
    }
    if (i == 0) break;
  }
  (void)assignment;
  return best;
}

// Exhaustive minimum vertex cut: smallest vertex subset whose removal
// disconnects the graph; n-1 when no subset does (complete graphs).
inline int vertex_connectivity_oracle(const std::vector<std::vector<int>>& adj) {
  const int n = static_cast<int>(adj.size());
  if (n == 1) return 0;
  auto connected_without = [&](unsigned removed_mask) {
    int start = -1;
    int remaining = 0;
    for (int v = 0; v < n; ++v) {
      if (!(removed_mask & (1u << v))) {
        ++remaining;
        if (start < 0) start = v;
      }
    }
    if (remaining <= 1) return true;
    unsigned seen = 1u << start;
    std::vector<int> stack{start};
    int reached = 1;
    while (!stack.empty()) {
      const int v = stack.back();
      stack.pop_back();
      for (int u : adj[static_cast<std::size_t>(v)]) {
        const unsigned bit = 1u << u;
        if ((removed_mask & bit) || (seen & bit)) continue;
        seen |= bit;
        ++reached;
        stack.push_back(u);
      }
    }
    return reached == remaining;
  };
  for (int size = 1; size <= n - 2; ++size) {
    for (unsigned mask = 0; mask < (1u << n); ++mask) {
      if (__builtin_popcount(mask) != size) continue;
      if (!connected_without(mask)) return size;
    }
  }
  return n - 1;
}

// Mean-absolute-difference Gini over raw values, O(n^2).
inline double gini_mad_oracle(const std::vector<double>& values) {
  const std::size_t n = values.size();
  double total = 0.0;
  for (double v : values) total += v;
  double mad = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      mad += std::fabs(values[i] - values[j]);
    }
  }
  return mad / (2.0 * static_cast<double>(n) * total);
}

// Adjusted Rand index between two labelings.
inline double adjusted_rand_index(const std::vector<int>& a, const std::vector<int>& b) {
  const std::size_t n = a.size();
  const int ka = *std::max_element(a.begin(), a.end()) + 1;
  const int kb = *std::max_element(b.begin(), b.end()) + 1;
  std::vector<std::vector<long long>> table(static_cast<std::size_t>(ka),
                                            std::vector<long long>(static_cast<std::size_t>(kb), 0));
  for (std::size_t i = 0; i < n; ++i) {
    ++table[static_cast<std::size_t>(a[i])][static_cast<std::size_t>(b[i])];
  }
  auto choose2 = [](long long x) { return x * (x - 1) / 2; };
  long long sum_ij = 0, sum_a = 0, sum_b = 0;
  for (int i = 0; i < ka; ++i) {
    long long row = 0;
    for (int j = 0; j < kb; ++j) {
      sum_ij += choose2(table[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)]);
      row += table[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
    }
    sum_a += choose2(row);
  }
  for (int j = 0; j < kb; ++j) {
    long long col = 0;
    for (int i = 0; i < ka; ++i) col += table[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
    sum_b += choose2(col);
  }
  const double expected = static_cast<double>(sum_a) * static_cast<double>(sum_b) /
                          static_cast<double>(choose2(static_cast<long long>(n)));
  const double max_index = 0.5 * (static_cast<double>(sum_a) + static_cast<double>(sum_b));
  if (max_index == expected) return 1.0;
  return (static_cast<double>(sum_ij) - expected) / (max_index - expected);
}

// Gaussian elimination on the normal equations; the independent OLS solver.
inline std::vector<double> normal_equations_ols(
    const std::vector<double>& y, const std::vector<std::vector<double>>& columns) {
  const std::size_t n = y.size();
  const std::size_t p = columns.size() + 1;
  std::vector<std::vector<double>> x(n, std::vector<double>(p, 1.0));
  for (std::size_t j = 0; j < columns.size(); ++j) {
    for (std::size_t i = 0; i < n; ++i) x[i][j + 1] = columns[j][i];
  }
  std::vector<std::vector<double>> a(p, std::vector<double>(p + 1, 0.0));
  for (std::size_t r = 0; r < p; ++r) {
    for (std::size_t c = 0; c < p; ++c) {
      for (std::size_t i = 0; i < n; ++i) a[r][c] += x[i][r] * x[i][c];
    }
    for (std::size_t i = 0; i < n; ++i) a[r][p] += x[i][r] * y[i];
  }
  for (std::size_t col = 0; col < p; ++col) {
    std::size_t pivot = col;
    for (std::size_t r = col + 1; r < p; ++r) {
      if (std::fabs(a[r][col]) > std::fabs(a[pivot][col])) pivot = r;
    }
    std::swap(a[col], a[pivot]);
    for (std::size_t r = 0; r < p; ++r) {
      if (r == col) continue;
      const double factor = a[r][col] / a[col][col];
      for (std::size_t c = col; c <= p; ++c) a[r][c] -= factor * a[col][c];
    }
  }
  std::vector<double> beta(p);
  for (std::size_t r = 0; r < p; ++r) beta[r] = a[r][p] / a[r][r];
  return beta;
}

} // namespace testutil
