#include "kinnet/leiden.hpp"

#include "kinnet/modularity.hpp"

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <random>
#include <stdexcept>
#include <vector>

namespace kinnet {

namespace {

// mt19937_64 output is pinned by the standard; bounded draws go through a
// multiply-high reduction so sequences are identical across platforms.
class Rng {
public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next() { return engine_(); }

  std::uint32_t below(std::uint32_t n) {
    return static_cast<std::uint32_t>(
        (static_cast<unsigned __int128>(next()) * n) >> 64);
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

struct WorkGraph {
  int n = 0;
  std::vector<std::vector<std::pair<int, double>>> adj; // no self entries
  std::vector<double> self_weight; // internal weight of an aggregate node
  std::vector<double> strength;    // incident weight + 2 * self_weight
  double m = 0.0;                  // total weight
};

WorkGraph make_work_graph(const KinGraph& graph, bool weighted) {
  WorkGraph g;
  g.n = static_cast<int>(graph.nodes.size());
  g.adj.resize(graph.nodes.size());
  g.self_weight.assign(graph.nodes.size(), 0.0);
  g.strength.assign(graph.nodes.size(), 0.0);
  for (const auto& e : graph.edges) {
    const double w = weighted ? e.weight : 1.0;
    g.adj[e.u].emplace_back(static_cast<int>(e.v), w);
    g.adj[e.v].emplace_back(static_cast<int>(e.u), w);
    g.strength[e.u] += w;
    g.strength[e.v] += w;
    g.m += w;
  }
  return g;
}

// Renumbers labels to a dense 0..k-1 range by first occurrence; returns k.
int densify(std::vector<int>& labels) {
  std::vector<int> remap(labels.size(), -1);
  int next = 0;
  for (int& label : labels) {
    if (remap[static_cast<std::size_t>(label)] < 0) {
      remap[static_cast<std::size_t>(label)] = next++;
    }
    label = remap[static_cast<std::size_t>(label)];
  }
  return next;
}

// Queue-driven local moving. Gains are expressed directly in modularity
// units: moving v into community C is worth k(v->C)/m - g*s_v*K_C/(2m^2),
// with K_C excluding v; terms constant across destinations cancel.
bool move_nodes_fast(const WorkGraph& g, std::vector<int>& comm, double gamma,
                     double tol, Rng& rng) {
  const int n = g.n;
  std::vector<double> comm_strength(static_cast<std::size_t>(n), 0.0);
  std::vector<int> comm_size(static_cast<std::size_t>(n), 0);
  for (int v = 0; v < n; ++v) {
    comm_strength[static_cast<std::size_t>(comm[v])] += g.strength[v];
    comm_size[static_cast<std::size_t>(comm[v])] += 1;
  }
  std::vector<int> free_ids;
  for (int c = 0; c < n; ++c) {
    if (comm_size[static_cast<std::size_t>(c)] == 0) free_ids.push_back(c);
  }

  std::vector<int> queue(static_cast<std::size_t>(n));
  std::iota(queue.begin(), queue.end(), 0);
  rng.shuffle(queue);
  std::vector<bool> queued(static_cast<std::size_t>(n), true);
  std::size_t head = 0;

  std::vector<double> k_to(static_cast<std::size_t>(n), 0.0);
  std::vector<int> touched;
  const double inv_m = 1.0 / g.m;
  const double inv_2m2 = 1.0 / (2.0 * g.m * g.m);

  bool any_moved = false;
  while (head < queue.size()) {
    const int v = queue[head++];
    queued[static_cast<std::size_t>(v)] = false;
    const int a = comm[v];

    touched.clear();
    for (const auto& [u, w] : g.adj[v]) {
      const int c = comm[u];
      if (k_to[static_cast<std::size_t>(c)] == 0.0) touched.push_back(c);
      k_to[static_cast<std::size_t>(c)] += w;
    }

    comm_strength[static_cast<std::size_t>(a)] -= g.strength[v];
    const auto gain = [&](int c) {
      return k_to[static_cast<std::size_t>(c)] * inv_m -
             gamma * g.strength[v] * comm_strength[static_cast<std::size_t>(c)] * inv_2m2;
    };

    const double stay = gain(a);
    double best = stay;
    int best_comm = a;
    for (int c : touched) {
      if (c == a) continue;
      const double value = gain(c);
      if (value > best) {
        best = value;
        best_comm = c;
      }
    }
    // a fresh empty community is worth exactly 0
    if (comm_size[static_cast<std::size_t>(a)] > 1 && 0.0 > best && !free_ids.empty()) {
      best = 0.0;
      best_comm = free_ids.back();
    }

    if (best_comm != a && best - stay > tol) {
      comm[v] = best_comm;
      comm_strength[static_cast<std::size_t>(best_comm)] += g.strength[v];
      comm_size[static_cast<std::size_t>(a)] -= 1;
      comm_size[static_cast<std::size_t>(best_comm)] += 1;
      if (!free_ids.empty() && best_comm == free_ids.back()) free_ids.pop_back();
      if (comm_size[static_cast<std::size_t>(a)] == 0) free_ids.push_back(a);
      any_moved = true;
      for (const auto& [u, w] : g.adj[v]) {
        (void)w;
        if (comm[u] != best_comm && !queued[static_cast<std::size_t>(u)]) {
          queued[static_cast<std::size_t>(u)] = true;
          queue.push_back(u);
        }
      }
    } else {
      comm_strength[static_cast<std::size_t>(a)] += g.strength[v];
    }

    for (int c : touched) k_to[static_cast<std::size_t>(c)] = 0.0;
  }
  return any_moved;
}

// Refinement: inside each community, regrow sub-communities from singletons.
// A singleton joins a well-connected sub-community picked uniformly at random
// among the positive-gain candidates.
std::vector<int> refine_partition(const WorkGraph& g, const std::vector<int>& comm,
                                  int num_comms, double gamma, double tol, Rng& rng) {
  const int n = g.n;
  std::vector<int> sub(static_cast<std::size_t>(n));
  std::iota(sub.begin(), sub.end(), 0);

  std::vector<std::vector<int>> members(static_cast<std::size_t>(num_comms));
  for (int v = 0; v < n; ++v) members[static_cast<std::size_t>(comm[v])].push_back(v);

  const double inv_m = 1.0 / g.m;
  const double inv_2m = 1.0 / (2.0 * g.m);
  const double inv_2m2 = 1.0 / (2.0 * g.m * g.m);

  std::vector<double> sub_strength(static_cast<std::size_t>(n), 0.0);
  std::vector<double> sub_boundary(static_cast<std::size_t>(n), 0.0);
  std::vector<int> sub_size(static_cast<std::size_t>(n), 1);
  std::vector<double> conn(static_cast<std::size_t>(n), 0.0);
  std::vector<double> k_to(static_cast<std::size_t>(n), 0.0);
  std::vector<int> touched;
  std::vector<int> candidates;

  for (auto& group : members) {
    if (group.size() <= 1) continue;
    double group_strength = 0.0;
    for (int v : group) {
      conn[static_cast<std::size_t>(v)] = 0.0;
      for (const auto& [u, w] : g.adj[v]) {
        if (comm[u] == comm[v]) conn[static_cast<std::size_t>(v)] += w;
      }
      sub_strength[static_cast<std::size_t>(v)] = g.strength[v];
      sub_boundary[static_cast<std::size_t>(v)] = conn[static_cast<std::size_t>(v)];
      sub_size[static_cast<std::size_t>(v)] = 1;
      group_strength += g.strength[v];
    }

    std::vector<int> order = group;
    rng.shuffle(order);
    for (int v : order) {
      if (sub_size[static_cast<std::size_t>(sub[v])] != 1) continue;
      const double s_v = g.strength[v];
      if (conn[static_cast<std::size_t>(v)] <
          gamma * s_v * (group_strength - s_v) * inv_2m) {
        continue; // v itself is not well-connected within its community
      }

      touched.clear();
      for (const auto& [u, w] : g.adj[v]) {
        if (comm[u] != comm[v]) continue;
        const int c = sub[u];
        if (k_to[static_cast<std::size_t>(c)] == 0.0) touched.push_back(c);
        k_to[static_cast<std::size_t>(c)] += w;
      }

      candidates.clear();
      for (int c : touched) {
        if (c == sub[v]) continue;
        const double k_c = sub_strength[static_cast<std::size_t>(c)];
        if (sub_boundary[static_cast<std::size_t>(c)] <
            gamma * k_c * (group_strength - k_c) * inv_2m) {
          continue; // candidate sub-community is not well-connected
        }
        const double gain =
            k_to[static_cast<std::size_t>(c)] * inv_m - gamma * s_v * k_c * inv_2m2;
        if (gain > tol) candidates.push_back(c);
      }

      if (!candidates.empty()) {
        const int target =
            candidates[rng.below(static_cast<std::uint32_t>(candidates.size()))];
        const int old = sub[v];
        sub_size[static_cast<std::size_t>(old)] = 0;
        sub_strength[static_cast<std::size_t>(old)] = 0.0;
        sub_boundary[static_cast<std::size_t>(old)] = 0.0;
        sub[v] = target;
        sub_size[static_cast<std::size_t>(target)] += 1;
        sub_strength[static_cast<std::size_t>(target)] += s_v;
        sub_boundary[static_cast<std::size_t>(target)] +=
            conn[static_cast<std::size_t>(v)] -
            2.0 * k_to[static_cast<std::size_t>(target)];
      }

      for (int c : touched) k_to[static_cast<std::size_t>(c)] = 0.0;
    }
  }
  return sub;
}

WorkGraph aggregate(const WorkGraph& g, const std::vector<int>& refined, int n_new) {
  WorkGraph h;
  h.n = n_new;
  h.adj.resize(static_cast<std::size_t>(n_new));
  h.self_weight.assign(static_cast<std::size_t>(n_new), 0.0);
  h.strength.assign(static_cast<std::size_t>(n_new), 0.0);
  h.m = g.m;

  std::vector<std::vector<int>> members(static_cast<std::size_t>(n_new));
  for (int v = 0; v < g.n; ++v) members[static_cast<std::size_t>(refined[v])].push_back(v);

  std::vector<double> acc(static_cast<std::size_t>(n_new), 0.0);
  std::vector<int> touched;
  for (int c = 0; c < n_new; ++c) {
    double intra = 0.0;
    touched.clear();
    for (int v : members[static_cast<std::size_t>(c)]) {
      h.self_weight[static_cast<std::size_t>(c)] += g.self_weight[static_cast<std::size_t>(v)];
      for (const auto& [u, w] : g.adj[static_cast<std::size_t>(v)]) {
        const int d = refined[static_cast<std::size_t>(u)];
        if (d == c) {
          intra += w;
        } else {
          if (acc[static_cast<std::size_t>(d)] == 0.0) touched.push_back(d);
          acc[static_cast<std::size_t>(d)] += w;
        }
      }
    }
    h.self_weight[static_cast<std::size_t>(c)] += intra / 2.0; // each intra edge seen twice
    for (int d : touched) {
      h.adj[static_cast<std::size_t>(c)].emplace_back(d, acc[static_cast<std::size_t>(d)]);
      acc[static_cast<std::size_t>(d)] = 0.0;
    }
  }
  for (int c = 0; c < n_new; ++c) {
    double s = 2.0 * h.self_weight[static_cast<std::size_t>(c)];
    for (const auto& [d, w] : h.adj[static_cast<std::size_t>(c)]) {
      (void)d;
      s += w;
    }
    h.strength[static_cast<std::size_t>(c)] = s;
  }
  return h;
}

// Splits communities whose induced subgraph is disconnected. Cutting along
// component boundaries removes no intra-community edges and never lowers the
// degree penalty, so modularity cannot decrease.
void split_disconnected(const KinGraph& graph, std::vector<int>& assignment) {
  const std::size_t n = graph.nodes.size();
  auto adjacency = graph.adjacency();
  std::vector<int> result(n, -1);
  int next = 0;
  std::vector<std::uint32_t> stack;
  for (std::uint32_t v = 0; v < n; ++v) {
    if (result[v] >= 0) continue;
    const int label = next++;
    stack.assign(1, v);
    result[v] = label;
    while (!stack.empty()) {
      const std::uint32_t x = stack.back();
      stack.pop_back();
      for (const auto& [u, w] : adjacency[x]) {
        (void)w;
        if (result[u] < 0 && assignment[u] == assignment[x]) {
          result[u] = label;
          stack.push_back(u);
        }
      }
    }
  }
  assignment = std::move(result);
}

} // namespace

Partition leiden(const KinGraph& graph, const LeidenOptions& options) {
  if (graph.nodes.empty()) {
    throw std::invalid_argument("leiden: graph has no nodes");
  }
  const std::size_t n = graph.nodes.size();
  Rng rng(options.seed);

  const WorkGraph base = make_work_graph(graph, options.weighted);

  std::vector<int> assignment(n); // current partition over original nodes
  std::iota(assignment.begin(), assignment.end(), 0);

  if (base.m > 0.0) {
    // Full three-phase passes from the current partition, repeated until the
    // modularity gain drops under the tolerance. At the fixed point the
    // level-0 local move finds no improving single-node relocation.
    auto flat_modularity = [&](const std::vector<int>& labels) {
      Partition p;
      p.assignment = labels;
      p.num_communities =
          *std::max_element(labels.begin(), labels.end()) + 1;
      return modularity(graph, p, options.gamma, options.weighted);
    };
    double current = flat_modularity(assignment);

    for (int pass = 0; pass < options.max_levels; ++pass) {
      WorkGraph g = base;
      std::vector<int> flat(n); // original node -> aggregate node
      std::iota(flat.begin(), flat.end(), 0);
      std::vector<int> comm = assignment;
      densify(comm);

      for (int level = 0; level < options.max_levels; ++level) {
        while (move_nodes_fast(g, comm, options.gamma, options.tolerance, rng)) {
        }
        const int num_comms = densify(comm);
        if (num_comms == g.n) break; // every community is a single aggregate node

        std::vector<int> refined = refine_partition(g, comm, num_comms, options.gamma,
                                                    options.tolerance, rng);
        const int n_new = densify(refined);
        if (n_new == g.n) break; // nothing to aggregate

        // carry the maintained partition onto the aggregate graph
        std::vector<int> comm_new(static_cast<std::size_t>(n_new), -1);
        for (int v = 0; v < g.n; ++v) {
          comm_new[static_cast<std::size_t>(refined[static_cast<std::size_t>(v)])] =
              comm[static_cast<std::size_t>(v)];
        }
        g = aggregate(g, refined, n_new);
        for (auto& f : flat) f = refined[static_cast<std::size_t>(f)];
        comm = std::move(comm_new);
        densify(comm);
      }

      std::vector<int> next(n);
      for (std::size_t v = 0; v < n; ++v) {
        next[v] = comm[static_cast<std::size_t>(flat[v])];
      }
      const double improved = flat_modularity(next);
      if (improved - current <= options.tolerance) break;
      assignment = std::move(next);
      current = improved;
    }
  }

  split_disconnected(graph, assignment);

  // stable reporting order: by descending community node weight, then by the
  // smallest member index
  int k = densify(assignment);
  std::vector<double> community_weight(static_cast<std::size_t>(k), 0.0);
  std::vector<std::uint32_t> first_member(static_cast<std::size_t>(k), 0);
  std::vector<bool> seen(static_cast<std::size_t>(k), false);
  for (std::uint32_t v = 0; v < n; ++v) {
    const auto c = static_cast<std::size_t>(assignment[v]);
    community_weight[c] += graph.nodes[v].weight;
    if (!seen[c]) {
      seen[c] = true;
      first_member[c] = v;
    }
  }
  std::vector<int> ids(static_cast<std::size_t>(k));
  std::iota(ids.begin(), ids.end(), 0);
  std::sort(ids.begin(), ids.end(), [&](int a, int b) {
    const auto ca = static_cast<std::size_t>(a);
    const auto cb = static_cast<std::size_t>(b);
    if (community_weight[ca] != community_weight[cb]) {
      return community_weight[ca] > community_weight[cb];
    }
    return first_member[ca] < first_member[cb];
  });
  std::vector<int> rank(static_cast<std::size_t>(k));
  for (int i = 0; i < k; ++i) rank[static_cast<std::size_t>(ids[i])] = i;
  for (auto& a : assignment) a = rank[static_cast<std::size_t>(a)];

  Partition partition;
  partition.assignment = std::move(assignment);
  partition.num_communities = k;
  partition.modularity = modularity(graph, partition, options.gamma, options.weighted);
  return partition;
}

} // namespace kinnet
