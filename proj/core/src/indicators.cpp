#include "kinnet/indicators.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <queue>
#include <stdexcept>

namespace kinnet {

double political_hhi(const KinGraph& graph, const Partition& partition) {
  if (graph.nodes.empty()) {
    throw std::invalid_argument("political_hhi: empty graph");
  }
  if (partition.assignment.size() != graph.nodes.size()) {
    throw std::invalid_argument("political_hhi: partition does not cover the graph");
  }
  std::vector<double> community_weight(
      static_cast<std::size_t>(partition.num_communities), 0.0);
  double total = 0.0;
  for (std::size_t v = 0; v < graph.nodes.size(); ++v) {
    community_weight[static_cast<std::size_t>(partition.assignment[v])] +=
        graph.nodes[v].weight;
    total += graph.nodes[v].weight;
  }
  double hhi = 0.0;
  for (double w : community_weight) {
    const double share = w / total * 100.0;
    hhi += share * share;
  }
  return hhi;
}

std::optional<double> centrality_gini(const KinGraph& graph) {
  if (graph.nodes.empty()) {
    throw std::invalid_argument("centrality_gini: empty graph");
  }
  std::vector<double> degrees = graph.weighted_degrees();
  std::sort(degrees.begin(), degrees.end());
  const double total = std::accumulate(degrees.begin(), degrees.end(), 0.0);
  if (total <= 0.0) return std::nullopt;
  const double n = static_cast<double>(degrees.size());
  double numerator = 0.0;
  for (std::size_t i = 0; i < degrees.size(); ++i) {
    numerator += (2.0 * (static_cast<double>(i) + 1.0) - n - 1.0) * degrees[i];
  }
  return numerator / (n * total);
}

namespace {

// Union-find over graph nodes.
struct DisjointSets {
  explicit DisjointSets(std::size_t n) : parent(n) {
    std::iota(parent.begin(), parent.end(), 0);
  }
  std::size_t find(std::size_t x) {
    while (parent[x] != x) {
      parent[x] = parent[parent[x]];
      x = parent[x];
    }
    return x;
  }
  bool unite(std::size_t a, std::size_t b) {
    a = find(a);
    b = find(b);
    if (a == b) return false;
    parent[a] = b;
    return true;
  }
  std::vector<std::size_t> parent;
};

} // namespace

int count_components(const KinGraph& graph) {
  DisjointSets sets(graph.nodes.size());
  int components = static_cast<int>(graph.nodes.size());
  for (const auto& e : graph.edges) {
    if (sets.unite(e.u, e.v)) --components;
  }
  return components;
}

double connected_component_density(const KinGraph& graph) {
  if (graph.nodes.empty()) {
    throw std::invalid_argument("connected_component_density: empty graph");
  }
  return 1.0 - static_cast<double>(count_components(graph)) /
                   static_cast<double>(graph.nodes.size());
}

namespace {

// Dinic max-flow on the vertex-split digraph; capacities are small integers.
class MaxFlow {
public:
  explicit MaxFlow(int n) : head_(static_cast<std::size_t>(n), -1) {}

  void add_edge(int from, int to, int capacity) {
    edges_.push_back({to, head_[static_cast<std::size_t>(from)], capacity});
    head_[static_cast<std::size_t>(from)] = static_cast<int>(edges_.size()) - 1;
    edges_.push_back({from, head_[static_cast<std::size_t>(to)], 0});
    head_[static_cast<std::size_t>(to)] = static_cast<int>(edges_.size()) - 1;
  }

  int run(int source, int sink, int cap_limit) {
    int flow = 0;
    while (flow < cap_limit && bfs(source, sink)) {
      iter_ = head_;
      while (flow < cap_limit) {
        const int pushed = dfs(source, sink, cap_limit - flow);
        if (pushed == 0) break;
        flow += pushed;
      }
    }
    return flow;
  }

private:
  struct Edge {
    int to;
    int next;
    int capacity;
  };

  bool bfs(int source, int sink) {
    level_.assign(head_.size(), -1);
    std::queue<int> queue;
    level_[static_cast<std::size_t>(source)] = 0;
    queue.push(source);
    while (!queue.empty()) {
      const int v = queue.front();
      queue.pop();
      for (int e = head_[static_cast<std::size_t>(v)]; e >= 0; e = edges_[static_cast<std::size_t>(e)].next) {
        const auto& edge = edges_[static_cast<std::size_t>(e)];
        if (edge.capacity > 0 && level_[static_cast<std::size_t>(edge.to)] < 0) {
          level_[static_cast<std::size_t>(edge.to)] = level_[static_cast<std::size_t>(v)] + 1;
          queue.push(edge.to);
        }
      }
    }
    return level_[static_cast<std::size_t>(sink)] >= 0;
  }

  int dfs(int v, int sink, int limit) {
    if (v == sink) return limit;
    for (int& e = iter_[static_cast<std::size_t>(v)]; e >= 0; e = edges_[static_cast<std::size_t>(e)].next) {
      auto& edge = edges_[static_cast<std::size_t>(e)];
      if (edge.capacity <= 0 ||
          level_[static_cast<std::size_t>(edge.to)] != level_[static_cast<std::size_t>(v)] + 1) {
        continue;
      }
      const int pushed = dfs(edge.to, sink, std::min(limit, edge.capacity));
      if (pushed > 0) {
        edge.capacity -= pushed;
        edges_[static_cast<std::size_t>(e ^ 1)].capacity += pushed;
        return pushed;
      }
    }
    return 0;
  }

  std::vector<int> head_;
  std::vector<int> iter_;
  std::vector<int> level_;
  std::vector<Edge> edges_;
};

// Minimum s-t vertex cut for non-adjacent s, t: split every vertex v into
// v_in -> v_out with capacity 1 (s and t unconstrained), route edges through
// the splits, then max-flow.
int min_vertex_cut(const std::vector<std::vector<int>>& adj, int s, int t) {
  const int n = static_cast<int>(adj.size());
  const int big = n + 1;
  MaxFlow flow(2 * n);
  auto in = [](int v) { return 2 * v; };
  auto out = [](int v) { return 2 * v + 1; };
  for (int v = 0; v < n; ++v) {
    flow.add_edge(in(v), out(v), (v == s || v == t) ? big : 1);
  }
  for (int v = 0; v < n; ++v) {
    for (int u : adj[static_cast<std::size_t>(v)]) {
      flow.add_edge(out(v), in(u), big);
    }
  }
  return flow.run(out(s), in(t), big);
}

bool is_connected(const std::vector<std::vector<int>>& adj) {
  if (adj.empty()) return true;
  std::vector<bool> seen(adj.size(), false);
  std::vector<int> stack{0};
  seen[0] = true;
  std::size_t reached = 1;
  while (!stack.empty()) {
    const int v = stack.back();
    stack.pop_back();
    for (int u : adj[static_cast<std::size_t>(v)]) {
      if (!seen[static_cast<std::size_t>(u)]) {
        seen[static_cast<std::size_t>(u)] = true;
        ++reached;
        stack.push_back(u);
      }
    }
  }
  return reached == adj.size();
}

} // namespace

int vertex_connectivity(const std::vector<std::vector<int>>& adj) {
  const int n = static_cast<int>(adj.size());
  if (n == 0) throw std::invalid_argument("vertex_connectivity: empty graph");
  if (!is_connected(adj)) {
    throw std::invalid_argument("vertex_connectivity: input graph is disconnected");
  }
  if (n == 1) return 0;

  std::vector<std::vector<bool>> adjacent(
      static_cast<std::size_t>(n), std::vector<bool>(static_cast<std::size_t>(n), false));
  for (int v = 0; v < n; ++v) {
    for (int u : adj[static_cast<std::size_t>(v)]) {
      adjacent[static_cast<std::size_t>(v)][static_cast<std::size_t>(u)] = true;
    }
  }

  int best = n - 1; // complete-graph convention when no non-adjacent pair exists
  for (int s = 0; s < n; ++s) {
    for (int t = s + 1; t < n; ++t) {
      if (adjacent[static_cast<std::size_t>(s)][static_cast<std::size_t>(t)]) continue;
      best = std::min(best, min_vertex_cut(adj, s, t));
      if (best == 0) return 0; // cannot happen on connected input, but cheap
    }
  }
  return best;
}

double average_community_connectivity(const KinGraph& graph,
                                      const Partition& partition,
                                      bool normalized) {
  if (partition.assignment.size() != graph.nodes.size()) {
    throw std::invalid_argument(
        "average_community_connectivity: partition does not cover the graph");
  }
  const auto members = partition.members();
  double total = 0.0;
  std::vector<int> local(graph.nodes.size(), -1);
  for (const auto& community : members) {
    if (community.size() <= 1) continue; // singletons contribute 0
    for (std::size_t i = 0; i < community.size(); ++i) {
      local[community[i]] = static_cast<int>(i);
    }
    std::vector<std::vector<int>> adj(community.size());
    for (const auto& e : graph.edges) {
      const int lu = local[e.u];
      const int lv = local[e.v];
      if (lu >= 0 && lv >= 0) {
        adj[static_cast<std::size_t>(lu)].push_back(lv);
        adj[static_cast<std::size_t>(lv)].push_back(lu);
      }
    }
    total += static_cast<double>(vertex_connectivity(adj)) /
             static_cast<double>(community.size());
    for (std::uint32_t v : community) local[v] = -1;
  }
  if (normalized && partition.num_communities > 0) {
    return total / static_cast<double>(partition.num_communities);
  }
  return total;
}

IndicatorRow compute_indicator_row(const Dataset& records,
                                   const std::vector<std::size_t>& indices,
                                   const std::string& province, int year,
                                   bool acc_normalized) {
  const KinGraph graph = build_graph(records, indices, province, year);

  Partition partition;
  partition.assignment.resize(graph.nodes.size());
  std::map<int, int> dense;
  for (std::size_t v = 0; v < graph.nodes.size(); ++v) {
    const auto& rec = records[graph.nodes[v].record_index];
    if (!rec.community_id) {
      throw std::runtime_error("indicators: record without community id in " +
                               province + " " + std::to_string(year));
    }
    auto [it, inserted] = dense.emplace(*rec.community_id, static_cast<int>(dense.size()));
    (void)inserted;
    partition.assignment[v] = it->second;
  }
  partition.num_communities = static_cast<int>(dense.size());

  IndicatorRow row;
  row.province = province;
  row.year = year;
  row.hhi = political_hhi(graph, partition);
  row.cgc = centrality_gini(graph);
  row.ccd = connected_component_density(graph);
  row.acc = average_community_connectivity(graph, partition, acc_normalized);
  row.n_nodes = static_cast<int>(graph.nodes.size());
  row.n_edges = static_cast<int>(graph.edges.size());
  row.n_communities = partition.num_communities;
  row.n_components = count_components(graph);
  return row;
}

std::vector<IndicatorRow> compute_all(const Dataset& records, bool acc_normalized) {
  std::vector<IndicatorRow> rows;
  for (const auto& [key, indices] : group_by_province_year(records)) {
    rows.push_back(
        compute_indicator_row(records, indices, key.province, key.year, acc_normalized));
  }
  return rows;
}

} // namespace kinnet
