#include "kinnet/kin_graph.hpp"

#include <algorithm>
#include <tuple>

namespace kinnet {

std::string_view match_kind_token(MatchKind kind) {
  switch (kind) {
  case MatchKind::BothSame: return "BOTH_SAME";
  case MatchKind::LastOnly: return "LAST_ONLY";
  case MatchKind::CrossMatch: return "CROSS_MATCH";
  case MatchKind::MiddleOnly: return "MIDDLE_ONLY";
  }
  return "?";
}

std::optional<MatchKind> parse_match_kind(std::string_view token) {
  if (token == "BOTH_SAME") return MatchKind::BothSame;
  if (token == "LAST_ONLY") return MatchKind::LastOnly;
  if (token == "CROSS_MATCH") return MatchKind::CrossMatch;
  if (token == "MIDDLE_ONLY") return MatchKind::MiddleOnly;
  return std::nullopt;
}

double match_scalar(MatchKind kind) {
  switch (kind) {
  case MatchKind::BothSame: return 1.00;
  case MatchKind::LastOnly: return 0.75;
  case MatchKind::CrossMatch: return 0.50;
  case MatchKind::MiddleOnly: return 0.25;
  }
  return 0.0;
}

int position_weight(Position p) {
  switch (p) {
  case Position::Governor:
  case Position::HouseRep:
  case Position::Mayor:
    return 5;
  case Position::ViceGovernor:
  case Position::ViceMayor:
    return 3;
  case Position::BoardMember:
  case Position::Councilor:
    return 2;
  }
  return 0;
}

std::optional<MatchKind> classify_match(const ElectionRecord& a,
                                        const ElectionRecord& b) {
  const bool last_eq = !a.last_name.empty() && a.last_name == b.last_name;
  const bool middle_eq =
      a.middle_name && b.middle_name && *a.middle_name == *b.middle_name;
  const bool cross =
      (b.middle_name && !a.last_name.empty() && a.last_name == *b.middle_name) ||
      (a.middle_name && !b.last_name.empty() && *a.middle_name == b.last_name);

  if (last_eq && middle_eq) return MatchKind::BothSame;
  if (last_eq) return MatchKind::LastOnly;
  if (cross) return MatchKind::CrossMatch;
  if (middle_eq) return MatchKind::MiddleOnly;
  return std::nullopt;
}

double KinGraph::total_edge_weight() const {
  double total = 0.0;
  for (const auto& e : edges) total += e.weight;
  return total;
}

double KinGraph::total_node_weight() const {
  double total = 0.0;
  for (const auto& n : nodes) total += n.weight;
  return total;
}

std::vector<double> KinGraph::weighted_degrees() const {
  std::vector<double> degrees(nodes.size(), 0.0);
  for (const auto& e : edges) {
    degrees[e.u] += e.weight;
    degrees[e.v] += e.weight;
  }
  return degrees;
}

std::vector<std::vector<std::pair<std::uint32_t, double>>> KinGraph::adjacency() const {
  std::vector<std::vector<std::pair<std::uint32_t, double>>> adj(nodes.size());
  for (const auto& e : edges) {
    adj[e.u].emplace_back(e.v, e.weight);
    adj[e.v].emplace_back(e.u, e.weight);
  }
  return adj;
}

KinGraph build_graph(const Dataset& records,
                     const std::vector<std::size_t>& indices,
                     const std::string& province, int year) {
  KinGraph graph;
  graph.province = province;
  graph.year = year;

  static const std::string kEmpty;
  std::vector<std::size_t> order = indices;
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    const auto& ra = records[a];
    const auto& rb = records[b];
    const std::string& ma = ra.middle_name ? *ra.middle_name : kEmpty;
    const std::string& mb = rb.middle_name ? *rb.middle_name : kEmpty;
    return std::tie(ra.last_name, ra.first_name, ma, ra.position) <
           std::tie(rb.last_name, rb.first_name, mb, rb.position);
  });

  graph.nodes.reserve(order.size());
  for (std::size_t idx : order) {
    graph.nodes.push_back(
        {idx, static_cast<double>(position_weight(records[idx].position))});
  }

  const std::uint32_t n = static_cast<std::uint32_t>(graph.nodes.size());
  for (std::uint32_t i = 0; i < n; ++i) {
    const auto& a = records[graph.nodes[i].record_index];
    for (std::uint32_t j = i + 1; j < n; ++j) {
      const auto& b = records[graph.nodes[j].record_index];
      auto kind = classify_match(a, b);
      if (!kind) continue;
      graph.edges.push_back(
          {i, j, graph.nodes[i].weight * graph.nodes[j].weight * match_scalar(*kind),
           *kind});
    }
  }
  return graph;
}

} // namespace kinnet
