#pragma once

#include "kinnet/records.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace kinnet {

/// Name-based consanguinity classes, strongest first. A pair satisfying
/// several classes takes the single highest one.
enum class MatchKind : std::uint8_t {
  BothSame,   // same last name and same middle name, scalar 1.00
  LastOnly,   // same last name, scalar 0.75
  CrossMatch, // one's last name equals the other's middle name, scalar 0.50
  MiddleOnly, // same middle name, scalar 0.25
};

std::string_view match_kind_token(MatchKind kind);
std::optional<MatchKind> parse_match_kind(std::string_view token);
double match_scalar(MatchKind kind);

/// Node weight for a position: Governor/HouseRep/Mayor 5, the vice posts 3,
/// Councilor/BoardMember 2.
int position_weight(Position p);

/// Classifies the kinship signal between two records of the same
/// (province, year). Absent middle names never match anything.
std::optional<MatchKind> classify_match(const ElectionRecord& a,
                                        const ElectionRecord& b);

/// Weighted undirected kinship graph for one (province, year). Simple graph:
/// no self-loops, at most one edge per node pair.
struct KinGraph {
  struct Node {
    std::size_t record_index = 0; // into the dataset the graph was built from
    double weight = 0.0;
  };
  struct Edge {
    std::uint32_t u = 0;
    std::uint32_t v = 0;
    double weight = 0.0;
    MatchKind kind = MatchKind::LastOnly;
  };

  std::string province;
  int year = 0;
  std::vector<Node> nodes;
  std::vector<Edge> edges;

  std::size_t size() const { return nodes.size(); }
  double total_edge_weight() const;
  double total_node_weight() const;
  /// Sum of incident edge weights per node; isolated nodes get 0.
  std::vector<double> weighted_degrees() const;
  std::vector<std::vector<std::pair<std::uint32_t, double>>> adjacency() const;
};

/// Builds the graph over `indices` into `records`. Node order is a stable
/// sort on (last, first, middle, position), so identical input multisets give
/// identical graphs. Edge weight = w(u) * w(v) * scalar(kind).
KinGraph build_graph(const Dataset& records,
                     const std::vector<std::size_t>& indices,
                     const std::string& province, int year);

} // namespace kinnet
