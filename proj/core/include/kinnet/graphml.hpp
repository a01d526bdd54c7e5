#pragma once

#include "kinnet/kin_graph.hpp"
#include "kinnet/partition.hpp"

#include <string>
#include <vector>

namespace kinnet {

/// Serializes one kinship graph as GraphML. Node attributes: label, position,
/// weight, community_id (default -1 when unassigned). Edge attributes:
/// weight, match_kind. `meta` is embedded as an XML comment.
std::string to_graphml(const KinGraph& graph, const Dataset& records,
                       const Partition* partition, const std::string& meta);

/// Graph reconstructed from a GraphML document. Kept separate from KinGraph
/// because labels replace record indices on the way back in.
struct GraphmlGraph {
  struct Node {
    std::string id;
    std::string label;
    std::string position;
    double weight = 0.0;
    long community_id = -1;
  };
  struct Edge {
    std::string source;
    std::string target;
    double weight = 0.0;
    std::string match_kind;
  };
  std::string graph_id;
  std::vector<Node> nodes;
  std::vector<Edge> edges;
};

/// Strict parser for the GraphML subset this tool emits: validates the
/// graphml/key/graph/node/edge structure, key declarations and references.
/// Throws std::runtime_error with a description on any violation.
GraphmlGraph parse_graphml(const std::string& xml);

} // namespace kinnet
