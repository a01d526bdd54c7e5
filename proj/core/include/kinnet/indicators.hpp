#pragma once

#include "kinnet/kin_graph.hpp"
#include "kinnet/partition.hpp"

#include <optional>
#include <string>
#include <vector>

namespace kinnet {

/// The four dynastic indicators for one (province, year), plus graph
/// diagnostics.
struct IndicatorRow {
  std::string province;
  int year = 0;
  double hhi = 0.0;
  std::optional<double> cgc; // undefined on graphs with zero total degree
  double ccd = 0.0;
  double acc = 0.0;
  int n_nodes = 0;
  int n_edges = 0;
  int n_communities = 0;
  int n_components = 0;
};

/// Political HHI: sum over communities of squared weighted seat share scaled
/// by 100, so a single community scores 10000. Throws on an empty graph.
double political_hhi(const KinGraph& graph, const Partition& partition);

/// Gini coefficient over weighted node degrees, ascending-sorted form
/// sum (2i - n - 1) x_i / (n sum x). Undefined (nullopt) when all degrees
/// are zero.
std::optional<double> centrality_gini(const KinGraph& graph);

int count_components(const KinGraph& graph);

/// 1 - components/nodes.
double connected_component_density(const KinGraph& graph);

/// Minimum vertex cut of a connected simple graph given as an adjacency
/// list: 0 for a single node, n-1 for complete graphs, otherwise the minimum
/// s-t vertex cut over non-adjacent pairs via unit-capacity max-flow on the
/// split graph. Throws if the input is disconnected.
int vertex_connectivity(const std::vector<std::vector<int>>& adj);

/// Sum over communities of vertex_connectivity(community)/|community|;
/// singletons contribute 0. Connectivity is computed on the unweighted
/// structure. With normalized = true the sum is divided by the number of
/// communities.
double average_community_connectivity(const KinGraph& graph,
                                      const Partition& partition,
                                      bool normalized = false);

/// Indicator row for one (province, year) group; records must carry
/// community ids.
IndicatorRow compute_indicator_row(const Dataset& records,
                                   const std::vector<std::size_t>& indices,
                                   const std::string& province, int year,
                                   bool acc_normalized = false);

/// One row per (province, year) present in the data, ordered ascending.
/// Records must carry community ids.
std::vector<IndicatorRow> compute_all(const Dataset& records,
                                      bool acc_normalized = false);

} // namespace kinnet
