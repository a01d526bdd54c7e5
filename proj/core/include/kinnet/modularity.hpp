#pragma once

#include "kinnet/kin_graph.hpp"
#include "kinnet/partition.hpp"

namespace kinnet {

/// Modularity H = (1/2m) * sum_c (e_c - gamma * K_c^2 / 2m) with m the total
/// edge weight, e_c twice the intra-community edge weight and K_c the sum of
/// weighted degrees in c, so a single all-containing community scores
/// 1 - gamma. A graph with zero total edge weight scores 0 by definition.
/// With weighted = false every edge counts 1.
double modularity(const KinGraph& graph, const Partition& partition,
                  double gamma, bool weighted = true);

} // namespace kinnet
