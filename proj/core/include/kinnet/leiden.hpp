#pragma once

#include "kinnet/kin_graph.hpp"
#include "kinnet/partition.hpp"

#include <cstdint>

namespace kinnet {

struct LeidenOptions {
  double gamma = 1.0;
  std::uint64_t seed = 42;
  bool weighted = true;     // optimize over edge weights; false treats all as 1
  double tolerance = 1e-10; // minimum accepted modularity gain
  int max_levels = 64;
};

/// Three-phase Leiden community detection: queue-driven local moving, a
/// refinement pass that regrows communities from singletons, and aggregation
/// onto the refined partition, repeated until nothing improves. Deterministic
/// for a fixed seed. Every returned community induces a connected subgraph;
/// isolated nodes end up as singletons. Community ids are renumbered by
/// descending total node weight.
Partition leiden(const KinGraph& graph, const LeidenOptions& options = {});

} // namespace kinnet
