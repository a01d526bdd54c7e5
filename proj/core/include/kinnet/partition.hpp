#pragma once

#include <cstdint>
#include <vector>

namespace kinnet {

/// Node-to-community assignment for one graph. Community ids are dense,
/// 0..num_communities-1, each non-empty; `modularity` carries the value of
/// the objective the partition was scored with.
struct Partition {
  std::vector<int> assignment;
  int num_communities = 0;
  double modularity = 0.0;

  std::vector<std::vector<std::uint32_t>> members() const {
    std::vector<std::vector<std::uint32_t>> out(
        static_cast<std::size_t>(num_communities));
    for (std::uint32_t v = 0; v < assignment.size(); ++v) {
      out[static_cast<std::size_t>(assignment[v])].push_back(v);
    }
    return out;
  }
};

} // namespace kinnet
