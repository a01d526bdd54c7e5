#include "kinnet/modularity.hpp"

#include <stdexcept>
#include <vector>

namespace kinnet {

double modularity(const KinGraph& graph, const Partition& partition,
                  double gamma, bool weighted) {
  if (partition.assignment.size() != graph.nodes.size()) {
    throw std::invalid_argument("modularity: partition does not cover the graph");
  }
  const std::size_t k = static_cast<std::size_t>(partition.num_communities);
  std::vector<double> intra(k, 0.0);   // sum of intra-community edge weights
  std::vector<double> degree_sum(k, 0.0);

  double m = 0.0;
  for (const auto& e : graph.edges) {
    const double w = weighted ? e.weight : 1.0;
    m += w;
    const int cu = partition.assignment[e.u];
    const int cv = partition.assignment[e.v];
    degree_sum[static_cast<std::size_t>(cu)] += w;
    degree_sum[static_cast<std::size_t>(cv)] += w;
    if (cu == cv) intra[static_cast<std::size_t>(cu)] += w;
  }
  if (m <= 0.0) return 0.0;

  double h = 0.0;
  for (std::size_t c = 0; c < k; ++c) {
    const double e_c = 2.0 * intra[c];
    h += e_c - gamma * degree_sum[c] * degree_sum[c] / (2.0 * m);
  }
  return h / (2.0 * m);
}

} // namespace kinnet
