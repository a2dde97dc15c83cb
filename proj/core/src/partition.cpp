#include "ocdens/partition.hpp"

#include "ocdens/error.hpp"

#include <cmath>

namespace ocdens {

Partition build_partition(const SampleSet& samples, double nominal_h)
{
  if (!(nominal_h > 0.0) || !std::isfinite(nominal_h))
    throw InputError("nominal step size must be positive");

  const auto& pts = samples.points();
  Partition grid;
  grid.nominal_h = nominal_h;
  grid.nodes.reserve(static_cast<std::size_t>(1.0 / nominal_h) + pts.size() + 2);
  grid.nodes.push_back(0.0);

  auto add_stage = [&](double left, double right) {
    // nodes are left + j*h rather than a running sum, so no drift accumulates
    for (std::size_t j = 1;; ++j) {
      const double s = left + static_cast<double>(j) * nominal_h;
      if (!(s < right - kMergeThreshold))
        break;
      grid.nodes.push_back(s);
    }
    grid.nodes.push_back(right);
  };

  double left = 0.0;
  for (double t : pts) {
    add_stage(left, t);
    grid.data_indices.push_back(grid.nodes.size() - 1);
    left = t;
  }
  add_stage(left, 1.0);

  grid.data_weight = samples.multiplicity();
  grid.node_weight.assign(grid.nodes.size(), 0);
  for (std::size_t j = 0; j < grid.data_indices.size(); ++j)
    grid.node_weight[grid.data_indices[j]] = grid.data_weight[j];

  grid.steps.resize(grid.nodes.size() - 1);
  for (std::size_t k = 0; k + 1 < grid.nodes.size(); ++k)
    grid.steps[k] = grid.nodes[k + 1] - grid.nodes[k];
  return grid;
}

} // namespace ocdens
