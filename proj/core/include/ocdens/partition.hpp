#pragma once

#include "ocdens/samples.hpp"

#include <cstddef>
#include <vector>

namespace ocdens {

//! Grid on [0, 1] with a node on every sample location.
//!
//! Each stage [t_{i-1}, t_i] is stepped uniformly with the nominal step
//! from its left end; the last step of a stage is the remainder, so stage
//! ends coincide with samples bit-for-bit.
struct Partition
{
  std::vector<double> nodes;         // s_0 = 0 < ... < s_L = 1
  std::vector<double> steps;         // h_k = s_{k+1} - s_k, k < L
  std::vector<std::size_t> data_indices;  // node index of each sample, ascending
  std::vector<int> data_weight;      // multiplicity of each sample
  std::vector<int> node_weight;      // multiplicity per node, 0 off the data
  double nominal_h = 0.0;

  std::size_t L() const noexcept { return nodes.size() - 1; }
  bool is_data(std::size_t k) const noexcept { return node_weight[k] != 0; }
};

//! Remainder steps shorter than this are merged into the sample node.
inline constexpr double kMergeThreshold = 1e-12;

Partition build_partition(const SampleSet& samples, double nominal_h);

} // namespace ocdens
