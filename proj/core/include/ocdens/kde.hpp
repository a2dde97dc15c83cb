#pragma once

#include "ocdens/samples.hpp"

#include <cstddef>
#include <span>
#include <vector>

namespace ocdens {

struct KdeEstimate
{
  std::vector<double> grid;
  std::vector<double> f;
  double bandwidth = 0.0;
};

//! Equal-width histogram normalized to unit area.
struct Histogram
{
  std::vector<double> bin_edges;   // nbins + 1 increasing edges
  std::vector<double> densities;   // count / (n * width)
  std::vector<std::size_t> counts;

  std::size_t bins() const noexcept { return counts.size(); }
};

//! f(t) = 1/(n bw) sum_i phi((t - t_i) / bw) with the standard normal phi,
//! summed exactly (no binning).
KdeEstimate kde_gaussian(const RawSamples& samples, double bandwidth, std::span<const double> grid);

//! 1.06 * sd * n^(-1/5); sd is the sample standard deviation.
double normal_reference_bandwidth(std::span<const double> values);

//! Bins span [min, max]; every bin is half-open except the last, which is
//! closed on the right.
Histogram histogram(const RawSamples& samples, std::size_t nbins);

//! ceil(sqrt(n)), at least 1.
std::size_t default_bin_count(std::size_t n);

//! `count` evenly spaced points on [lo, hi].
std::vector<double> linspace(double lo, double hi, std::size_t count);

} // namespace ocdens
