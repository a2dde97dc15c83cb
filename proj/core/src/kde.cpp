#include "ocdens/kde.hpp"

#include "ocdens/error.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace ocdens {

KdeEstimate kde_gaussian(const RawSamples& samples, double bandwidth, std::span<const double> grid)
{
  if (samples.empty())
    throw InputError("no samples");
  if (!(bandwidth > 0.0) || !std::isfinite(bandwidth))
    throw InputError("bandwidth must be positive");
  if (grid.empty())
    throw InputError("empty evaluation grid");

  const double norm = 1.0 / (static_cast<double>(samples.size()) * bandwidth *
                             std::sqrt(2.0 * std::numbers::pi));
  KdeEstimate est;
  est.bandwidth = bandwidth;
  est.grid.assign(grid.begin(), grid.end());
  est.f.resize(grid.size());
  for (std::size_t j = 0; j < grid.size(); ++j) {
    double sum = 0.0;
    for (double x : samples.values) {
      const double z = (grid[j] - x) / bandwidth;
      sum += std::exp(-0.5 * z * z);
    }
    est.f[j] = norm * sum;
  }
  return est;
}

double normal_reference_bandwidth(std::span<const double> values)
{
  const std::size_t n = values.size();
  if (n < 2)
    throw InputError("normal reference bandwidth needs at least two samples");
  double mean = 0.0;
  for (double v : values)
    mean += v;
  mean /= static_cast<double>(n);
  double ss = 0.0;
  for (double v : values)
    ss += (v - mean) * (v - mean);
  const double sd = std::sqrt(ss / static_cast<double>(n - 1));
  return 1.06 * sd * std::pow(static_cast<double>(n), -0.2);
}

Histogram histogram(const RawSamples& samples, std::size_t nbins)
{
  if (nbins == 0)
    throw InputError("number of bins must be positive");
  if (samples.empty())
    throw InputError("no samples");
  const auto [lo_it, hi_it] = std::minmax_element(samples.values.begin(), samples.values.end());
  const double lo = *lo_it;
  const double hi = *hi_it;
  if (!(hi > lo))
    throw InputError("degenerate sample range: all values are identical");

  Histogram hist;
  hist.bin_edges = linspace(lo, hi, nbins + 1);
  hist.counts.assign(nbins, 0);
  const double width = (hi - lo) / static_cast<double>(nbins);
  for (double x : samples.values) {
    // the edge list is authoritative; the division only seeds the search
    auto b = static_cast<std::size_t>(std::clamp((x - lo) / width, 0.0, static_cast<double>(nbins - 1)));
    while (b > 0 && x < hist.bin_edges[b])
      --b;
    while (b + 1 < nbins && x >= hist.bin_edges[b + 1])
      ++b;
    ++hist.counts[b];
  }
  const double n = static_cast<double>(samples.size());
  hist.densities.resize(nbins);
  for (std::size_t b = 0; b < nbins; ++b)
    hist.densities[b] =
      static_cast<double>(hist.counts[b]) / (n * (hist.bin_edges[b + 1] - hist.bin_edges[b]));
  return hist;
}

std::size_t default_bin_count(std::size_t n)
{
  return std::max<std::size_t>(1, static_cast<std::size_t>(std::ceil(std::sqrt(static_cast<double>(n)))));
}

std::vector<double> linspace(double lo, double hi, std::size_t count)
{
  std::vector<double> out(count);
  if (count == 1) {
    out[0] = lo;
    return out;
  }
  const double step = (hi - lo) / static_cast<double>(count - 1);
  for (std::size_t i = 0; i < count; ++i)
    out[i] = lo + static_cast<double>(i) * step;
  if (count > 1)
    out.back() = hi;
  return out;
}

} // namespace ocdens
