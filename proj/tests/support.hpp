#pragma once

#include "ocdens/samples.hpp"

#include <cmath>
#include <cstddef>
#include <string>
#include <vector>

namespace ocdens::testing {

inline std::string data_path(const std::string& name)
{
  return std::string(OCDENS_DATA_DIR) + "/" + name;
}

inline SampleSet unit_samples(std::vector<double> values)
{
  return from_unit_interval(RawSamples{std::move(values), {}});
}

//! Strict interior local maxima; a plateau counts once if it rises on the
//! left and falls on the right.
template <typename T>
std::size_t count_local_maxima(const std::vector<T>& y)
{
  std::size_t count = 0;
  std::size_t k = 1;
  while (k + 1 < y.size()) {
    if (y[k] > y[k - 1]) {
      std::size_t j = k;
      while (j + 1 < y.size() && y[j + 1] == y[k])
        ++j;
      if (j + 1 < y.size() && y[j + 1] < y[k])
        ++count;
      k = j + 1;
    } else {
      ++k;
    }
  }
  return count;
}

inline double normal_cdf(double z)
{
  return 0.5 * std::erfc(-z / std::sqrt(2.0));
}

} // namespace ocdens::testing
