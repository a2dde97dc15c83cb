#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

namespace ocdens {

//! Sample values in their original units, in file order.
struct RawSamples
{
  std::vector<double> values;
  std::string label;

  std::size_t size() const noexcept { return values.size(); }
  bool empty() const noexcept { return values.empty(); }
};

//! Affine map between original units and the unit interval.
//!
//! `unit = unit_origin + (x - origin) * scale`. Anchoring at the sample
//! minimum keeps the image of the minimum exact.
struct UnitMap
{
  double origin = 0.0;
  double scale = 1.0;
  double unit_origin = 0.0;

  double to_unit(double x) const noexcept { return unit_origin + (x - origin) * scale; }
  double to_original(double u) const noexcept { return origin + (u - unit_origin) / scale; }

  static UnitMap identity() noexcept { return {}; }
};

//! Distinct, strictly increasing sample locations inside (0, 1).
//!
//! Repeated observations are collapsed onto one location whose
//! multiplicity is kept, so the total count `n()` still equals the number
//! of observations.
class SampleSet
{
public:
  SampleSet() = default;
  SampleSet(std::vector<double> points,
            std::vector<int> multiplicity,
            UnitMap map,
            std::size_t merged_duplicates,
            std::string label = {});

  const std::vector<double>& points() const noexcept { return points_; }
  const std::vector<int>& multiplicity() const noexcept { return multiplicity_; }
  const UnitMap& to_unit() const noexcept { return map_; }
  std::size_t merged_duplicates() const noexcept { return merged_; }
  const std::string& label() const noexcept { return label_; }

  //! Number of observations, counting repeats.
  std::size_t n() const noexcept { return n_; }
  //! Number of distinct locations.
  std::size_t distinct() const noexcept { return points_.size(); }
  bool empty() const noexcept { return points_.empty(); }

  //! Observations in unit coordinates with repeats expanded.
  std::vector<double> expanded() const;

private:
  std::vector<double> points_;
  std::vector<int> multiplicity_;
  UnitMap map_;
  std::size_t merged_ = 0;
  std::size_t n_ = 0;
  std::string label_;
};

//! Parses one decimal number per line; blank lines and '#' comments are
//! skipped. Throws ParseError on a bad line and InputError("no samples")
//! when nothing was read.
RawSamples load_samples(std::istream& in, std::string label = {});
RawSamples load_samples(const std::filesystem::path& path);

//! Maps min(values) to `margin` and max(values) to `1 - margin`, sorts,
//! and merges exact duplicates.
SampleSet rescale(const RawSamples& raw, double margin = 0.05);

//! For data already on (0, 1): identity map, sorting and duplicate merging
//! only. An empty input yields an empty set.
SampleSet from_unit_interval(const RawSamples& raw);

//! `n` draws from normal(mu, sigma2) conditioned on (0, 1), by rejection.
//! The stream is fully determined by `seed`.
RawSamples sample_truncated_normal(std::size_t n, double mu, double sigma2, std::uint64_t seed);

} // namespace ocdens
