#include "ocdens/samples.hpp"

#include "ocdens/error.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <random>

namespace ocdens {

namespace {

std::string_view trim(std::string_view s)
{
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string_view::npos)
    return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  return s.substr(first, last - first + 1);
}

SampleSet collapse(std::vector<double> unit, UnitMap map, std::string label)
{
  std::sort(unit.begin(), unit.end());
  std::vector<double> points;
  std::vector<int> mult;
  points.reserve(unit.size());
  mult.reserve(unit.size());
  std::size_t merged = 0;
  for (double u : unit) {
    if (!points.empty() && points.back() == u) {
      ++mult.back();
      ++merged;
      continue;
    }
    points.push_back(u);
    mult.push_back(1);
  }
  return SampleSet(std::move(points), std::move(mult), map, merged, std::move(label));
}

} // namespace

SampleSet::SampleSet(std::vector<double> points,
                     std::vector<int> multiplicity,
                     UnitMap map,
                     std::size_t merged_duplicates,
                     std::string label)
  : points_(std::move(points))
  , multiplicity_(std::move(multiplicity))
  , map_(map)
  , merged_(merged_duplicates)
  , label_(std::move(label))
{
  if (points_.size() != multiplicity_.size())
    throw InputError("sample points and multiplicities differ in length");
  for (std::size_t i = 0; i < points_.size(); ++i) {
    const double t = points_[i];
    if (!(t > 0.0 && t < 1.0))
      throw InputError("sample point " + std::to_string(t) +
                       " is not strictly inside (0, 1); use a positive margin");
    if (i > 0 && !(points_[i - 1] < t))
      throw InputError("sample points must be strictly increasing");
    if (multiplicity_[i] < 1)
      throw InputError("multiplicities must be positive");
    n_ += static_cast<std::size_t>(multiplicity_[i]);
  }
}

std::vector<double> SampleSet::expanded() const
{
  std::vector<double> out;
  out.reserve(n_);
  for (std::size_t i = 0; i < points_.size(); ++i)
    out.insert(out.end(), static_cast<std::size_t>(multiplicity_[i]), points_[i]);
  return out;
}

RawSamples load_samples(std::istream& in, std::string label)
{
  RawSamples raw;
  raw.label = std::move(label);
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto s = trim(line);
    if (s.empty() || s.front() == '#')
      continue;
    // from_chars rejects a leading '+', which plain text files do contain
    const auto body = s.front() == '+' ? s.substr(1) : s;
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(body.data(), body.data() + body.size(), v);
    if (ec != std::errc() || ptr != body.data() + body.size())
      throw ParseError(lineno, "cannot parse '" + std::string(s) + "' as a number");
    if (!std::isfinite(v))
      throw ParseError(lineno, "non-finite sample value");
    raw.values.push_back(v);
  }
  if (raw.values.empty())
    throw InputError("no samples");
  return raw;
}

RawSamples load_samples(const std::filesystem::path& path)
{
  std::ifstream in(path);
  if (!in)
    throw InputError("cannot open " + path.string());
  return load_samples(in, path.stem().string());
}

SampleSet rescale(const RawSamples& raw, double margin)
{
  if (raw.empty())
    throw InputError("no samples");
  if (!(margin >= 0.0 && margin < 0.5))
    throw InputError("margin must lie in [0, 0.5)");
  for (double v : raw.values)
    if (!std::isfinite(v))
      throw InputError("non-finite sample value");

  const auto [lo, hi] = std::minmax_element(raw.values.begin(), raw.values.end());
  if (!(*hi > *lo))
    throw InputError("degenerate sample range: all values are identical");
  if (margin == 0.0)
    throw InputError("margin 0 places the extreme samples on the boundary; use a positive margin");

  UnitMap map{*lo, (1.0 - 2.0 * margin) / (*hi - *lo), margin};
  std::vector<double> unit;
  unit.reserve(raw.size());
  for (double v : raw.values)
    unit.push_back(map.to_unit(v));
  return collapse(std::move(unit), map, raw.label);
}

SampleSet from_unit_interval(const RawSamples& raw)
{
  for (double v : raw.values)
    if (!(v > 0.0 && v < 1.0))
      throw InputError("value " + std::to_string(v) + " is not inside (0, 1)");
  return collapse(raw.values, UnitMap::identity(), raw.label);
}

RawSamples sample_truncated_normal(std::size_t n, double mu, double sigma2, std::uint64_t seed)
{
  if (!(sigma2 > 0.0) || !std::isfinite(sigma2))
    throw InputError("sigma2 must be positive");
  if (!std::isfinite(mu))
    throw InputError("mu must be finite");

  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(mu, std::sqrt(sigma2));
  RawSamples raw;
  raw.label = "normal";
  raw.values.reserve(n);
  const std::size_t max_draws = 1000 * n + 1000000;
  std::size_t draws = 0;
  while (raw.values.size() < n) {
    if (++draws > max_draws)
      throw InputError("truncated-normal acceptance rate too low for rejection sampling");
    const double x = normal(rng);
    if (x > 0.0 && x < 1.0)
      raw.values.push_back(x);
  }
  return raw;
}

} // namespace ocdens
