#include "ocdens/error.hpp"
#include "ocdens/samples.hpp"
#include "support.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <random>
#include <set>
#include <sstream>

using namespace ocdens;
using ocdens::testing::data_path;
using ocdens::testing::normal_cdf;

TEST(LoadSamples, ParsesOneValuePerLine)
{
  std::istringstream in("1.0\n2.0\n3.0");
  const RawSamples raw = load_samples(in);
  EXPECT_EQ(raw.values, (std::vector<double>{1.0, 2.0, 3.0}));
}

TEST(LoadSamples, SkipsBlankAndCommentLines)
{
  std::istringstream in("# header\n\n  4.5  \n# another\n-1e-3\r\n+2\n");
  const RawSamples raw = load_samples(in);
  EXPECT_EQ(raw.values, (std::vector<double>{4.5, -1e-3, 2.0}));
}

TEST(LoadSamples, BadLineReportsLineNumber)
{
  std::istringstream in("1.0\n# c\n2.0x\n");
  try {
    load_samples(in);
    FAIL() << "expected ParseError";
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 3u);
  }
}

TEST(LoadSamples, NonFiniteIsRejected)
{
  std::istringstream in("1.0\ninf\n");
  EXPECT_THROW(load_samples(in), ParseError);
}

TEST(LoadSamples, EmptyStreamHasNoSamples)
{
  std::istringstream in("# only a comment\n\n");
  try {
    load_samples(in);
    FAIL() << "expected InputError";
  } catch (const InputError& e) {
    EXPECT_NE(std::string(e.what()).find("no samples"), std::string::npos);
  }
}

TEST(LoadSamples, MissingFileThrows)
{
  EXPECT_THROW(load_samples(std::filesystem::path("/nonexistent/file.txt")), InputError);
}

TEST(LoadSamples, OldFaithfulHas272Observations)
{
  const RawSamples raw = load_samples(data_path("old_faithful.txt"));
  EXPECT_EQ(raw.size(), 272u);
  EXPECT_EQ(raw.label, "old_faithful");
}

TEST(LoadSamples, GalaxiesHas83Observations)
{
  const RawSamples raw = load_samples(data_path("galaxies.txt"));
  EXPECT_EQ(raw.size(), 83u);
}

TEST(Rescale, EndpointsMapToMargins)
{
  const SampleSet s = rescale(RawSamples{{2, 4, 6}, {}}, 0.1);
  ASSERT_EQ(s.distinct(), 3u);
  EXPECT_NEAR(s.points()[0], 0.1, 1e-15);
  EXPECT_NEAR(s.points()[1], 0.5, 1e-15);
  EXPECT_NEAR(s.points()[2], 0.9, 1e-15);
  EXPECT_EQ(s.merged_duplicates(), 0u);
}

TEST(Rescale, DuplicatesAreMergedWithMultiplicity)
{
  const SampleSet s = rescale(RawSamples{{1, 1, 3}, {}}, 0.25);
  ASSERT_EQ(s.distinct(), 2u);
  EXPECT_NEAR(s.points()[0], 0.25, 1e-15);
  EXPECT_NEAR(s.points()[1], 0.75, 1e-15);
  EXPECT_EQ(s.merged_duplicates(), 1u);
  EXPECT_EQ(s.multiplicity(), (std::vector<int>{2, 1}));
  EXPECT_EQ(s.n(), 3u);
  EXPECT_EQ(s.expanded().size(), 3u);
}

TEST(Rescale, NearIdentityMapComposesBack)
{
  const SampleSet s = rescale(RawSamples{{0.2, 0.5, 0.8}, {}}, 0.2);
  EXPECT_NEAR(s.points()[0], 0.2, 1e-12);
  EXPECT_NEAR(s.points()[1], 0.5, 1e-12);
  EXPECT_NEAR(s.points()[2], 0.8, 1e-12);

  const std::vector<double> values{0.2, 0.5, 0.9};
  const SampleSet t = rescale(RawSamples{values, {}}, 0.05);
  for (std::size_t i = 0; i < values.size(); ++i)
    EXPECT_NEAR(t.to_unit().to_original(t.points()[i]), values[i], 1e-12);
}

TEST(Rescale, SortsUnorderedInput)
{
  const SampleSet s = rescale(RawSamples{{5, 1, 3}, {}}, 0.1);
  EXPECT_TRUE(std::is_sorted(s.points().begin(), s.points().end()));
}

TEST(Rescale, Errors)
{
  EXPECT_THROW(rescale(RawSamples{{}, {}}, 0.1), InputError);
  EXPECT_THROW(rescale(RawSamples{{2, 2, 2}, {}}, 0.1), InputError);
  EXPECT_THROW(rescale(RawSamples{{1, 2}, {}}, 0.5), InputError);
  EXPECT_THROW(rescale(RawSamples{{1, 2}, {}}, -0.1), InputError);
  try {
    rescale(RawSamples{{1, 2}, {}}, 0.0);
    FAIL() << "expected InputError";
  } catch (const InputError& e) {
    EXPECT_NE(std::string(e.what()).find("positive margin"), std::string::npos);
  }
}

TEST(Rescale, RoundTripProperty)
{
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(-1e3, 1e3);
  std::uniform_int_distribution<int> size(2, 60);
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<double> values(static_cast<std::size_t>(size(rng)));
    for (auto& v : values)
      v = u(rng);
    // some exact repeats
    values.push_back(values.front());
    const SampleSet s = rescale(RawSamples{values, {}}, 0.05);
    std::set<double> distinct(values.begin(), values.end());
    ASSERT_EQ(s.distinct(), distinct.size());
    auto it = distinct.begin();
    for (std::size_t i = 0; i < s.distinct(); ++i, ++it) {
      EXPECT_GT(s.points()[i], 0.0);
      EXPECT_LT(s.points()[i], 1.0);
      if (i > 0)
        EXPECT_LT(s.points()[i - 1], s.points()[i]);
      const double back = s.to_unit().to_original(s.points()[i]);
      EXPECT_LE(std::abs(back - *it), 1e-12 * std::max(1.0, std::abs(*it)));
    }
    EXPECT_EQ(s.n(), values.size());
  }
}

TEST(FromUnitInterval, IdentityAndEmpty)
{
  const SampleSet s = from_unit_interval(RawSamples{{0.7, 0.2, 0.7}, {}});
  EXPECT_EQ(s.points(), (std::vector<double>{0.2, 0.7}));
  EXPECT_EQ(s.n(), 3u);
  EXPECT_EQ(s.to_unit().to_unit(0.3), 0.3);
  EXPECT_TRUE(from_unit_interval(RawSamples{}).empty());
  EXPECT_THROW(from_unit_interval(RawSamples{{0.0, 0.5}, {}}), InputError);
  EXPECT_THROW(from_unit_interval(RawSamples{{0.5, 1.0}, {}}), InputError);
}

TEST(SampleSet, RejectsInvalidConstruction)
{
  EXPECT_THROW(SampleSet({0.5, 0.4}, {1, 1}, UnitMap::identity(), 0), InputError);
  EXPECT_THROW(SampleSet({0.5}, {0}, UnitMap::identity(), 0), InputError);
  EXPECT_THROW(SampleSet({0.5}, {1, 1}, UnitMap::identity(), 0), InputError);
}

TEST(TruncatedNormal, DrawsLieInUnitInterval)
{
  const RawSamples raw = sample_truncated_normal(100, 0.5, 0.01, 5);
  ASSERT_EQ(raw.size(), 100u);
  for (double x : raw.values) {
    EXPECT_GT(x, 0.0);
    EXPECT_LT(x, 1.0);
  }
}

TEST(TruncatedNormal, ReproducibleForSeed)
{
  const RawSamples a = sample_truncated_normal(500, 0.3, 0.05, 99);
  const RawSamples b = sample_truncated_normal(500, 0.3, 0.05, 99);
  const RawSamples c = sample_truncated_normal(500, 0.3, 0.05, 100);
  EXPECT_EQ(a.values, b.values);
  EXPECT_NE(a.values, c.values);
}

TEST(TruncatedNormal, VanishingVariance)
{
  const RawSamples raw = sample_truncated_normal(1, 0.5, 1e-12, 3);
  ASSERT_EQ(raw.size(), 1u);
  EXPECT_NEAR(raw.values[0], 0.5, 1e-4);
}

TEST(TruncatedNormal, NonPositiveVarianceThrows)
{
  EXPECT_THROW(sample_truncated_normal(10, 0.5, 0.0, 1), InputError);
  EXPECT_THROW(sample_truncated_normal(10, 0.5, -1.0, 1), InputError);
}

TEST(TruncatedNormal, SmallSampleMeansConcentrate)
{
  // n = 4: the mean sits within 3 sigma / sqrt(4) of mu for ~99.7% of seeds
  const double bound = 3.0 * 0.1 / 2.0;
  int inside = 0;
  const int seeds = 2000;
  for (int seed = 0; seed < seeds; ++seed) {
    const RawSamples raw = sample_truncated_normal(4, 0.5, 0.01, static_cast<std::uint64_t>(seed));
    double mean = 0.0;
    for (double x : raw.values)
      mean += x / 4.0;
    inside += std::abs(mean - 0.5) <= bound ? 1 : 0;
  }
  EXPECT_GE(inside, static_cast<int>(0.99 * seeds));
}

TEST(TruncatedNormal, MomentsMatchAnalytic)
{
  // strongly truncated case so the truncation actually matters
  const double mu = 0.2, sigma = 0.2;
  const double a = (0.0 - mu) / sigma, b = (1.0 - mu) / sigma;
  auto phi = [](double z) { return std::exp(-0.5 * z * z) / std::sqrt(2.0 * M_PI); };
  const double Z = normal_cdf(b) - normal_cdf(a);
  const double mean = mu + sigma * (phi(a) - phi(b)) / Z;
  const double var =
    sigma * sigma * (1.0 + (a * phi(a) - b * phi(b)) / Z - std::pow((phi(a) - phi(b)) / Z, 2));

  const RawSamples raw = sample_truncated_normal(200000, mu, sigma * sigma, 17);
  double m = 0.0;
  for (double x : raw.values)
    m += x;
  m /= static_cast<double>(raw.size());
  double v = 0.0;
  for (double x : raw.values)
    v += (x - m) * (x - m);
  v /= static_cast<double>(raw.size() - 1);
  EXPECT_NEAR(m, mean, 5.0 * std::sqrt(var / 200000.0));
  EXPECT_NEAR(v, var, 0.02 * var);
}

TEST(TruncatedNormal, KolmogorovDistanceSmall)
{
  for (auto [mu, sigma2] : {std::pair{0.5, 0.01}, std::pair{0.2, 0.04}}) {
    RawSamples raw = sample_truncated_normal(100000, mu, sigma2, 23);
    std::sort(raw.values.begin(), raw.values.end());
    const double sigma = std::sqrt(sigma2);
    const double lo = normal_cdf(-mu / sigma);
    const double Z = normal_cdf((1.0 - mu) / sigma) - lo;
    const double n = static_cast<double>(raw.size());
    double d = 0.0;
    for (std::size_t i = 0; i < raw.size(); ++i) {
      const double F = (normal_cdf((raw.values[i] - mu) / sigma) - lo) / Z;
      d = std::max({d, std::abs(F - static_cast<double>(i) / n), std::abs(F - static_cast<double>(i + 1) / n)});
    }
    EXPECT_LE(d, 0.01) << "mu " << mu << " sigma2 " << sigma2;
  }
}
