// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit if any fails.

#include "ocdens/diagnostics.hpp"
#include "ocdens/kde.hpp"
#include "ocdens/newton.hpp"
#include "ocdens/oracle.hpp"
#include "ocdens/partition.hpp"
#include "support.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <exception>
#include <functional>
#include <numbers>
#include <string>
#include <vector>

using namespace ocdens;
using ocdens::testing::count_local_maxima;
using ocdens::testing::data_path;
using ocdens::testing::unit_samples;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0)
{
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

struct Verdict
{
  bool pass = false;
  std::string detail;
};

ModelParams params(double alpha, double beta = 1.0)
{
  ModelParams p;
  p.alpha = alpha;
  p.beta = beta;
  return p;
}

SampleSet synthetic(std::size_t n, std::uint64_t seed)
{
  return from_unit_interval(sample_truncated_normal(n, 0.5, 0.01, seed));
}

std::vector<double> density(const SolveOutcome& o)
{
  std::vector<double> f(o.solution.y2.size());
  std::transform(o.solution.y2.begin(), o.solution.y2.end(), f.begin(), [](double v) { return std::exp(v); });
  return f;
}

Verdict trivial_exactness()
{
  const auto t0 = Clock::now();
  const Partition grid = build_partition(SampleSet{}, 1.0 / 2000);
  const SolveOutcome o = solve(SampleSet{}, grid, params(1.0), SolverConfig{});
  const double elapsed = seconds_since(t0);
  double vmax = 0.0;
  for (double v : o.solution.y2)
    vmax = std::max(vmax, std::abs(v));
  const bool pass = o.converged && o.iterations <= 2 && vmax == 0.0 && o.solution.gamma == 0.0 &&
                    o.final_residual <= 1e-12 && elapsed < 1.0;
  return {pass, fmt::format("iterations {}, max|v| {:.1e}, gamma {}, residual {:.1e}, {:.3f} s", o.iterations,
                            vmax, o.solution.gamma, o.final_residual, elapsed)};
}

Verdict gamma_identity()
{
  const double h = 1.0 / 2000;
  double worst_ratio = 0.0;
  int solves = 0;
  bool all_converged = true;
  for (std::size_t n : {1u, 2u, 10u, 100u}) {
    const SampleSet s = synthetic(n, 42);
    const Partition grid = build_partition(s, h);
    for (double alpha : {0.5, 1.0, 3.0}) {
      const SolveOutcome o = solve(s, grid, params(alpha), SolverConfig{});
      ++solves;
      if (!o.converged) {
        all_converged = false;
        continue;
      }
      const double r = gamma_identity_residual(o, grid, params(alpha), s.n());
      worst_ratio = std::max(worst_ratio, std::abs(r) / (50 * h * h * (1 + std::abs(o.solution.gamma))));
    }
  }
  return {all_converged && worst_ratio <= 1.0,
          fmt::format("{} solves, worst |residual| / bound = {:.3f}", solves, worst_ratio)};
}

Verdict gamma_pattern()
{
  const SampleSet s = synthetic(100, 42);
  const Partition grid = build_partition(s, 1.0 / 2000);
  bool pass = true;
  std::string detail;
  for (auto [alpha, band] : {std::pair{0.01, 0.01}, std::pair{0.1, 0.01}, std::pair{1.0, 0.03}, std::pair{3.0, 0.03}}) {
    const SolveOutcome o = solve(s, grid, params(alpha), SolverConfig{});
    const double target = 100.0 / alpha;
    const double dev = std::abs(o.solution.gamma - target) / target;
    pass = pass && o.converged && dev <= band;
    detail += fmt::format("alpha {}: gamma {:.1f} ({:.2f}%); ", alpha, o.solution.gamma, 100 * dev);
  }
  return {pass, detail};
}

Verdict boundary_and_jumps()
{
  const double h = 1.0 / 2000;
  double boundary = 0.0, jump = 0.0;
  std::size_t checked = 0, skipped = 0;
  bool converged = true;
  const std::vector<SampleSet> sets{unit_samples({0.3, 0.7}), synthetic(10, 42), synthetic(100, 42)};
  for (const SampleSet& s : sets) {
    const Partition grid = build_partition(s, h);
    for (double alpha : {0.5, 1.0, 3.0}) {
      const SolveOutcome o = solve(s, grid, params(alpha), SolverConfig{});
      converged = converged && o.converged;
      const DiagnosticsReport d = diagnose(o, grid, params(alpha), s.n());
      boundary = std::max(boundary, *std::max_element(d.boundary_errors.begin(), d.boundary_errors.end()));
      jump = std::max(jump, d.jump_deviation_max);
      checked += s.distinct() - d.jumps_skipped;
      skipped += d.jumps_skipped;
    }
  }
  return {converged && boundary <= 1e-10 && jump <= 0.05 && checked > 0,
          fmt::format("max boundary error {:.1e}, max relative jump deviation {:.4f} over {} jumps ({} skipped: "
                      "stage too short to extrapolate)",
                      boundary, jump, checked, skipped)};
}

Verdict scheme_orders()
{
  const auto t0 = Clock::now();
  const SampleSet s = unit_samples({0.2, 0.45, 0.8});
  const ModelParams p = params(1.0);
  const Partition fine = build_partition(s, 1.0 / 32000);
  const SolveOutcome ref = solve(s, fine, p, SolverConfig{});
  bool pass = ref.converged;
  std::string detail;
  for (auto [scheme, order] : {std::pair{Scheme::euler, 1.0}, std::pair{Scheme::trapezoid, 2.0}}) {
    SolverConfig c;
    c.scheme = scheme;
    std::vector<double> errors;
    for (double cells : {500.0, 1000.0, 2000.0, 4000.0}) {
      const Partition g = build_partition(s, 1.0 / cells);
      const SolveOutcome o = solve(s, g, p, c);
      pass = pass && o.converged;
      double err = 0.0;
      for (std::size_t j = 0; j < s.distinct(); ++j)
        err = std::max(err, std::abs(o.solution.y2[g.data_indices[j]] - ref.solution.y2[fine.data_indices[j]]));
      errors.push_back(err);
    }
    detail += fmt::format("{} orders", to_string(scheme));
    for (std::size_t i = 1; i < errors.size(); ++i) {
      const double observed = std::log2(errors[i - 1] / errors[i]);
      pass = pass && std::abs(observed - order) <= 0.3;
      detail += fmt::format(" {:.2f}", observed);
    }
    detail += "; ";
  }
  const double elapsed = seconds_since(t0);
  detail += fmt::format("{:.1f} s", elapsed);
  return {pass && elapsed < 120.0, detail};
}

Verdict oracle_equivalence()
{
  const auto t0 = Clock::now();
  const SampleSet s = unit_samples({0.3, 0.7});
  const Partition grid = build_partition(s, 1.0 / 200);
  const SolveOutcome o = solve(s, grid, params(1.0), SolverConfig{});
  ModelParams pp = params(penalty_alpha(1.0));
  const OracleResult r = minimize_P(s, pp, 201, 1e-8);
  double sup = 0.0;
  for (std::size_t k = 0; k < r.v.size(); ++k)
    sup = std::max(sup, std::abs(std::exp(r.v[k]) - std::exp(o.solution.y2[k])));
  const double elapsed = seconds_since(t0);
  return {o.converged && grid.nodes.size() == 201 && sup <= 1e-2 && elapsed < 180.0,
          fmt::format("sup |f_bvp - f_oracle| = {:.2e} on 201 nodes, {} oracle iterations, {:.2f} s", sup,
                      r.iterations, elapsed)};
}

Verdict order_reduction()
{
  const SampleSet s = unit_samples({0.3, 0.7});
  bool pass = true;
  double previous = INFINITY;
  std::string detail;
  for (double cells : {200.0, 500.0, 1000.0, 2000.0}) {
    const double h = 1.0 / cells;
    const Partition grid = build_partition(s, h);
    const SolveOutcome o = solve(s, grid, params(1.0), SolverConfig{});
    const auto r = order_reduction_residual(o, grid, params(1.0));
    const double worst = *std::max_element(r.begin(), r.end());
    const double bound = 100 * h * std::max(std::abs(o.solution.gamma), 1.0);
    pass = pass && o.converged && worst <= bound && worst < previous;
    previous = worst;
    detail += fmt::format("h=1/{}: {:.2e} (bound {:.2e}); ", cells, worst, bound);
  }
  return {pass, detail};
}

Verdict dataset_regression(const std::string& file,
                           std::size_t expected_n,
                           bool exactly_two,
                           double gamma_target,
                           double gamma_band)
{
  const SampleSet s = rescale(load_samples(data_path(file)));
  const double h = 1.0 / 2000;
  const Partition grid = build_partition(s, h);
  const SolveOutcome o = solve(s, grid, params(1.0), SolverConfig{});
  const std::size_t maxima = count_local_maxima(density(o));
  const bool modes_ok = exactly_two ? maxima == 2 : maxima >= 2;
  const bool shape_ok = s.n() == expected_n && grid.L() >= 2000 && grid.L() <= 2000 + expected_n;
  const double dev = std::abs(o.solution.gamma - gamma_target) / gamma_target;
  const bool gamma_ok = dev <= gamma_band;
  return {o.converged && modes_ok && shape_ok && gamma_ok,
          fmt::format("converged {}, n {}, L {}, interior local maxima {} ({}), gamma {:.2f} vs {} ({:.0f}% off, "
                      "{})",
                      o.converged ? "yes" : "no", s.n(), grid.L(), maxima, modes_ok ? "ok" : "mismatch",
                      o.solution.gamma, gamma_target, 100 * dev, gamma_ok ? "ok" : "outside band")};
}

Verdict performance()
{
  const SampleSet s = synthetic(1000, 42);
  const auto t0 = Clock::now();
  const Partition grid = build_partition(s, 1.0 / 2000);
  const SolveOutcome o = solve(s, grid, params(1.0), SolverConfig{});
  const double elapsed = seconds_since(t0);
  return {o.converged && elapsed < 10.0,
          fmt::format("n 1000, L {}, {} iterations, {:.3f} s", grid.L(), o.iterations, elapsed)};
}

Verdict kde_baseline()
{
  const RawSamples raw = load_samples(data_path("old_faithful.txt"));
  double worst_mass = 0.0;
  for (double bw : {0.1, normal_reference_bandwidth(raw.values), 1.0}) {
    const auto [lo, hi] = std::minmax_element(raw.values.begin(), raw.values.end());
    const auto grid = linspace(*lo - 4 * bw, *hi + 4 * bw, 20001);
    const KdeEstimate est = kde_gaussian(raw, bw, grid);
    worst_mass = std::max(worst_mass, std::abs(trapezoid(grid, est.f) - 1.0));
  }
  double worst_peak = 0.0;
  for (double bw : {0.01, 0.3, 5.0}) {
    const std::vector<double> at{1.7};
    const double f = kde_gaussian(RawSamples{{1.7}, {}}, bw, at).f[0];
    worst_peak = std::max(worst_peak, std::abs(f - 1.0 / (bw * std::sqrt(2.0 * std::numbers::pi))));
  }
  return {worst_mass <= 1e-3 && worst_peak <= 1e-12,
          fmt::format("max |mass - 1| {:.1e}, max single-sample error {:.1e}", worst_mass, worst_peak)};
}

} // namespace

int main()
{
  const std::vector<std::pair<std::string, std::function<Verdict()>>> criteria{
    {"trivial exactness", trivial_exactness},
    {"gamma identity", gamma_identity},
    {"gamma near n/alpha", gamma_pattern},
    {"boundary and jump structure", boundary_and_jumps},
    {"scheme orders", scheme_orders},
    {"oracle equivalence", oracle_equivalence},
    {"order-reduction first integral", order_reduction},
    {"old faithful regression", [] { return dataset_regression("old_faithful.txt", 272, true, 1369.3, 0.15); }},
    {"galaxy regression", [] { return dataset_regression("galaxies.txt", 83, false, 3480.0, 0.20); }},
    {"performance envelope", performance},
    {"kde baseline", kde_baseline},
  };
  int failures = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Verdict v;
    try {
      v = criteria[i].second();
    } catch (const std::exception& e) {
      v = {false, std::string("threw: ") + e.what()};
    }
    failures += v.pass ? 0 : 1;
    fmt::print("criterion {:2} {} {}: {}\n", i + 1, v.pass ? "PASS" : "FAIL", criteria[i].first, v.detail);
  }
  fmt::print("{} of {} criteria passed\n", criteria.size() - failures, criteria.size());
  return failures == 0 ? 0 : 1;
}
