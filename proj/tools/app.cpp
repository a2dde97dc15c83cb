#include "app.hpp"

#include "ocdens/diagnostics.hpp"
#include "ocdens/error.hpp"
#include "ocdens/kde.hpp"
#include "ocdens/newton.hpp"
#include "ocdens/oracle.hpp"
#include "ocdens/partition.hpp"

#include <fmt/format.h>
#include <fmt/os.h>

#include <algorithm>
#include <atomic>
#include <charconv>
#include <chrono>
#include <cmath>
#include <fstream>
#include <ostream>
#include <random>
#include <sstream>
#include <thread>

namespace ocdens::app {

namespace {

double parse_real(std::string_view s, std::string_view what)
{
  while (!s.empty() && s.front() == ' ')
    s.remove_prefix(1);
  while (!s.empty() && s.back() == ' ')
    s.remove_suffix(1);
  if (!s.empty() && s.front() == '+')
    s.remove_prefix(1);
  double value = 0.0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
  if (ec != std::errc() || ptr != s.data() + s.size() || !std::isfinite(value))
    throw InputError(fmt::format("invalid {}: '{}'", what, s));
  return value;
}

std::vector<std::string_view> split(std::string_view s, char sep)
{
  std::vector<std::string_view> parts;
  std::size_t start = 0;
  while (true) {
    const auto pos = s.find(sep, start);
    parts.push_back(s.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start));
    if (pos == std::string_view::npos)
      return parts;
    start = pos + 1;
  }
}

std::string_view strip_prefix(std::string_view spec, std::string_view prefix, std::string_view what)
{
  if (spec.substr(0, prefix.size()) != prefix)
    throw InputError(fmt::format("invalid {} '{}': expected {}...", what, spec, prefix));
  return spec.substr(prefix.size());
}

std::string alpha_tag(double alpha)
{
  return fmt::format("alpha_{}", alpha);
}

struct SolveRecord
{
  double alpha = 0.0;
  std::optional<SolveOutcome> outcome;
  std::string error;
  double seconds = 0.0;

  bool converged() const { return outcome && outcome->converged; }
};

SolveRecord timed_solve(const SampleSet& samples,
                        const Partition& grid,
                        const ModelParams& params,
                        const SolverConfig& solver,
                        std::optional<StateVector> start)
{
  SolveRecord rec;
  rec.alpha = params.alpha;
  const auto t0 = std::chrono::steady_clock::now();
  try {
    rec.outcome = solve(samples, grid, params, solver, std::move(start));
  } catch (const SolverError& e) {
    rec.error = e.what();
  }
  rec.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return rec;
}

void write_density(const std::filesystem::path& path,
                   const SolveRecord& rec,
                   const Partition& grid,
                   const SampleSet& samples)
{
  auto out = fmt::output_file(path.string());
  if (!rec.converged())
    out.print("# not converged{}\n", rec.error.empty() ? "" : ": " + rec.error);
  out.print("t_unit\tt_original\tf_unit\tf_original\tF\tv\tvdot\n");
  if (!rec.outcome)
    return;
  const auto& y = rec.outcome->solution;
  const UnitMap& map = samples.to_unit();
  for (std::size_t k = 0; k < grid.nodes.size(); ++k) {
    const double f = std::exp(y.y2[k]);
    out.print("{:.17g}\t{:.17g}\t{:.17g}\t{:.17g}\t{:.17g}\t{:.17g}\t{:.17g}\n",
              grid.nodes[k], map.to_original(grid.nodes[k]), f, f * map.scale, y.y1[k], y.y2[k], y.y3[k]);
  }
}

std::string diagnostics_text(const SolveRecord& rec, const Partition& grid, const ModelParams& params, std::size_t n)
{
  std::ostringstream os;
  os << "alpha " << fmt::format("{:.17g}", rec.alpha) << '\n';
  if (!rec.converged()) {
    os << "converged 0\n";
    if (!rec.error.empty())
      os << "error " << rec.error << '\n';
    return os.str();
  }
  os << "converged 1\n";
  write_report(os, diagnose(*rec.outcome, grid, params, n));
  return os.str();
}

double slope_fit(const std::vector<double>& x, const std::vector<double>& y)
{
  const double m = static_cast<double>(x.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sx += x[i];
    sy += y[i];
    sxx += x[i] * x[i];
    sxy += x[i] * y[i];
  }
  return (m * sxy - sx * sy) / (m * sxx - sx * sx);
}

SampleSet unit_samples(std::vector<double> values)
{
  return from_unit_interval(RawSamples{std::move(values), {}});
}

} // namespace

SynthSpec parse_synth(std::string_view spec)
{
  const auto parts = split(strip_prefix(spec, "normal:", "synthetic spec"), ',');
  if (parts.size() != 3)
    throw InputError(fmt::format("invalid synthetic spec '{}': expected normal:MU,SIGMA2,N", spec));
  SynthSpec s;
  s.mu = parse_real(parts[0], "mean");
  s.sigma2 = parse_real(parts[1], "variance");
  const double n = parse_real(parts[2], "sample count");
  if (n < 0 || n != std::floor(n))
    throw InputError(fmt::format("invalid sample count '{}'", parts[2]));
  s.n = static_cast<std::size_t>(n);
  if (!(s.sigma2 > 0.0))
    throw InputError("sigma2 must be positive");
  return s;
}

ReferenceFunction parse_reference(std::string_view spec)
{
  if (spec == "zero")
    return ReferenceFunction::zero();
  const auto parts = split(strip_prefix(spec, "normal:", "reference"), ',');
  if (parts.size() != 2)
    throw InputError(fmt::format("invalid reference '{}': expected zero or normal:MU,SIGMA2", spec));
  return ReferenceFunction::normal_log(parse_real(parts[0], "mean"), parse_real(parts[1], "variance"));
}

std::vector<double> parse_list(std::string_view spec)
{
  std::vector<double> out;
  for (auto part : split(spec, ',')) {
    const double v = parse_real(part, "list entry");
    if (!(v > 0.0))
      throw InputError(fmt::format("list entries must be positive, got '{}'", part));
    out.push_back(v);
  }
  return out;
}

void RunConfig::validate() const
{
  if (input.empty() == !synth.has_value())
    throw InputError("exactly one of --input or --synth is required");
  if (!(beta >= 0.0))
    throw InputError("beta must be nonnegative");
  if (!(h > 0.0 && h < 1.0))
    throw InputError("h must lie in (0, 1)");
  if (!(margin >= 0.0 && margin < 0.5))
    throw InputError("margin must lie in [0, 0.5)");
  if (!(tol > 0.0))
    throw InputError("tol must be positive");
  if (max_iter < 1)
    throw InputError("max-iter must be at least 1");
  if (jobs < 1)
    throw InputError("jobs must be at least 1");
  for (double a : alphas)
    if (!(a > 0.0))
      throw InputError("alpha must be positive");
}

RawSamples load_raw(const RunConfig& config)
{
  if (config.synth) {
    auto raw = sample_truncated_normal(config.synth->n, config.synth->mu, config.synth->sigma2, config.seed);
    raw.label = "synth";
    return raw;
  }
  auto raw = load_samples(config.input);
  raw.label = config.input.stem().string();
  return raw;
}

SampleSet load_set(const RunConfig& config)
{
  const RawSamples raw = load_raw(config);
  return config.synth ? from_unit_interval(raw) : rescale(raw, config.margin);
}

int run_estimate(const RunConfig& config, std::ostream& log)
{
  config.validate();
  if (config.alphas.empty())
    throw InputError("--alpha is required");
  const SampleSet samples = load_set(config);
  const Partition grid = build_partition(samples, config.h);

  ModelParams base;
  base.beta = config.beta;
  base.w = config.w;
  SolverConfig solver;
  solver.tol = config.tol;
  solver.max_iter = config.max_iter;
  solver.scheme = config.scheme;

  std::vector<double> alphas = config.alphas;
  std::sort(alphas.begin(), alphas.end(), std::greater<>());
  alphas.erase(std::unique(alphas.begin(), alphas.end()), alphas.end());

  std::vector<SolveRecord> records(alphas.size());
  auto params_for = [&](double a) {
    ModelParams p = base;
    p.alpha = a;
    return p;
  };
  if (config.jobs == 1) {
    // descending sweep, each solve warm-started from the previous alpha
    std::optional<StateVector> start;
    for (std::size_t i = 0; i < alphas.size(); ++i) {
      if (i > 0 && records[i - 1].converged())
        start = warm_start(records[i - 1].outcome->solution, samples.n(), alphas[i - 1], alphas[i]);
      else
        start.reset();
      records[i] = timed_solve(samples, grid, params_for(alphas[i]), solver, start);
    }
  } else {
    // independent cold starts so each file is the same for any schedule
    std::atomic<std::size_t> next{0};
    std::vector<std::jthread> workers;
    const auto count = std::min<std::size_t>(static_cast<std::size_t>(config.jobs), alphas.size());
    for (std::size_t t = 0; t < count; ++t)
      workers.emplace_back([&] {
        for (std::size_t i = next++; i < alphas.size(); i = next++)
          records[i] = timed_solve(samples, grid, params_for(alphas[i]), solver, std::nullopt);
      });
    workers.clear();
  }

  std::filesystem::create_directories(config.out);
  const std::string label = samples.label().empty() ? "samples" : samples.label();
  auto manifest = fmt::output_file((config.out / "manifest.tsv").string());
  manifest.print("label\tn\tn_distinct\tmerged\th\tL\talpha\tbeta\tscheme\tgamma\titerations\tresidual\tconverged\tstrategy\twall_time_s\n");
  bool all_converged = true;
  for (const auto& rec : records) {
    const ModelParams params = params_for(rec.alpha);
    const std::string stem = label + "_" + alpha_tag(rec.alpha);
    write_density(config.out / (stem + ".tsv"), rec, grid, samples);
    const std::string diag = diagnostics_text(rec, grid, params, samples.n());
    std::ofstream(config.out / (stem + ".diag.txt")) << diag;
    if (config.diagnose)
      log << diag;

    const double nan = std::nan("");
    manifest.print("{}\t{}\t{}\t{}\t{:.17g}\t{}\t{:.17g}\t{:.17g}\t{}\t{:.17g}\t{}\t{:.17g}\t{}\t{}\t{:.6f}\n",
                   label, samples.n(), samples.distinct(), samples.merged_duplicates(), config.h, grid.L(),
                   rec.alpha, config.beta, to_string(config.scheme),
                   rec.outcome ? rec.outcome->solution.gamma : nan, rec.outcome ? rec.outcome->iterations : 0,
                   rec.outcome ? rec.outcome->final_residual : nan, rec.converged() ? 1 : 0,
                   rec.outcome ? rec.outcome->strategy : "error", rec.seconds);
    if (!rec.converged()) {
      all_converged = false;
      log << fmt::format("alpha {}: not converged{}\n", rec.alpha, rec.error.empty() ? "" : " (" + rec.error + ")");
    }
  }
  if (samples.merged_duplicates() > 0)
    log << fmt::format("note: {} duplicate observations merged into {} distinct points\n",
                       samples.merged_duplicates(), samples.distinct());
  return all_converged ? ok : not_converged;
}

int run_compare(const RunConfig& config, std::ostream& log)
{
  config.validate();
  const RawSamples raw = load_raw(config);
  if (raw.empty())
    throw InputError("no samples");
  const SampleSet samples = config.synth ? from_unit_interval(raw) : rescale(raw, config.margin);
  const Partition grid = build_partition(samples, config.h);
  std::vector<double> where(grid.nodes.size());
  for (std::size_t k = 0; k < where.size(); ++k)
    where[k] = samples.to_unit().to_original(grid.nodes[k]);

  std::vector<double> bws = config.bandwidths;
  if (bws.empty())
    bws.push_back(normal_reference_bandwidth(raw.values));

  std::filesystem::create_directories(config.out);
  const std::string label = raw.label.empty() ? "samples" : raw.label;
  for (double bw : bws) {
    const KdeEstimate est = kde_gaussian(raw, bw, where);
    auto out = fmt::output_file((config.out / fmt::format("{}_kde_bw_{}.tsv", label, bw)).string());
    out.print("t_original\tf_original\n");
    for (std::size_t k = 0; k < where.size(); ++k)
      out.print("{:.17g}\t{:.17g}\n", est.grid[k], est.f[k]);
  }

  const std::size_t nbins = config.nbins > 0 ? config.nbins : default_bin_count(raw.size());
  const Histogram hist = histogram(raw, nbins);
  auto out = fmt::output_file((config.out / fmt::format("{}_histogram.tsv", label)).string());
  out.print("bin_left\tbin_right\tdensity\tcount\n");
  for (std::size_t b = 0; b < hist.bins(); ++b)
    out.print("{:.17g}\t{:.17g}\t{:.17g}\t{}\n", hist.bin_edges[b], hist.bin_edges[b + 1], hist.densities[b],
              hist.counts[b]);
  log << fmt::format("{} KDE file(s) and a {}-bin histogram written to {}\n", bws.size(), nbins, config.out.string());
  return ok;
}

int run_generate(const RunConfig& config, std::ostream& log)
{
  if (!config.synth)
    throw InputError("generate needs --synth");
  const RawSamples raw = load_raw(config);
  if (config.out.has_parent_path())
    std::filesystem::create_directories(config.out.parent_path());
  auto out = fmt::output_file(config.out.string());
  out.print("# normal:{},{},{} seed {}\n", config.synth->mu, config.synth->sigma2, config.synth->n, config.seed);
  for (double v : raw.values)
    out.print("{:.17g}\n", v);
  log << fmt::format("{} samples written to {}\n", raw.size(), config.out.string());
  return ok;
}

int run_verify(const VerifyOptions& options, std::ostream& log)
{
  const Scheme scheme = options.scheme;
  const double order = scheme == Scheme::euler ? 1.0 : 2.0;
  SolverConfig solver;
  solver.scheme = scheme;
  ModelParams unit;
  int failures = 0;
  auto report = [&](std::string_view name, bool pass, const std::string& detail) {
    failures += pass ? 0 : 1;
    log << fmt::format("{} {} {}\n", pass ? "PASS" : "FAIL", name, detail);
  };
  auto guarded = [&](std::string_view name, auto&& check) {
    try {
      check();
    } catch (const std::exception& e) {
      report(name, false, std::string("threw: ") + e.what());
    }
  };

  guarded("jacobian_fd", [&] {
    const SampleSet s = unit_samples({0.3, 0.7});
    const Partition grid = build_partition(s, 0.1);
    ModelParams p;
    p.w = ReferenceFunction::normal_log(0.5, 0.01);
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    double worst = 0.0;
    for (int trial = 0; trial < 3; ++trial) {
      StateVector y = StateVector::zeros(grid.nodes.size());
      for (std::size_t k = 0; k < grid.nodes.size(); ++k) {
        y.y1[k] = 0.5 + 0.5 * u(rng);
        y.y2[k] = u(rng);
        y.y3[k] = 2.0 * u(rng);
      }
      y.gamma = 2.5 + 2.5 * u(rng);
      const SparseMatrix jac = options.jacobian(y, grid, p, scheme);
      std::vector<double> x = y.flatten();
      const double step = 1e-6;
      for (std::size_t c = 0; c < x.size(); ++c) {
        const double keep = x[c];
        x[c] = keep + step;
        const auto plus = residual(StateVector::unflatten(x), grid, p, scheme).values;
        x[c] = keep - step;
        const auto minus = residual(StateVector::unflatten(x), grid, p, scheme).values;
        x[c] = keep;
        for (std::size_t r = 0; r < plus.size(); ++r)
          worst = std::max(worst, std::abs((plus[r] - minus[r]) / (2 * step) - jac.at(r, c)));
      }
    }
    report("jacobian_fd", worst <= 1e-6, fmt::format("max |J - FD| = {:.3e} (tol 1e-6)", worst));
  });

  guarded("trivial", [&] {
    const SampleSet s;
    const Partition grid = build_partition(s, 0.0005);
    const SolveOutcome o = solve(s, grid, unit, solver);
    double vmax = 0.0;
    for (double v : o.solution.y2)
      vmax = std::max(vmax, std::abs(v));
    report("trivial", o.converged && o.iterations <= 2 && o.final_residual <= 1e-12 && vmax == 0.0 &&
                        o.solution.gamma == 0.0,
           fmt::format("iterations {} residual {:.3e} gamma {}", o.iterations, o.final_residual, o.solution.gamma));
  });

  guarded("oracle", [&] {
    const SampleSet s = unit_samples({0.3, 0.7});
    const Partition grid = build_partition(s, 1.0 / 200);
    const SolveOutcome o = solve(s, grid, unit, solver);
    ModelParams pp = unit;
    pp.alpha = penalty_alpha(unit.alpha);
    const OracleResult r = minimize_P(s, pp, 201, 1e-8);
    double sup = 0.0;
    for (std::size_t k = 0; k < r.v.size(); ++k)
      sup = std::max(sup, std::abs(std::exp(r.v[k]) - std::exp(o.solution.y2[k])));
    const double g = oracle_gamma(r, s, pp, unit.alpha);
    const double gerr = std::abs(g - o.solution.gamma) / std::abs(o.solution.gamma);
    report("oracle", o.converged && sup <= 1e-2 && gerr <= 1e-2,
           fmt::format("sup |f - f_oracle| = {:.3e}, gamma rel. diff {:.3e}", sup, gerr));
  });

  guarded("identities", [&] {
    const SampleSet s = unit_samples({0.3, 0.7});
    const double h = 1.0 / 2000;
    const Partition grid = build_partition(s, h);
    const SolveOutcome o = solve(s, grid, unit, solver);
    const DiagnosticsReport d = diagnose(o, grid, unit, s.n());
    const double gamma = o.solution.gamma;
    const double gid_bound = 50.0 * std::pow(h, order) * (1.0 + std::abs(gamma));
    const double or_bound = 100.0 * h * std::max(std::abs(gamma), 1.0);
    const double or_max = *std::max_element(d.order_reduction_residuals->begin(), d.order_reduction_residuals->end());
    const double bmax = *std::max_element(d.boundary_errors.begin(), d.boundary_errors.end());
    report("identities",
           std::abs(d.gamma_identity_residual) <= gid_bound && d.jump_deviation_max <= 0.05 && or_max <= or_bound &&
             bmax <= 1e-10,
           fmt::format("gamma id {:.2e} (<= {:.2e}), jump {:.2e} (<= 0.05), first integral {:.2e} (<= {:.2e}), "
                       "boundary {:.2e}",
                       d.gamma_identity_residual, gid_bound, d.jump_deviation_max, or_max, or_bound, bmax));
  });

  guarded("order", [&] {
    const SampleSet s = unit_samples({0.2, 0.45, 0.8});
    SolverConfig ref_cfg;
    const Partition fine = build_partition(s, 1.0 / 32000);
    const SolveOutcome ref = solve(s, fine, unit, ref_cfg);
    std::vector<double> logh, loge;
    for (double cells : {500.0, 1000.0, 2000.0, 4000.0}) {
      const Partition grid = build_partition(s, 1.0 / cells);
      const SolveOutcome o = solve(s, grid, unit, solver);
      double err = 0.0;
      for (std::size_t j = 0; j < s.distinct(); ++j)
        err = std::max(err, std::abs(o.solution.y2[grid.data_indices[j]] - ref.solution.y2[fine.data_indices[j]]));
      logh.push_back(std::log(1.0 / cells));
      loge.push_back(std::log(err));
    }
    const double observed = slope_fit(logh, loge);
    report("order", std::abs(observed - order) <= 0.3,
           fmt::format("{} observed {:.3f}, expected {:.1f} +/- 0.3", to_string(scheme), observed, order));
  });

  return failures == 0 ? ok : check_failed;
}

} // namespace ocdens::app
