#include "ocdens/newton.hpp"

#include "ocdens/bordered_band.hpp"
#include "ocdens/error.hpp"
#include "ocdens/kde.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace ocdens {

namespace {

constexpr double kPilotFloor = 1e-4;
constexpr std::size_t kPilotBins = 2048;
constexpr int kMaxContinuationDecades = 6;

//! Linear-binned Gaussian KDE on [0, 1], interpolated to `nodes`.
std::vector<double> pilot_density(const SampleSet& samples, std::span<const double> nodes)
{
  const auto values = samples.expanded();
  double bw = 0.1;
  if (samples.distinct() > 1)
    bw = normal_reference_bandwidth(values);

  const std::size_t m = kPilotBins;
  const double dx = 1.0 / static_cast<double>(m - 1);
  std::vector<double> counts(m, 0.0);
  for (double t : values) {
    const double pos = t / dx;
    const auto i = std::min(static_cast<std::size_t>(pos), m - 2);
    const double frac = pos - static_cast<double>(i);
    counts[i] += 1.0 - frac;
    counts[i + 1] += frac;
  }

  const auto reach = static_cast<long>(std::ceil(8.0 * bw / dx));
  const double norm =
    1.0 / (static_cast<double>(values.size()) * bw * std::sqrt(2.0 * std::numbers::pi));
  std::vector<double> binned(m, 0.0);
  for (long i = 0; i < static_cast<long>(m); ++i) {
    double sum = 0.0;
    const long lo = std::max(0L, i - reach);
    const long hi = std::min(static_cast<long>(m) - 1, i + reach);
    for (long j = lo; j <= hi; ++j) {
      if (counts[j] == 0.0)
        continue;
      const double z = static_cast<double>(i - j) * dx / bw;
      sum += counts[j] * std::exp(-0.5 * z * z);
    }
    binned[i] = norm * sum;
  }

  std::vector<double> out(nodes.size());
  for (std::size_t k = 0; k < nodes.size(); ++k) {
    const double pos = nodes[k] / dx;
    const auto i = std::min(static_cast<std::size_t>(pos), m - 2);
    const double frac = pos - static_cast<double>(i);
    out[k] = (1.0 - frac) * binned[i] + frac * binned[i + 1];
  }
  return out;
}

void fill_cumulative(StateVector& y, const Partition& grid)
{
  const std::size_t L = grid.L();
  y.y1[0] = 0.0;
  for (std::size_t k = 0; k < L; ++k)
    y.y1[k + 1] = y.y1[k] + 0.5 * grid.steps[k] * (std::exp(y.y2[k]) + std::exp(y.y2[k + 1]));
  const double total = y.y1[L];
  for (auto& v : y.y1)
    v /= total;
  y.y1[L] = 1.0;
}

std::vector<double> permuted_rhs(const ResidualReport& r, std::size_t L)
{
  std::vector<double> b(r.values.size());
  for (std::size_t i = 0; i < r.values.size(); ++i)
    b[layout::newton_row(i, L)] = -r.values[i];
  return b;
}

void append(SolveOutcome& total, const SolveOutcome& part)
{
  total.iterations += part.iterations;
  total.step_history.insert(total.step_history.end(), part.step_history.begin(), part.step_history.end());
}

} // namespace

void SolverConfig::validate() const
{
  if (!(tol > 0.0))
    throw InputError("tol must be positive");
  if (max_iter < 1)
    throw InputError("max_iter must be at least 1");
  if (!(damping > 0.0 && damping < 1.0))
    throw InputError("damping must lie in (0, 1)");
  if (!(min_step > 0.0 && min_step <= 1.0))
    throw InputError("min_step must lie in (0, 1]");
}

StateVector flat_guess(const SampleSet& samples, const Partition& grid, const ModelParams& params)
{
  StateVector y = StateVector::zeros(grid.nodes.size());
  y.y1 = grid.nodes;
  y.gamma = static_cast<double>(samples.n()) / params.alpha;
  return y;
}

StateVector initial_guess(const SampleSet& samples, const Partition& grid, const ModelParams& params)
{
  if (samples.empty())
    return flat_guess(samples, grid, params);

  const std::size_t nodes = grid.nodes.size();
  StateVector y = StateVector::zeros(nodes);
  const auto pilot = pilot_density(samples, grid.nodes);
  for (std::size_t k = 0; k < nodes; ++k)
    y.y2[k] = std::log(std::max(pilot[k], kPilotFloor));

  double mass = 0.0;
  for (std::size_t k = 0; k < grid.L(); ++k)
    mass += 0.5 * grid.steps[k] * (std::exp(y.y2[k]) + std::exp(y.y2[k + 1]));
  const double shift = std::log(mass);
  for (auto& v : y.y2)
    v -= shift;

  fill_cumulative(y, grid);
  for (std::size_t k = 1; k + 1 < nodes; ++k)
    y.y3[k] = (y.y2[k + 1] - y.y2[k - 1]) / (grid.nodes[k + 1] - grid.nodes[k - 1]);
  y.gamma = static_cast<double>(samples.n()) / params.alpha;
  return y;
}

StateVector warm_start(const StateVector& previous, std::size_t n, double from_alpha, double to_alpha)
{
  StateVector y = previous;
  y.gamma += static_cast<double>(n) * (1.0 / to_alpha - 1.0 / from_alpha);
  return y;
}

SolveOutcome newton(const StateVector& start,
                    const Partition& grid,
                    const ModelParams& params,
                    const SolverConfig& config)
{
  config.validate();
  params.validate();
  const std::size_t L = grid.L();

  SolveOutcome out;
  out.strategy = "initial";
  std::vector<double> x = start.flatten();
  ResidualReport r = residual(start, grid, params, config.scheme);
  BorderedBandMatrix jac(x.size(), layout::kLower, layout::kUpper);

  for (int iter = 1; iter <= config.max_iter && !(r.inf_norm <= config.tol); ++iter) {
    assemble_newton_matrix(StateVector::unflatten(x), grid, params, config.scheme, jac);
    try {
      jac.factorize();
    } catch (const SolverError& e) {
      throw SingularSystem(iter, e.what());
    }
    std::vector<double> dx = permuted_rhs(r, L);
    jac.solve(dx);

    double t = 1.0;
    bool overflowed = false;
    bool accepted = false;
    std::vector<double> trial(x.size());
    ResidualReport rt;
    while (t >= config.min_step) {
      for (std::size_t i = 0; i < x.size(); ++i)
        trial[i] = x[i] + t * dx[i];
      try {
        rt = residual(StateVector::unflatten(trial), grid, params, config.scheme);
        if (rt.inf_norm < r.inf_norm) {
          accepted = true;
          break;
        }
      } catch (const DivergedIterate&) {
        overflowed = true;
      }
      t *= config.damping;
    }
    if (!accepted) {
      if (overflowed)
        throw DivergedIterate("iteration " + std::to_string(iter) +
                              ": damping floor reached with overflowing trial iterates");
      break;
    }
    x.swap(trial);
    r = std::move(rt);
    out.iterations = iter;
    out.step_history.push_back({r.inf_norm, t});
  }

  out.solution = StateVector::unflatten(x);
  out.final_residual = r.inf_norm;
  out.converged = r.inf_norm <= config.tol;
  return out;
}

SolveOutcome solve(const SampleSet& samples,
                   const Partition& grid,
                   const ModelParams& params,
                   const SolverConfig& config,
                   std::optional<StateVector> start)
{
  config.validate();
  params.validate();
  if (grid.data_indices.size() != samples.distinct())
    throw InputError("grid was not built from these samples");

  const StateVector first = start ? std::move(*start) : initial_guess(samples, grid, params);
  SolveOutcome total;
  std::optional<SolverError> failure;
  try {
    SolveOutcome out = newton(first, grid, params, config);
    if (out.converged || !config.fallback)
      return out;
    append(total, out);
    total.solution = out.solution;
    total.final_residual = out.final_residual;
  } catch (const SolverError& e) {
    if (!config.fallback)
      throw;
    failure = e;
  }

  // Flat restart; on failure climb to 10^j alpha, where the jumps are
  // small, then walk alpha back down with warm starts.
  auto attempt = [&](const StateVector& from, const ModelParams& p) -> std::optional<SolveOutcome> {
    try {
      SolveOutcome o = newton(from, grid, p, config);
      append(total, o);
      if (o.converged)
        return o;
      if (!failure) {
        total.solution = o.solution;
        total.final_residual = o.final_residual;
      }
    } catch (const SolverError& e) {
      failure = e;
    }
    return std::nullopt;
  };

  const std::size_t n = samples.n();
  ModelParams p = params;
  std::optional<SolveOutcome> base;
  double base_alpha = params.alpha;
  for (int j = 0; j <= kMaxContinuationDecades && !base; ++j) {
    p.alpha = params.alpha * std::pow(10.0, j);
    base = attempt(flat_guess(samples, grid, p), p);
    base_alpha = p.alpha;
  }

  if (base) {
    StateVector current = base->solution;
    double current_alpha = base_alpha;
    double ratio = 10.0;
    while (current_alpha > params.alpha && ratio > 1.01) {
      p.alpha = std::max(params.alpha, current_alpha / ratio);
      auto next = attempt(warm_start(current, n, current_alpha, p.alpha), p);
      if (next) {
        current = std::move(next->solution);
        current_alpha = p.alpha;
        ratio = std::min(10.0, ratio * ratio);
      } else {
        ratio = std::sqrt(ratio);
      }
    }
    if (current_alpha == params.alpha) {
      total.solution = std::move(current);
      total.final_residual = residual(total.solution, grid, params, config.scheme).inf_norm;
      total.converged = total.final_residual <= config.tol;
      total.strategy = base_alpha == params.alpha ? "flat" : "continuation";
      return total;
    }
  }

  if (failure && total.solution.y2.empty())
    throw *failure;
  if (total.solution.y2.empty())
    total.solution = first;
  total.converged = false;
  total.strategy = "continuation";
  return total;
}

} // namespace ocdens
