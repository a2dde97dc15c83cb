#include "ocdens/diagnostics.hpp"

#include "ocdens/error.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace ocdens {

namespace {

void require_converged(const SolveOutcome& sol)
{
  if (!sol.converged)
    throw InputError("solution did not converge");
}

//! One-sided views of the discrete derivative. At a data node y3 stores
//! the left limit; the right limit is that minus the jump.
struct Slopes
{
  const StateVector& y;
  const Partition& grid;
  double alpha;

  double jump(std::size_t k) const { return grid.node_weight[k] / alpha; }
  double right(std::size_t k) const { return y.y3[k] - jump(k); }
  double left(std::size_t k) const { return y.y3[k]; }

  // Linear extrapolation to node k from the two nodes before it,
  // using stage-interior (right-limit) values. Requires k >= 2.
  double from_left(std::size_t k) const
  {
    const auto& s = grid.nodes;
    const double a = right(k - 2);
    const double b = right(k - 1);
    return b + (b - a) / (s[k - 1] - s[k - 2]) * (s[k] - s[k - 1]);
  }

  // Same from the two nodes after k; node k+2 may be the next sample,
  // whose stored value is the left limit and so belongs to this stage.
  double from_right(std::size_t k) const
  {
    const auto& s = grid.nodes;
    const double a = y.y3[k + 1];
    const double b = left(k + 2);
    return a - (b - a) / (s[k + 2] - s[k + 1]) * (s[k + 1] - s[k]);
  }
};

std::size_t stage_start(const Partition& grid, std::size_t j)
{
  return j == 0 ? 0 : grid.data_indices[j - 1];
}

std::size_t stage_end(const Partition& grid, std::size_t j)
{
  return j < grid.data_indices.size() ? grid.data_indices[j] : grid.L();
}

} // namespace

double trapezoid(std::span<const double> nodes, std::span<const double> values)
{
  if (nodes.size() != values.size())
    throw InputError("trapezoid: size mismatch");
  double sum = 0.0;
  for (std::size_t k = 0; k + 1 < nodes.size(); ++k)
    sum += 0.5 * (nodes[k + 1] - nodes[k]) * (values[k] + values[k + 1]);
  return sum;
}

DensityEstimate extract_density(const SolveOutcome& sol, const Partition& grid, const SampleSet& samples)
{
  require_converged(sol);
  const auto& y = sol.solution;
  const std::size_t nodes = y.node_count();
  if (grid.nodes.size() != nodes)
    throw InputError("solution does not match the grid");
  const UnitMap& map = samples.to_unit();
  DensityEstimate d;
  d.grid = grid.nodes;
  d.F = y.y1;
  d.f.resize(nodes);
  d.original_grid.resize(nodes);
  d.f_original.resize(nodes);
  for (std::size_t k = 0; k < nodes; ++k) {
    d.f[k] = std::exp(y.y2[k]);
    d.original_grid[k] = map.to_original(grid.nodes[k]);
    d.f_original[k] = d.f[k] * map.scale;
  }
  return d;
}

double gamma_identity_residual(const SolveOutcome& sol, const Partition& grid, const ModelParams& params, std::size_t n)
{
  require_converged(sol);
  const auto& y = sol.solution;
  std::vector<double> diff(y.node_count());
  for (std::size_t k = 0; k < diff.size(); ++k)
    diff[k] = y.y2[k] - params.w.at(k, grid.nodes[k]);
  return y.gamma - static_cast<double>(n) / params.alpha +
         params.beta * params.beta * trapezoid(grid.nodes, diff);
}

JumpCheck jump_check(const SolveOutcome& sol, const Partition& grid, const ModelParams& params)
{
  require_converged(sol);
  const Slopes slopes{sol.solution, grid, params.alpha};
  JumpCheck out;
  const std::size_t count = grid.data_indices.size();
  out.jumps.assign(count, std::numeric_limits<double>::quiet_NaN());
  for (std::size_t j = 0; j < count; ++j) {
    const std::size_t k = grid.data_indices[j];
    if (k < stage_start(grid, j) + 2 || k + 2 > stage_end(grid, j + 1)) {
      out.skipped.push_back(j);
      continue;
    }
    const double measured = slopes.from_left(k) - slopes.from_right(k);
    const double expected = slopes.jump(k);
    out.jumps[j] = measured;
    out.max_relative_deviation = std::max(out.max_relative_deviation, std::abs(measured - expected) / expected);
  }
  return out;
}

std::vector<double> order_reduction_residual(const SolveOutcome& sol, const Partition& grid, const ModelParams& params)
{
  if (!params.w.is_zero())
    throw InputError("order reduction requires w = 0");
  require_converged(sol);
  const auto& y = sol.solution;
  const Slopes slopes{y, grid, params.alpha};
  const double b2 = params.beta * params.beta;
  auto energy = [&](std::size_t k, double slope) {
    return slope * slope - b2 * y.y2[k] * y.y2[k] - 2.0 * y.gamma * std::exp(y.y2[k]);
  };

  const std::size_t count = grid.data_indices.size();
  std::vector<double> out(count + 1, 0.0);
  double c = -b2 * y.y2[0] * y.y2[0] - 2.0 * y.gamma * std::exp(y.y2[0]);
  for (std::size_t i = 0; i <= count; ++i) {
    const std::size_t a = stage_start(grid, i);
    const std::size_t b = stage_end(grid, i);
    if (i > 0) {
      const double m = slopes.jump(a);
      const double before = a >= stage_start(grid, i - 1) + 2 ? slopes.from_left(a) : slopes.left(a);
      c += -2.0 * m * before + m * m;
    }
    double worst = 0.0;
    for (std::size_t k = a; k <= b; ++k) {
      const double slope = k == a ? slopes.right(k) : slopes.left(k);
      worst = std::max(worst, std::abs(energy(k, slope) - c));
    }
    out[i] = worst;
  }
  return out;
}

DiagnosticsReport diagnose(const SolveOutcome& sol, const Partition& grid, const ModelParams& params, std::size_t n)
{
  require_converged(sol);
  const auto& y = sol.solution;
  const std::size_t L = grid.L();
  DiagnosticsReport r;
  r.gamma_identity_residual = gamma_identity_residual(sol, grid, params, n);
  const JumpCheck jc = jump_check(sol, grid, params);
  r.jump_deviation_max = jc.max_relative_deviation;
  r.jumps_skipped = jc.skipped.size();

  std::vector<double> f(y.node_count());
  for (std::size_t k = 0; k < f.size(); ++k)
    f[k] = std::exp(y.y2[k]);
  r.normalization_error = std::abs(trapezoid(grid.nodes, f) - 1.0);
  if (params.w.is_zero())
    r.order_reduction_residuals = order_reduction_residual(sol, grid, params);
  r.boundary_errors = {std::abs(y.y1[0]), std::abs(y.y1[L] - 1.0), std::abs(y.y3[0]), std::abs(y.y3[L])};
  return r;
}

void write_report(std::ostream& os, const DiagnosticsReport& r)
{
  const auto old = os.precision(17);
  os << "gamma_identity_residual " << r.gamma_identity_residual << '\n'
     << "jump_deviation_max " << r.jump_deviation_max << '\n'
     << "jumps_skipped " << r.jumps_skipped << '\n'
     << "normalization_error " << r.normalization_error << '\n';
  if (r.order_reduction_residuals) {
    const auto& v = *r.order_reduction_residuals;
    os << "order_reduction_stages " << v.size() << '\n'
       << "order_reduction_max " << (v.empty() ? 0.0 : *std::max_element(v.begin(), v.end())) << '\n';
  }
  os << "boundary_F0 " << r.boundary_errors[0] << '\n'
     << "boundary_FL_minus_1 " << r.boundary_errors[1] << '\n'
     << "boundary_vdot0 " << r.boundary_errors[2] << '\n'
     << "boundary_vdotL " << r.boundary_errors[3] << '\n';
  os.precision(old);
}

} // namespace ocdens
