#include "ocdens/bvp_system.hpp"

#include "ocdens/error.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace ocdens {

namespace {

void check_sizes(const StateVector& y, const Partition& grid, const ModelParams& params)
{
  const std::size_t nodes = grid.nodes.size();
  if (y.y1.size() != nodes || y.y2.size() != nodes || y.y3.size() != nodes)
    throw InputError("state has " + std::to_string(y.y2.size()) + " nodes but the grid has " +
                     std::to_string(nodes));
  params.w.check_grid(nodes);
}

double guarded_exp(double y2)
{
  if (!(y2 <= kMaxLogDensity))
    throw DivergedIterate("log-density iterate " + std::to_string(y2) + " exceeds the overflow guard");
  return std::exp(y2);
}

//! Per-node quantities shared by residual and Jacobian evaluation.
struct NodeTerms
{
  std::vector<double> e;   // e^{y2}
  std::vector<double> f;   // beta^2 (y2 - w) + gamma e^{y2}
  std::vector<double> df;  // d f / d y2
};

NodeTerms node_terms(const StateVector& y, const Partition& grid, const ModelParams& params)
{
  const std::size_t nodes = grid.nodes.size();
  const double b2 = params.beta * params.beta;
  NodeTerms t;
  t.e.resize(nodes);
  t.f.resize(nodes);
  t.df.resize(nodes);
  for (std::size_t k = 0; k < nodes; ++k) {
    const double e = guarded_exp(y.y2[k]);
    t.e[k] = e;
    t.f[k] = b2 * (y.y2[k] - params.w.at(k, grid.nodes[k])) + y.gamma * e;
    t.df[k] = b2 + y.gamma * e;
  }
  return t;
}

ResidualReport finish(std::vector<double> values)
{
  ResidualReport r;
  r.inf_norm = 0.0;
  for (double v : values)
    r.inf_norm = std::max(r.inf_norm, std::abs(v));
  if (!std::isfinite(r.inf_norm))
    r.inf_norm = std::numeric_limits<double>::infinity();
  r.values = std::move(values);
  return r;
}

void append_boundary(std::vector<double>& v, const StateVector& y)
{
  const std::size_t L = y.y1.size() - 1;
  v.push_back(y.y1[0]);
  v.push_back(y.y1[L] - 1.0);
  v.push_back(y.y3[0]);
  v.push_back(y.y3[L]);
}

//! Calls sink(row, col, value) for every structural nonzero, rows in
//! ResidualReport order.
template <class Sink>
void for_each_entry(const StateVector& y,
                    const Partition& grid,
                    const ModelParams& params,
                    Scheme scheme,
                    Sink&& sink)
{
  check_sizes(y, grid, params);
  const NodeTerms t = node_terms(y, grid, params);
  const std::size_t L = grid.L();
  const std::size_t g = layout::gamma(L);
  using layout::var;

  for (std::size_t k = 0; k < L; ++k) {
    const double h = grid.steps[k];
    const std::size_t r = 3 * k;
    if (scheme == Scheme::euler) {
      sink(r, var(k, 0), -1.0);
      sink(r, var(k, 1), -h * t.e[k]);
      sink(r, var(k + 1, 0), 1.0);

      sink(r + 1, var(k, 1), -1.0);
      sink(r + 1, var(k, 2), -h);
      sink(r + 1, var(k + 1, 1), 1.0);

      sink(r + 2, var(k, 1), -h * t.df[k]);
      sink(r + 2, var(k, 2), -1.0);
      sink(r + 2, var(k + 1, 2), 1.0);
      sink(r + 2, g, -h * t.e[k]);
    } else {
      const double hh = 0.5 * h;
      sink(r, var(k, 0), -1.0);
      sink(r, var(k, 1), -hh * t.e[k]);
      sink(r, var(k + 1, 0), 1.0);
      sink(r, var(k + 1, 1), -hh * t.e[k + 1]);

      sink(r + 1, var(k, 1), -1.0);
      sink(r + 1, var(k, 2), -hh);
      sink(r + 1, var(k + 1, 1), 1.0);
      sink(r + 1, var(k + 1, 2), -hh);

      sink(r + 2, var(k, 1), -hh * t.df[k]);
      sink(r + 2, var(k, 2), -1.0);
      sink(r + 2, var(k + 1, 1), -hh * t.df[k + 1]);
      sink(r + 2, var(k + 1, 2), 1.0);
      sink(r + 2, g, -hh * (t.e[k] + t.e[k + 1]));
    }
  }
  sink(3 * L, var(0, 0), 1.0);
  sink(3 * L + 1, var(L, 0), 1.0);
  sink(3 * L + 2, var(0, 2), 1.0);
  sink(3 * L + 3, var(L, 2), 1.0);
}

} // namespace

StateVector StateVector::zeros(std::size_t node_count)
{
  StateVector s;
  s.y1.assign(node_count, 0.0);
  s.y2.assign(node_count, 0.0);
  s.y3.assign(node_count, 0.0);
  return s;
}

std::vector<double> StateVector::flatten() const
{
  std::vector<double> x(unknowns());
  for (std::size_t k = 0; k < y2.size(); ++k) {
    x[3 * k] = y1[k];
    x[3 * k + 1] = y2[k];
    x[3 * k + 2] = y3[k];
  }
  x.back() = gamma;
  return x;
}

StateVector StateVector::unflatten(const std::vector<double>& x)
{
  if (x.size() < 4 || (x.size() - 1) % 3 != 0)
    throw InputError("flat state has invalid length " + std::to_string(x.size()));
  const std::size_t nodes = (x.size() - 1) / 3;
  StateVector s = zeros(nodes);
  for (std::size_t k = 0; k < nodes; ++k) {
    s.y1[k] = x[3 * k];
    s.y2[k] = x[3 * k + 1];
    s.y3[k] = x[3 * k + 2];
  }
  s.gamma = x.back();
  return s;
}

double rhs_f(double y2, double t, const ModelParams& params, double gamma, std::size_t node)
{
  const double b2 = params.beta * params.beta;
  return b2 * (y2 - params.w.at(node, t)) + gamma * guarded_exp(y2);
}

ResidualReport residual_euler(const StateVector& y, const Partition& grid, const ModelParams& params)
{
  check_sizes(y, grid, params);
  const NodeTerms t = node_terms(y, grid, params);
  const std::size_t L = grid.L();
  std::vector<double> v;
  v.reserve(3 * L + 4);
  for (std::size_t k = 0; k < L; ++k) {
    const double h = grid.steps[k];
    const double jump = grid.node_weight[k] / params.alpha;
    v.push_back(y.y1[k + 1] - y.y1[k] - h * t.e[k]);
    v.push_back(y.y2[k + 1] - y.y2[k] - h * (y.y3[k] - jump));
    v.push_back(y.y3[k + 1] - y.y3[k] + jump - h * t.f[k]);
  }
  append_boundary(v, y);
  return finish(std::move(v));
}

ResidualReport residual_trapezoid(const StateVector& y, const Partition& grid, const ModelParams& params)
{
  check_sizes(y, grid, params);
  const NodeTerms t = node_terms(y, grid, params);
  const std::size_t L = grid.L();
  std::vector<double> v;
  v.reserve(3 * L + 4);
  for (std::size_t k = 0; k < L; ++k) {
    const double hh = 0.5 * grid.steps[k];
    const double jump = grid.node_weight[k] / params.alpha;
    v.push_back(y.y1[k + 1] - y.y1[k] - hh * (t.e[k] + t.e[k + 1]));
    v.push_back(y.y2[k + 1] - y.y2[k] - hh * (y.y3[k] - jump + y.y3[k + 1]));
    v.push_back(y.y3[k + 1] - y.y3[k] + jump - hh * (t.f[k] + t.f[k + 1]));
  }
  append_boundary(v, y);
  return finish(std::move(v));
}

ResidualReport residual(const StateVector& y, const Partition& grid, const ModelParams& params, Scheme scheme)
{
  return scheme == Scheme::euler ? residual_euler(y, grid, params) : residual_trapezoid(y, grid, params);
}

SparseMatrix::SparseMatrix(std::size_t rows, std::size_t cols, std::vector<Entry> entries)
  : rows_(rows)
  , cols_(cols)
  , entries_(std::move(entries))
{
  std::sort(entries_.begin(), entries_.end(), [](const Entry& a, const Entry& b) {
    return a.row != b.row ? a.row < b.row : a.col < b.col;
  });
}

double SparseMatrix::at(std::size_t row, std::size_t col) const
{
  const auto it = std::lower_bound(entries_.begin(), entries_.end(), Entry{row, col, 0.0},
                                   [](const Entry& a, const Entry& b) {
                                     return a.row != b.row ? a.row < b.row : a.col < b.col;
                                   });
  if (it != entries_.end() && it->row == row && it->col == col)
    return it->value;
  return 0.0;
}

SparseMatrix jacobian(const StateVector& y, const Partition& grid, const ModelParams& params, Scheme scheme)
{
  std::vector<SparseMatrix::Entry> entries;
  entries.reserve(13 * grid.L() + 4);
  for_each_entry(y, grid, params, scheme,
                 [&](std::size_t r, std::size_t c, double v) { entries.push_back({r, c, v}); });
  const std::size_t n = y.unknowns();
  return SparseMatrix(n, n, std::move(entries));
}

std::size_t layout::newton_row(std::size_t residual_row, std::size_t L)
{
  if (residual_row < 3 * L)
    return residual_row + 2;
  switch (residual_row - 3 * L) {
    case 0: return 0;           // y1(0)
    case 1: return 3 * L + 3;   // y1(L) - 1
    case 2: return 1;           // y3(0)
    default: return 3 * L + 2;  // y3(L)
  }
}

void assemble_newton_matrix(const StateVector& y,
                            const Partition& grid,
                            const ModelParams& params,
                            Scheme scheme,
                            BorderedBandMatrix& out)
{
  const std::size_t L = grid.L();
  if (out.size() != 3 * L + 4)
    throw InputError("Newton matrix has the wrong dimension");
  out.set_zero();
  for_each_entry(y, grid, params, scheme, [&](std::size_t r, std::size_t c, double v) {
    out.add(layout::newton_row(r, L), c, v);
  });
}

} // namespace ocdens
