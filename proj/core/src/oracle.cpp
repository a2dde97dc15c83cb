#include "ocdens/oracle.hpp"

#include "ocdens/error.hpp"

#include <algorithm>
#include <cmath>

namespace ocdens {

namespace {

constexpr double kArmijo = 1e-4;
constexpr double kMinStep = 1e-20;

//! Everything P needs on one uniform grid, with the objective scaled by
//! n/a so that n = 0 stays well defined:
//!
//!   G(v) = -(1/a) sum m_i v(t_i) + (n/a) log Z(v) + int v'^2 + b^2 int (v - w)^2
struct Problem
{
  std::size_t N = 0;
  double h = 0.0;
  std::vector<double> q;       // trapezoid weights
  std::vector<double> w;       // reference at the nodes
  std::vector<double> counts;  // multiplicity per node
  double n = 0.0;
  double a = 1.0;
  double b2 = 0.0;

  Problem(const SampleSet& samples, const ModelParams& params, std::size_t nodes)
    : N(nodes), h(1.0 / static_cast<double>(nodes - 1)), q(nodes, h), w(nodes), counts(nodes, 0.0),
      n(static_cast<double>(samples.n())), a(params.alpha), b2(params.beta * params.beta)
  {
    q.front() = q.back() = 0.5 * h;
    params.w.check_grid(nodes);
    for (std::size_t k = 0; k < N; ++k)
      w[k] = params.w.at(k, static_cast<double>(k) * h);
    const auto idx = sample_nodes(samples, nodes);
    for (std::size_t i = 0; i < idx.size(); ++i)
      counts[idx[i]] += samples.multiplicity()[i];
  }

  double log_mass(std::span<const double> v) const
  {
    const double top = *std::max_element(v.begin(), v.end());
    // divide once at the end so that constant v gives Z = e^v exactly
    double z = 0.5 * (std::exp(v.front() - top) + std::exp(v.back() - top));
    for (std::size_t k = 1; k + 1 < N; ++k)
      z += std::exp(v[k] - top);
    return top + std::log(z / static_cast<double>(N - 1));
  }

  // probabilities q_k e^{v_k} / Z
  std::vector<double> weights(std::span<const double> v, double lz) const
  {
    std::vector<double> p(N);
    for (std::size_t k = 0; k < N; ++k)
      p[k] = q[k] * std::exp(v[k] - lz);
    return p;
  }

  // G at v, or at v - log Z(v) for the unit form
  double value(std::span<const double> v, OracleForm form) const
  {
    const double lz = log_mass(v);
    const double shift = form == OracleForm::unit ? lz : 0.0;
    double sum = 0.0;
    for (std::size_t k = 0; k < N; ++k) {
      if (counts[k] != 0.0)
        sum -= counts[k] * v[k] / a;
      const double r = v[k] - shift - w[k];
      sum += b2 * q[k] * r * r;
      if (k + 1 < N) {
        const double d = v[k + 1] - v[k];
        sum += d * d / h;
      }
    }
    return sum + n / a * lz;
  }

  std::vector<double> gradient(std::span<const double> v, OracleForm form) const
  {
    const double lz = log_mass(v);
    const auto p = weights(v, lz);
    const double shift = form == OracleForm::unit ? lz : 0.0;
    std::vector<double> g(N);
    double mean_r = 0.0;
    for (std::size_t k = 0; k < N; ++k) {
      const double r = v[k] - shift - w[k];
      g[k] = -counts[k] / a + n / a * p[k] + 2.0 * b2 * q[k] * r;
      mean_r += q[k] * r;
    }
    if (form == OracleForm::unit)
      for (std::size_t k = 0; k < N; ++k)
        g[k] -= 2.0 * b2 * p[k] * mean_r;
    for (std::size_t k = 0; k + 1 < N; ++k) {
      const double d = 2.0 * (v[k + 1] - v[k]) / h;
      g[k] -= d;
      g[k + 1] += d;
    }
    return g;
  }

  //! Solves (S + 2c diag(q)) d = g, S the Hessian of int v'^2.
  std::vector<double> precondition(const std::vector<double>& g, double c) const
  {
    const double off = -2.0 / h;
    std::vector<double> diag(N), rhs = g;
    for (std::size_t k = 0; k < N; ++k)
      diag[k] = (k == 0 || k + 1 == N ? 2.0 / h : 4.0 / h) + 2.0 * c * q[k];
    for (std::size_t k = 1; k < N; ++k) {
      const double m = off / diag[k - 1];
      diag[k] -= m * off;
      rhs[k] -= m * rhs[k - 1];
    }
    std::vector<double> d(N);
    d[N - 1] = rhs[N - 1] / diag[N - 1];
    for (std::size_t k = N - 1; k-- > 0;)
      d[k] = (rhs[k] - off * d[k + 1]) / diag[k];
    return d;
  }
};

double inf_norm(const std::vector<double>& g)
{
  double m = 0.0;
  for (double x : g)
    m = std::max(m, std::abs(x));
  return m;
}

} // namespace

double penalty_alpha(double bvp_alpha)
{
  return 0.5 * bvp_alpha;
}

OracleFailure::OracleFailure(const std::string& what, OracleResult best)
  : std::runtime_error(what), best_(std::move(best))
{}

std::vector<std::size_t> sample_nodes(const SampleSet& samples, std::size_t nodes)
{
  if (nodes < 2)
    throw InputError("oracle grid needs at least two nodes");
  const double cells = static_cast<double>(nodes - 1);
  std::vector<std::size_t> idx;
  idx.reserve(samples.distinct());
  for (double t : samples.points()) {
    const double pos = std::round(t * cells);
    if (std::abs(pos / cells - t) > 1e-9)
      throw InputError("sample " + std::to_string(t) + " is not a node of the oracle grid");
    idx.push_back(static_cast<std::size_t>(pos));
  }
  return idx;
}

double objective_P(std::span<const double> v, const SampleSet& samples, const ModelParams& params)
{
  params.validate();
  if (samples.n() == 0)
    throw InputError("objective needs at least one sample");
  const Problem prob(samples, params, v.size());
  return prob.a / prob.n * prob.value(v, OracleForm::free);
}

std::vector<double> gradient_P(std::span<const double> v, const SampleSet& samples, const ModelParams& params)
{
  params.validate();
  if (samples.n() == 0)
    throw InputError("objective needs at least one sample");
  const Problem prob(samples, params, v.size());
  auto g = prob.gradient(v, OracleForm::free);
  for (auto& x : g)
    x *= prob.a / prob.n;
  return g;
}

OracleResult minimize_P(const SampleSet& samples,
                        const ModelParams& params,
                        std::size_t nodes,
                        double tol,
                        OracleForm form)
{
  params.validate();
  if (nodes < samples.distinct() + 2)
    throw InputError("oracle grid needs at least n + 2 nodes");
  if (!(tol > 0.0))
    throw InputError("tol must be positive");
  const Problem prob(samples, params, nodes);
  const double c = 1.0 + prob.b2 + prob.n / prob.a;

  std::vector<double> u(nodes, 0.0), trial(nodes);
  double value = prob.value(u, form);
  std::vector<double> g = prob.gradient(u, form);
  std::vector<double> trace{value};

  auto finish = [&](long iterations) {
    OracleResult r;
    r.v = u;
    if (form == OracleForm::unit) {
      const double lz = prob.log_mass(u);
      for (auto& x : r.v)
        x -= lz;
    }
    r.iterations = iterations;
    r.grad_norm = inf_norm(g);
    r.trace = trace;
    r.objective = prob.n > 0 ? prob.a / prob.n * prob.value(r.v, OracleForm::free) : value;
    return r;
  };

  for (long it = 0; it < kOracleMaxIterations; ++it) {
    if (inf_norm(g) <= tol)
      return finish(it);
    const auto d = prob.precondition(g, c);
    double slope = 0.0;
    for (std::size_t k = 0; k < nodes; ++k)
      slope += g[k] * d[k];

    double t = 1.0;
    double next = value;
    for (; t >= kMinStep; t *= 0.5) {
      for (std::size_t k = 0; k < nodes; ++k)
        trial[k] = u[k] - t * d[k];
      next = prob.value(trial, form);
      if (next < value && next <= value - kArmijo * t * slope)
        break;
    }
    if (t < kMinStep)
      throw OracleFailure("oracle line search stalled", finish(it));
    u.swap(trial);
    value = next;
    trace.push_back(value);
    g = prob.gradient(u, form);
  }
  throw OracleFailure("oracle iteration cap reached", finish(kOracleMaxIterations));
}

double oracle_gamma(const OracleResult& r, const SampleSet& samples, const ModelParams& params, double bvp_alpha)
{
  const Problem prob(samples, params, r.v.size());
  double integral = 0.0;
  for (std::size_t k = 0; k < prob.N; ++k)
    integral += prob.q[k] * (r.v[k] - prob.w[k]);
  return prob.n / bvp_alpha - prob.b2 * integral;
}

} // namespace ocdens
