#pragma once

#include "ocdens/model.hpp"
#include "ocdens/samples.hpp"

#include <cstddef>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace ocdens {

//! Brute-force minimizer of the penalized log-likelihood
//!
//!   P(v) = -(1/n) sum v(t_i) + log int e^v + (a/n) int v'^2 + (a b^2/n) int (v - w)^2
//!
//! on a uniform grid whose nodes include every sample. Integrals use the
//! trapezoid rule, v' forward differences. Here `params.alpha` is the `a`
//! of P itself; see penalty_alpha() for the matching boundary-value alpha.

//! P's smoothness weight whose stationarity conditions produce derivative
//! jumps of 1/bvp_alpha, i.e. bvp_alpha / 2.
double penalty_alpha(double bvp_alpha);

enum class OracleForm
{
  free,  // P as written, no constraint on v
  unit   // P over v with int e^v = 1 (v = u - log int e^u)
};

struct OracleResult
{
  std::vector<double> v;   // nodal values; for `unit`, int e^v = 1
  double objective = 0.0;  // P(v); the scaled objective when n = 0
  long iterations = 0;
  double grad_norm = 0.0;  // inf-norm of the gradient of the scaled objective
  std::vector<double> trace;  // scaled objective at every accepted iterate
};

//! Node index of each sample point. Throws InputError if a sample is not
//! within 1e-9 of a node.
std::vector<std::size_t> sample_nodes(const SampleSet& samples, std::size_t nodes);

//! P(v) with v given on `v.size()` uniform nodes. Needs n >= 1.
double objective_P(std::span<const double> v, const SampleSet& samples, const ModelParams& params);

//! Gradient of objective_P with respect to the nodal values.
std::vector<double> gradient_P(std::span<const double> v, const SampleSet& samples, const ModelParams& params);

//! Raised when descent stops short of `tol`; carries the best iterate.
class OracleFailure : public std::runtime_error
{
public:
  OracleFailure(const std::string& what, OracleResult best);
  const OracleResult& best() const noexcept { return best_; }

private:
  OracleResult best_;
};

inline constexpr long kOracleMaxIterations = 1'000'000;

//! Descent from v = 0 with an H1-preconditioned gradient and Armijo
//! backtracking, until the gradient inf-norm of (n/a) P is <= tol.
//! Throws OracleFailure after kOracleMaxIterations or if the line search
//! can no longer decrease the objective.
OracleResult minimize_P(const SampleSet& samples,
                        const ModelParams& params,
                        std::size_t nodes,
                        double tol,
                        OracleForm form = OracleForm::unit);

//! n / bvp_alpha - beta^2 int (v - w): the multiplier the boundary-value
//! formulation would pair with a normalized v.
double oracle_gamma(const OracleResult& r, const SampleSet& samples, const ModelParams& params, double bvp_alpha);

} // namespace ocdens
