#pragma once

#include "ocdens/bvp_system.hpp"
#include "ocdens/model.hpp"
#include "ocdens/partition.hpp"
#include "ocdens/samples.hpp"

#include <optional>
#include <string>
#include <vector>

namespace ocdens {

struct SolverConfig
{
  double tol = 1e-10;        // residual inf-norm target
  int max_iter = 200;        // Newton steps per attempt
  double damping = 0.5;      // backtracking factor
  double min_step = 1e-8;    // damping floor
  Scheme scheme = Scheme::trapezoid;
  bool fallback = true;      // flat restart with alpha-continuation on failure

  void validate() const;
};

struct StepRecord
{
  double residual;  // inf-norm after the accepted step
  double step;      // accepted damping factor
};

struct SolveOutcome
{
  StateVector solution;
  int iterations = 0;
  double final_residual = 0.0;
  bool converged = false;
  std::vector<StepRecord> step_history;
  std::string strategy;  // "initial", "flat", or "continuation"
};

//! Gaussian-KDE pilot: y2 = log of the (clipped, renormalized) pilot
//! density, y1 its cumulative trapezoid integral ending at exactly 1,
//! y3 centered differences of y2, gamma = n / alpha.
StateVector initial_guess(const SampleSet& samples, const Partition& grid, const ModelParams& params);

//! y2 = 0, y1 = s, y3 = 0, gamma = n / alpha.
StateVector flat_guess(const SampleSet& samples, const Partition& grid, const ModelParams& params);

//! Reuses a converged state at `from_alpha` as the start for `params.alpha`,
//! shifting gamma by n (1/alpha - 1/from_alpha).
StateVector warm_start(const StateVector& previous, std::size_t n, double from_alpha, double to_alpha);

//! One damped Newton run from `start`. Accepted steps strictly decrease the
//! residual inf-norm. Throws SingularSystem on a singular Newton matrix and
//! DivergedIterate when the damping floor is hit with overflowing trials.
SolveOutcome newton(const StateVector& start,
                    const Partition& grid,
                    const ModelParams& params,
                    const SolverConfig& config);

//! Solves the discrete boundary-value problem. Starts from `start` if given,
//! else from the KDE pilot; if that fails and `config.fallback` is set,
//! restarts from the flat guess and, if needed, continues down from
//! 10^j * alpha.
SolveOutcome solve(const SampleSet& samples,
                   const Partition& grid,
                   const ModelParams& params,
                   const SolverConfig& config,
                   std::optional<StateVector> start = std::nullopt);

} // namespace ocdens
