#pragma once

#include "ocdens/model.hpp"
#include "ocdens/newton.hpp"
#include "ocdens/partition.hpp"
#include "ocdens/samples.hpp"

#include <array>
#include <cstddef>
#include <optional>
#include <ostream>
#include <span>
#include <vector>

namespace ocdens {

struct DensityEstimate
{
  std::vector<double> grid;           // unit coordinates
  std::vector<double> f;              // e^{y2}
  std::vector<double> F;              // y1
  std::vector<double> original_grid;  // grid mapped back to data units
  std::vector<double> f_original;     // integrates to 1 in data units
};

//! Trapezoid rule for nodal values on a (possibly non-uniform) grid.
double trapezoid(std::span<const double> nodes, std::span<const double> values);

//! Throws InputError if `sol` did not converge.
DensityEstimate extract_density(const SolveOutcome& sol, const Partition& grid, const SampleSet& samples);

//! gamma - n/alpha + beta^2 * Q(v - w), Q the trapezoid rule on the grid.
double gamma_identity_residual(const SolveOutcome& sol, const Partition& grid, const ModelParams& params, std::size_t n);

struct JumpCheck
{
  //! max over checked samples of |(left - right) - m/alpha| * alpha / m
  double max_relative_deviation = 0.0;
  std::vector<double> jumps;           // measured left - right, NaN if skipped
  std::vector<std::size_t> skipped;    // sample positions whose stage was too short
};

//! Extrapolates y3 linearly to each sample from the two nearest nodes on
//! either side, never across the sample node itself.
JumpCheck jump_check(const SolveOutcome& sol, const Partition& grid, const ModelParams& params);

//! Per-stage max |y3^2 - beta^2 y2^2 - 2 gamma e^{y2} - C_i| for the
//! first integral that exists when w = 0. Throws InputError otherwise.
std::vector<double> order_reduction_residual(const SolveOutcome& sol, const Partition& grid, const ModelParams& params);

struct DiagnosticsReport
{
  double gamma_identity_residual = 0.0;
  double jump_deviation_max = 0.0;
  std::size_t jumps_skipped = 0;
  double normalization_error = 0.0;
  std::optional<std::vector<double>> order_reduction_residuals;
  std::array<double, 4> boundary_errors{};  // |F(0)|, |F(L) - 1|, |y3(0)|, |y3(L)|
};

DiagnosticsReport diagnose(const SolveOutcome& sol, const Partition& grid, const ModelParams& params, std::size_t n);

//! Flat `key value` lines; the per-stage vector is summarized by its max.
void write_report(std::ostream& os, const DiagnosticsReport& report);

} // namespace ocdens
