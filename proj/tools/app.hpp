#pragma once

#include "ocdens/bvp_system.hpp"
#include "ocdens/model.hpp"
#include "ocdens/samples.hpp"

#include <cstdint>
#include <filesystem>
#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace ocdens::app {

enum ExitCode : int
{
  ok = 0,
  check_failed = 1,
  not_converged = 2,
  bad_input = 3
};

struct SynthSpec
{
  double mu = 0.5;
  double sigma2 = 0.01;
  std::size_t n = 100;
};

//! "normal:MU,SIGMA2,N"
SynthSpec parse_synth(std::string_view spec);
//! "zero" or "normal:MU,SIGMA2"
ReferenceFunction parse_reference(std::string_view spec);
//! Comma-separated positive reals.
std::vector<double> parse_list(std::string_view spec);

struct RunConfig
{
  std::filesystem::path input;
  std::optional<SynthSpec> synth;
  std::vector<double> alphas;
  double beta = 1.0;
  ReferenceFunction w;
  double h = 0.0005;
  Scheme scheme = Scheme::trapezoid;
  double margin = 0.05;
  double tol = 1e-10;
  int max_iter = 200;
  std::uint64_t seed = 1;
  std::filesystem::path out = "out";
  int jobs = 1;
  std::vector<double> bandwidths;  // compare: original units
  std::size_t nbins = 0;           // compare: 0 selects ceil(sqrt(n))
  bool diagnose = false;

  void validate() const;
};

//! Raw values in original units from --input or --synth.
RawSamples load_raw(const RunConfig& config);
//! Files are rescaled with the margin; synthetic draws already live on (0, 1).
SampleSet load_set(const RunConfig& config);

//! Writes one density TSV and one diagnostics file per alpha plus
//! manifest.tsv into config.out. Returns not_converged if any solve failed.
int run_estimate(const RunConfig& config, std::ostream& log);

//! KDE TSV per bandwidth and a histogram TSV, in original units.
int run_compare(const RunConfig& config, std::ostream& log);

//! Writes the drawn samples, one per line, to config.out.
int run_generate(const RunConfig& config, std::ostream& log);

using JacobianFn = std::function<SparseMatrix(const StateVector&, const Partition&, const ModelParams&, Scheme)>;

struct VerifyOptions
{
  Scheme scheme = Scheme::trapezoid;
  JacobianFn jacobian = ocdens::jacobian;
};

//! Desk-scale battery: finite-difference Jacobian, trivial case, oracle
//! agreement, identities, and grid-refinement order. One PASS/FAIL line
//! per check; returns check_failed if any fails.
int run_verify(const VerifyOptions& options, std::ostream& log);

} // namespace ocdens::app
