#include "app.hpp"

#include "ocdens/error.hpp"

#include <CLI11.hpp>

#include <iostream>
#include <system_error>

namespace {

using namespace ocdens;
using namespace ocdens::app;

struct Flags
{
  std::string input;
  std::string synth;
  std::string alpha;
  std::string w = "zero";
  std::string scheme = "trapezoid";
  std::string bw;
};

void add_data_flags(CLI::App& cmd, RunConfig& cfg, Flags& flags)
{
  cmd.add_option("--input", flags.input, "sample file, one value per line");
  cmd.add_option("--synth", flags.synth, "synthetic truncated normal: normal:MU,SIGMA2,N");
  cmd.add_option("--seed", cfg.seed, "seed for --synth")->capture_default_str();
  cmd.add_option("--margin", cfg.margin, "gap left at each end when rescaling files to (0, 1)")->capture_default_str();
  cmd.add_option("--h", cfg.h, "nominal step size")->capture_default_str();
  cmd.add_option("--out", cfg.out, "output directory")->capture_default_str();
}

void finish(RunConfig& cfg, const Flags& flags)
{
  cfg.input = flags.input;
  if (!flags.synth.empty())
    cfg.synth = parse_synth(flags.synth);
  if (!flags.alpha.empty())
    cfg.alphas = parse_list(flags.alpha);
  if (!flags.bw.empty())
    cfg.bandwidths = parse_list(flags.bw);
  cfg.w = parse_reference(flags.w);
  cfg.scheme = parse_scheme(flags.scheme);
}

} // namespace

int main(int argc, char** argv)
{
  CLI::App cli{"Density estimation by a boundary-value problem with jumps at the samples"};
  cli.set_help_flag("--help", "print this help and exit");
  cli.require_subcommand(1);

  RunConfig cfg;
  Flags flags;

  auto* estimate = cli.add_subcommand("estimate", "solve for the density at each alpha");
  add_data_flags(*estimate, cfg, flags);
  estimate->add_option("--alpha", flags.alpha, "comma-separated smoothness values")->required();
  estimate->add_option("--beta", cfg.beta, "structure parameter")->capture_default_str();
  estimate->add_option("--w", flags.w, "reference log-density: zero | normal:MU,SIGMA2")->capture_default_str();
  estimate->add_option("--scheme", flags.scheme, "euler | trapezoid")->capture_default_str();
  estimate->add_option("--tol", cfg.tol, "residual inf-norm tolerance")->capture_default_str();
  estimate->add_option("--max-iter", cfg.max_iter, "Newton iterations per attempt")->capture_default_str();
  estimate->add_option("--jobs", cfg.jobs, "concurrent solves (cold starts when > 1)")->capture_default_str();
  estimate->add_flag("--diagnose", cfg.diagnose, "print the diagnostics blocks");

  auto* compare = cli.add_subcommand("compare", "Gaussian KDE and histogram baseline");
  add_data_flags(*compare, cfg, flags);
  compare->add_option("--bw", flags.bw, "comma-separated bandwidths in data units");
  compare->add_option("--nbins", cfg.nbins, "histogram bins (default ceil(sqrt(n)))");

  auto* generate = cli.add_subcommand("generate", "write synthetic samples to --out");
  generate->add_option("--synth", flags.synth, "normal:MU,SIGMA2,N")->required();
  generate->add_option("--seed", cfg.seed, "random seed")->capture_default_str();
  generate->add_option("--out", cfg.out, "output file")->required();

  auto* verify = cli.add_subcommand("verify", "run the verification battery");
  verify->add_option("--scheme", flags.scheme, "euler | trapezoid")->capture_default_str();

  try {
    cli.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = cli.exit(e);
    return code == 0 ? ok : bad_input;
  }

  try {
    finish(cfg, flags);
    if (*estimate)
      return run_estimate(cfg, std::cerr);
    if (*compare)
      return run_compare(cfg, std::cerr);
    if (*generate)
      return run_generate(cfg, std::cerr);
    return run_verify(VerifyOptions{cfg.scheme}, std::cout);
  } catch (const InputError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return bad_input;
  } catch (const std::system_error& e) {
    // unwritable output paths and unreadable inputs
    std::cerr << "error: " << e.what() << '\n';
    return bad_input;
  } catch (const SolverError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return not_converged;
  }
}
