#include <cstdlib>
#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "perron/cli_runner.hpp"

namespace {

perron::MatrixFormat parse_format(const std::string& s) {
  if (s == "mm") return perron::MatrixFormat::kMatrixMarket;
  if (s == "csv") return perron::MatrixFormat::kCsv;
  return perron::MatrixFormat::kAuto;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "perron-eig: principal eigenvalue, cyclic order, and principal "
      "generalized eigenspace of Perron-like matrices via normalized "
      "truncated-exponential iterations"};
  app.require_subcommand(1);

  perron::RunConfig cfg;
  std::string gamma_str;
  std::string format_str = "auto";
  double shift_val = 0.0;
  int nu_val = 0;

  auto add_common = [&](CLI::App* sub, bool with_init) {
    sub->add_option("--matrix", cfg.matrix_path,
                    "matrix file (Matrix Market array or CSV)")
        ->required();
    if (with_init)
      sub->add_option("--init", cfg.init_path,
                      "initialization matrix V (default: identity)");
    sub->add_option("--format", format_str, "input format")
        ->check(CLI::IsMember({"auto", "mm", "csv"}))
        ->default_str("auto");
    sub->add_option("--out", cfg.out_path,
                    "write the output file here instead of stdout");
    sub->add_option("--gamma", gamma_str,
                    "step scale: a number, or 'auto' for min(1, 2/||A||)");
  };

  CLI::App* est = app.add_subcommand(
      "estimate", "principal-eigenvalue estimate from a depth-n iteration");
  add_common(est, true);
  est->add_option("--n", cfg.n, "iteration depth")->check(CLI::PositiveNumber);

  CLI::App* cyc = app.add_subcommand(
      "cyclic-order", "detect the cyclic order of the dominant eigenvalue");
  add_common(cyc, false);
  cyc->add_option("--capital-n,-N", cfg.capital_n, "deep-run depth")
      ->check(CLI::PositiveNumber);
  cyc->add_option("--epsilon", cfg.epsilon, "dichotomy threshold");

  CLI::App* ref = app.add_subcommand(
      "refine", "gradient-flow refinement of the dominant eigenvalue");
  add_common(ref, false);
  ref->add_option("--capital-n,-N", cfg.capital_n, "deep-run depth")
      ->check(CLI::PositiveNumber);
  ref->add_option("--n", cfg.n, "probe iteration depth")
      ->check(CLI::PositiveNumber);
  ref->add_option("--epsilon", cfg.epsilon, "dichotomy threshold");
  ref->add_option("--dt", cfg.dt, "RK4 time step");
  ref->add_option("--t-end", cfg.t_end, "flow horizon");

  CLI::App* eig = app.add_subcommand(
      "eigenspace", "extract a principal generalized eigenspace basis");
  add_common(eig, true);
  eig->add_option("--capital-n,-N", cfg.capital_n, "deep-run depth")
      ->check(CLI::PositiveNumber);
  eig->add_option("--n", cfg.n, "iteration depth")->check(CLI::PositiveNumber);
  eig->add_option("--epsilon", cfg.epsilon, "dichotomy threshold");
  eig->add_option("--dt", cfg.dt, "RK4 time step");
  eig->add_option("--t-end", cfg.t_end, "flow horizon");
  eig->add_option("--shift", shift_val,
                  "use this shift instead of deriving one (requires --nu)");
  eig->add_option("--nu", nu_val,
                  "use this cyclic order instead of detecting it");

  CLI::App* orc = app.add_subcommand(
      "oracle", "brute-force reference analysis (small matrices)");
  add_common(orc, false);

  CLI::App* trc = app.add_subcommand("trace", "CSV trace of a run");
  add_common(trc, true);
  trc->add_option("--what", cfg.trace_what, "rayleigh | flow")
      ->check(CLI::IsMember({"rayleigh", "flow"}));
  trc->add_option("--n", cfg.n, "iteration depth")->check(CLI::PositiveNumber);
  trc->add_option("--capital-n,-N", cfg.capital_n, "deep-run depth (flow)")
      ->check(CLI::PositiveNumber);
  trc->add_option("--dt", cfg.dt, "RK4 time step (flow)");
  trc->add_option("--t-end", cfg.t_end, "flow horizon (flow)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);  // --help
    app.exit(e);
    return 2;
  }

  cfg.command = app.get_subcommands().front()->get_name();
  cfg.format = parse_format(format_str);
  if (!gamma_str.empty()) {
    if (gamma_str == "auto") {
      cfg.gamma_auto = true;
    } else {
      char* end = nullptr;
      double g = std::strtod(gamma_str.c_str(), &end);
      if (end == gamma_str.c_str() || *end != '\0') {
        std::cerr << "error: --gamma must be a number or 'auto'\n";
        return 2;
      }
      cfg.gamma = g;
    }
  }
  if (eig->count("--shift")) cfg.shift = shift_val;
  if (eig->count("--nu")) cfg.nu = nu_val;

  return perron::run_command(cfg, std::cout, std::cerr);
}
