#pragma once

#include <optional>
#include <ostream>
#include <string>

#include "perron/matrix_io.hpp"

namespace perron {

// Parsed command-line request. Unset optionals fall back to per-command
// defaults inside run_command.
struct RunConfig {
  std::string command;      // estimate | cyclic-order | refine | eigenspace |
                            // oracle | trace
  std::string matrix_path;
  std::string init_path;    // optional initialization matrix V
  int n = 20;               // iteration depth
  int capital_n = 100;      // deep-run depth
  std::optional<double> gamma;  // step scale; default 1.0 for the iteration
                                // commands, 0.2 for the gradient flow
  bool gamma_auto = false;  // use the min(1, 2/||A||) heuristic instead
  double epsilon = 0.1;     // dichotomy threshold
  double dt = 0.01;         // RK4 step
  double t_end = 100.0;     // flow horizon
  std::optional<double> shift;  // eigenspace: explicit s-bar
  std::optional<int> nu;        // eigenspace: explicit cyclic order
  std::string trace_what = "rayleigh";  // trace: rayleigh | flow
  std::string out_path;     // empty = stdout
  MatrixFormat format = MatrixFormat::kAuto;
};

// Execute one command: reads inputs, runs the requested pipeline, writes a
// JSON report (or a CSV trace) to out_path or `out`, and returns the process
// exit code: 0 on success, 2 for usage/file/format problems, 1 for
// numerical or domain failures. Diagnostics go to `err`.
int run_command(const RunConfig& cfg, std::ostream& out, std::ostream& err);

}  // namespace perron
