#include "perron/cli_runner.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>

#include "perron/cyclic_order.hpp"
#include "perron/dense_core.hpp"
#include "perron/geigenspace.hpp"
#include "perron/iter_scheme.hpp"
#include "perron/oracle.hpp"
#include "perron/refine.hpp"
#include "perron/report_json.hpp"

namespace perron {

namespace {

std::string fmt17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

double pick_gamma(const RunConfig& cfg, const DenseMatrix& a,
                  double command_default) {
  if (cfg.gamma_auto) return default_gamma(a);
  if (cfg.gamma) return *cfg.gamma;
  return command_default;
}

json::Value int_pairs(const std::vector<std::pair<int, double>>& tr) {
  json::Value arr = json::Value::array();
  for (const auto& [k, v] : tr) {
    json::Value row = json::Value::array();
    row.push(json::Value::integer(k)).push(json::Value::number(v));
    arr.push(std::move(row));
  }
  return arr;
}

json::Value double_pairs(const std::vector<std::pair<double, double>>& tr) {
  json::Value arr = json::Value::array();
  for (const auto& [t, v] : tr) {
    json::Value row = json::Value::array();
    row.push(json::Value::number(t)).push(json::Value::number(v));
    arr.push(std::move(row));
  }
  return arr;
}

json::Value int_list(const std::vector<int>& xs) {
  json::Value arr = json::Value::array();
  for (int x : xs) arr.push(json::Value::integer(x));
  return arr;
}

json::Value order_report_value(const CyclicOrderReport& rep) {
  json::Value v = json::Value::object();
  v.set("capital_n", json::Value::integer(rep.capital_n));
  v.set("s_approx", json::Value::number(rep.s_approx));
  v.set("s_probe", json::Value::number(rep.s_probe));
  v.set("dominant_column", json::Value::integer(rep.j));
  v.set("epsilon", json::Value::number(rep.epsilon));
  v.set("grid", int_list(rep.grid));
  json::Value bg = json::Value::array();
  for (const auto& row : rep.beta_grid) {
    json::Value r = json::Value::array();
    for (double b : row) r.push(json::Value::number(b));  // NaN -> null
    bg.push(std::move(r));
  }
  v.set("beta_grid", std::move(bg));
  v.set("row_orders", int_list(rep.row_orders));
  if (rep.detected_nu > 0)
    v.set("detected_nu", json::Value::integer(rep.detected_nu));
  else
    v.set("detected_nu", json::Value::text("undetermined"));
  v.set("stable", json::Value::boolean(rep.stable));
  v.set("confirmation_depths", int_list(rep.confirmation_depths));
  if (rep.detected_nu == 0)
    v.set("suggestion",
          json::Value::text(
              "no stable dichotomy; rerun with a larger capital_n"));
  return v;
}

struct LoadedInputs {
  DenseMatrix a;
  DenseMatrix v;
  bool v_from_file = false;
};

LoadedInputs load_inputs(const RunConfig& cfg) {
  LoadedInputs in;
  in.a = read_matrix(cfg.matrix_path, cfg.format);
  if (!cfg.init_path.empty()) {
    in.v = read_matrix(cfg.init_path, cfg.format);
    in.v_from_file = true;
  } else if (in.a.rows() == in.a.cols()) {
    in.v = DenseMatrix::identity(in.a.rows());
  } else {
    in.v = in.a;  // shape errors surface in the library with a clear message
  }
  return in;
}

json::Value inputs_value(const RunConfig& cfg, const LoadedInputs& in) {
  json::Value v = json::Value::object();
  v.set("matrix", json::Value::text(cfg.matrix_path));
  v.set("rows", json::Value::integer(in.a.rows()));
  v.set("cols", json::Value::integer(in.a.cols()));
  v.set("init",
        json::Value::text(in.v_from_file ? cfg.init_path : "identity"));
  return v;
}

void emit_text(const RunConfig& cfg, std::ostream& out,
               const std::string& text) {
  if (cfg.out_path.empty()) {
    out << text;
    return;
  }
  std::ofstream f(cfg.out_path);
  if (!f) throw IoError("cannot open '" + cfg.out_path + "' for writing");
  f << text;
  if (!f) throw IoError("failed while writing '" + cfg.out_path + "'");
}

json::Value run_estimate(const RunConfig& cfg, const LoadedInputs& in) {
  double gamma = pick_gamma(cfg, in.a, 1.0);
  SpectralEstimate est =
      run_iteration(in.a, in.v, cfg.n, gamma,
                    in.v_from_file ? cfg.init_path : "identity");
  json::Value res = json::Value::object();
  res.set("n", json::Value::integer(est.n));
  res.set("gamma", json::Value::number(est.gamma));
  res.set("s_n", json::Value::number(est.s_n));
  res.set("dominant_column",
          json::Value::integer(select_dominant_column(est.w_n)));
  res.set("rayleigh_trace", int_pairs(est.rayleigh_trace));
  res.set("w_n", json::matrix_value(est.w_n));
  return res;
}

json::Value run_cyclic(const RunConfig& cfg, const LoadedInputs& in) {
  double gamma = pick_gamma(cfg, in.a, 1.0);
  CyclicOrderReport rep = detect_cyclic_order(
      in.a, cfg.capital_n, default_probe_grid(cfg.capital_n), cfg.epsilon,
      gamma);
  return order_report_value(rep);
}

json::Value run_refine(const RunConfig& cfg, const LoadedInputs& in,
                       std::ostream& err) {
  double gamma = pick_gamma(cfg, in.a, 0.2);
  CombinedOutcome out = combined_method(in.a, cfg.capital_n, cfg.n, gamma,
                                        cfg.t_end, cfg.dt, cfg.epsilon);
  json::Value res = json::Value::object();
  res.set("s0", json::Value::number(out.flow.s0));
  res.set("capital_n", json::Value::integer(cfg.capital_n));
  res.set("n", json::Value::integer(cfg.n));
  res.set("dominant_column", json::Value::integer(out.j));
  res.set("detected_nu", json::Value::integer(out.order.detected_nu));
  res.set("gamma", json::Value::number(gamma));
  res.set("dt", json::Value::number(cfg.dt));
  res.set("t_end", json::Value::number(cfg.t_end));
  res.set("s_refined", json::Value::number(out.flow.s_refined));
  res.set("converged", json::Value::boolean(out.flow.converged));
  res.set("trajectory", double_pairs(out.flow.trajectory));

  double rate = flow_rate_estimate(in.a, out.probe_x, out.order.detected_nu,
                                   out.flow.s0, gamma, cfg.n);
  json::Value warnings = json::Value::array();
  if (rate * cfg.dt > 2.0) {
    std::string w = "explicit step looks unstable: rate * dt = " +
                    fmt17(rate * cfg.dt) + " > 2; reduce gamma or dt";
    warnings.push(json::Value::text(w));
    err << "warning: " << w << "\n";
  }
  res.set("warnings", std::move(warnings));
  return res;
}

json::Value run_eigenspace(const RunConfig& cfg, const LoadedInputs& in,
                           std::ostream& err) {
  double s_bar;
  int nu;
  std::string source;
  if (cfg.shift && cfg.nu) {
    s_bar = *cfg.shift;
    nu = *cfg.nu;
    source = "given";
  } else if (cfg.shift || cfg.nu) {
    throw InvalidParameterError(
        "eigenspace: pass both --shift and --nu, or neither");
  } else {
    double gamma = pick_gamma(cfg, in.a, 0.2);
    CombinedOutcome out = combined_method(in.a, cfg.capital_n, cfg.n, gamma,
                                          cfg.t_end, cfg.dt, cfg.epsilon);
    s_bar = out.flow.s_refined;
    nu = out.order.detected_nu;
    source = "refined";
    if (!out.flow.converged)
      err << "warning: the refinement flow had not fully settled; the shift "
             "may be rough\n";
  }

  EigenspaceBasis basis = compute_basis(in.a, s_bar, nu, cfg.n, in.v);
  json::Value res = json::Value::object();
  res.set("s_bar", json::Value::number(basis.s_bar));
  res.set("shift_source", json::Value::text(source));
  res.set("nu", json::Value::integer(basis.nu));
  res.set("n", json::Value::integer(basis.n));
  res.set("dim_estimate", json::Value::integer(basis.dim_estimate));
  res.set("selected_columns", int_list(basis.selected_columns));
  res.set("conditioning", json::Value::number(basis.conditioning));
  res.set("basis", json::matrix_value(basis.basis));
  res.set("b_tilde", json::matrix_value(basis.b_tilde));
  return res;
}

json::Value run_oracle(const LoadedInputs& in) {
  OracleReport rep = analyze(in.a);
  json::Value res = json::Value::object();
  json::Value evs = json::Value::array();
  for (const auto& ev : rep.eigenvalues) {
    json::Value pair = json::Value::array();
    pair.push(json::Value::number(ev.real()))
        .push(json::Value::number(ev.imag()));
    evs.push(std::move(pair));
  }
  res.set("eigenvalues", std::move(evs));
  res.set("s", json::Value::number(rep.s));
  res.set("is_perron_like", json::Value::boolean(rep.is_perron_like));
  res.set("delta", json::Value::number(rep.delta));  // +inf -> null
  res.set("nu_true", json::Value::integer(rep.nu_true));
  res.set("alg_multiplicity", json::Value::integer(rep.alg_multiplicity));
  res.set("ge_basis", json::matrix_value(rep.ge_basis));
  return res;
}

std::string run_trace(const RunConfig& cfg, const LoadedInputs& in) {
  std::ostringstream csv;
  if (cfg.trace_what == "rayleigh") {
    double gamma = pick_gamma(cfg, in.a, 1.0);
    SpectralEstimate est =
        run_iteration(in.a, in.v, cfg.n, gamma,
                      in.v_from_file ? cfg.init_path : "identity");
    csv << "k,rayleigh\n";
    for (const auto& [k, v] : est.rayleigh_trace)
      csv << k << "," << fmt17(v) << "\n";
  } else if (cfg.trace_what == "flow") {
    double gamma = pick_gamma(cfg, in.a, 0.2);
    CombinedOutcome out = combined_method(in.a, cfg.capital_n, cfg.n, gamma,
                                          cfg.t_end, cfg.dt, cfg.epsilon);
    csv << "t,tau\n";
    for (const auto& [t, tau] : out.flow.trajectory)
      csv << fmt17(t) << "," << fmt17(tau) << "\n";
  } else {
    throw InvalidParameterError(
        "trace: --what must be 'rayleigh' or 'flow'");
  }
  return csv.str();
}

}  // namespace

int run_command(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  auto t0 = std::chrono::steady_clock::now();
  try {
    LoadedInputs in = load_inputs(cfg);

    if (cfg.command == "trace") {
      emit_text(cfg, out, run_trace(cfg, in));
      return 0;
    }

    json::Value report = json::Value::object();
    report.set("schema", json::Value::text("perron-eig/1"));
    report.set("command", json::Value::text(cfg.command));
    report.set("inputs", inputs_value(cfg, in));

    json::Value results = json::Value::object();
    if (cfg.command == "estimate") {
      results = run_estimate(cfg, in);
    } else if (cfg.command == "cyclic-order") {
      results = run_cyclic(cfg, in);
    } else if (cfg.command == "refine") {
      results = run_refine(cfg, in, err);
    } else if (cfg.command == "eigenspace") {
      results = run_eigenspace(cfg, in, err);
    } else if (cfg.command == "oracle") {
      results = run_oracle(in);
    } else {
      err << "error: unknown command '" << cfg.command << "'\n";
      return 2;
    }
    report.set("results", std::move(results));

    double ms = std::chrono::duration<double, std::milli>(
                    std::chrono::steady_clock::now() - t0)
                    .count();
    json::Value timing = json::Value::object();
    timing.set("wall_ms", json::Value::number(ms));
    report.set("timing", std::move(timing));

    emit_text(cfg, out, report.dump());
    return 0;
  } catch (const ParseError& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  } catch (const UnsupportedFormatError& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  } catch (const IoError& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  } catch (const InvalidParameterError& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  }
}

}  // namespace perron
