#include "perron/refine.hpp"

#include <cmath>
#include <string>

#include "perron/dense_core.hpp"

namespace perron {

namespace {

void check_flow_args(const DenseMatrix& a, const DenseMatrix& x, int nu) {
  if (a.rows() != a.cols())
    throw DimensionError("refine: matrix must be square");
  if (x.cols() != 1 || x.rows() != a.rows())
    throw DimensionError("refine: x must be an m x 1 column");
  if (nu < 1) throw InvalidParameterError("refine: nu must be >= 1");
  if (frobenius_norm(x) < 1e-300)
    throw DegenerateInputError("refine: probe vector is numerically zero");
}

}  // namespace

double phi(const DenseMatrix& a, double tau, const DenseMatrix& x, int nu) {
  check_flow_args(a, x, nu);
  DenseMatrix y = shifted_power_apply(a, tau, nu, x);
  return frobenius_inner(y, y);
}

double phi_prime(const DenseMatrix& a, double tau, const DenseMatrix& x,
                 int nu) {
  check_flow_args(a, x, nu);
  DenseMatrix y1 = shifted_power_apply(a, tau, nu - 1, x);
  DenseMatrix y2 = shifted_apply(a, tau, y1);
  return -2.0 * nu * frobenius_inner(y1, y2);
}

RefinementResult gradient_flow(const DenseMatrix& a, const DenseMatrix& x,
                               int nu, double s0, double gamma, int n,
                               double t_end, double dt) {
  check_flow_args(a, x, nu);
  if (!(gamma > 0.0) || !std::isfinite(gamma))
    throw InvalidParameterError("gradient_flow: gamma must be > 0");
  if (n < 1) throw InvalidParameterError("gradient_flow: n must be >= 1");
  if (!(dt > 0.0) || !(t_end > 0.0))
    throw InvalidParameterError("gradient_flow: dt and t_end must be > 0");
  long steps = std::llround(t_end / dt);
  if (steps < 1) steps = 1;
  if (steps > 20000000L)
    throw InvalidParameterError(
        "gradient_flow: more than 2e7 steps requested; coarsen dt");

  const double c = std::pow(gamma * n, 2.0 * (nu - 1));
  const double bound = frobenius_norm(a) + 1.0;
  const long stride = std::max(1L, std::lround(1.0 / dt));

  RefinementResult res;
  res.s0 = s0;
  res.nu = nu;
  res.n = n;
  res.gamma = gamma;
  res.dt = dt;
  res.t_end = t_end;
  res.trajectory.emplace_back(0.0, s0);

  auto vel = [&](double tau) { return -c * phi_prime(a, tau, x, nu); };

  double tau = s0;
  for (long i = 1; i <= steps; ++i) {
    double k1 = vel(tau);
    double k2 = vel(tau + 0.5 * dt * k1);
    double k3 = vel(tau + 0.5 * dt * k2);
    double k4 = vel(tau + dt * k3);
    tau += (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    if (!std::isfinite(tau) || std::fabs(tau) > bound)
      throw DivergenceError(
          "gradient_flow: trajectory left [-(||A||+1), ||A||+1] at t = " +
          std::to_string(i * dt) + "; reduce gamma or dt");
    if (i % stride == 0 || i == steps)
      res.trajectory.emplace_back(i * dt, tau);
  }

  res.s_refined = tau;
  res.converged = std::fabs(vel(tau)) < 1e-14;
  return res;
}

double flow_rate_estimate(const DenseMatrix& a, const DenseMatrix& x, int nu,
                          double s0, double gamma, int n) {
  check_flow_args(a, x, nu);
  double h = 1e-5 * std::max(1.0, std::fabs(s0));
  double d2 = (phi_prime(a, s0 + h, x, nu) - phi_prime(a, s0 - h, x, nu)) /
              (2.0 * h);
  return std::pow(gamma * n, 2.0 * (nu - 1)) * std::fabs(d2);
}

double stable_flow_gamma(const DenseMatrix& a, const DenseMatrix& x, int nu,
                         double s0, int n, double dt) {
  if (nu <= 1) return 0.2;
  if (n < 1 || !(dt > 0.0))
    throw InvalidParameterError(
        "stable_flow_gamma: n must be >= 1 and dt positive");
  double curv = flow_rate_estimate(a, x, nu, s0, 1.0, 1);
  if (!(curv > 0.0)) return 0.2;
  double target = 0.5 / (curv * dt);
  double gamma = std::pow(target, 1.0 / (2.0 * (nu - 1))) / n;
  return std::min(1.0, std::max(1e-3, gamma));
}

CombinedOutcome combined_method(const DenseMatrix& a, int capital_n, int n,
                                double gamma, double t_end, double dt,
                                double epsilon, const std::vector<int>& grid) {
  if (capital_n <= n)
    throw InvalidParameterError(
        "combined_method: capital_n must exceed the probe depth n");

  CombinedOutcome out;
  out.deep = run_iteration(a, DenseMatrix::identity(a.rows()), capital_n, 1.0,
                           "identity");
  out.j = select_dominant_column(out.deep.w_n);
  const std::vector<int> g =
      grid.empty() ? default_probe_grid(capital_n) : grid;
  out.order = detect_cyclic_order_from(a, out.deep, g, epsilon);
  if (out.order.detected_nu == 0)
    throw CyclicOrderUnresolvedError(
        "combined_method: cyclic order undetermined at N = " +
        std::to_string(capital_n) + "; rerun with a larger N");

  SpectralEstimate shallow = run_iteration(
      a, DenseMatrix::identity(a.rows()), n, 1.0, "identity");
  out.probe_x = shallow.w_n.column(out.j - 1);
  out.flow = gradient_flow(a, out.probe_x, out.order.detected_nu, out.deep.s_n,
                           gamma, n, t_end, dt);
  return out;
}

}  // namespace perron
