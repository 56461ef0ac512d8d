#pragma once

#include <utility>
#include <vector>

#include "perron/cyclic_order.hpp"
#include "perron/iter_scheme.hpp"
#include "perron/matrix.hpp"

namespace perron {

// Outcome of the gradient-flow refinement of a principal-eigenvalue
// estimate.
struct RefinementResult {
  double s0 = 0.0;    // starting estimate
  int nu = 0;         // cyclic order used in the objective
  int n = 0;          // iteration depth that produced the probe vector
  double gamma = 0.0; // flow step scale
  double dt = 0.0;    // RK4 time step
  double t_end = 0.0; // requested flow horizon
  std::vector<std::pair<double, double>> trajectory;  // (t, tau) samples,
                                                      // first is (0, s0)
  double s_refined = 0.0;  // tau at the end of the flow
  bool converged = false;  // |velocity| < 1e-14 at the end
};

// phi(tau) = ||(A - tau I)^nu x||^2 for a column vector x.
double phi(const DenseMatrix& a, double tau, const DenseMatrix& x, int nu);

// phi'(tau) = -2 nu <(A - tau I)^(nu-1) x, (A - tau I)^nu x>.
double phi_prime(const DenseMatrix& a, double tau, const DenseMatrix& x,
                 int nu);

// Integrate d tau / dt = -(gamma n)^(2(nu-1)) phi'(tau) from tau(0) = s0 by
// classical fixed-step RK4. Samples are recorded every max(1, round(1/dt))
// steps plus the final point. Throws DivergenceError if tau leaves
// [-(||A||_F + 1), ||A||_F + 1] or goes non-finite.
RefinementResult gradient_flow(const DenseMatrix& a, const DenseMatrix& x,
                               int nu, double s0, double gamma, int n,
                               double t_end, double dt);

// Velocity scale (gamma n)^(2(nu-1)) |phi''(s0)| (second derivative by
// centered differences). When multiplied by dt this approximates the
// stiffness of the explicit integrator; values above ~2 mean the step will
// not be stable.
double flow_rate_estimate(const DenseMatrix& a, const DenseMatrix& x, int nu,
                          double s0, double gamma, int n);

// Step scale for the refinement flow chosen so the explicit integrator is
// comfortably stable: (gamma n)^(2(nu-1)) |phi''(s0)| dt ~ 0.5, clamped to
// [1e-3, 1]. Falls back to 0.2 for nu = 1 (the flow is then never stiff at
// the default dt) or when the curvature probe is degenerate.
double stable_flow_gamma(const DenseMatrix& a, const DenseMatrix& x, int nu,
                         double s0, int n, double dt);

// End-to-end pipeline: deep run at capital_n (step scale 1) for s0 and the
// dominant column j, cyclic-order detection, then a gradient flow started
// from column j of a depth-n iterate. Throws CyclicOrderUnresolvedError when
// detection comes back undetermined.
struct CombinedOutcome {
  SpectralEstimate deep;     // the capital_n run
  CyclicOrderReport order;   // detection report (determined)
  int j = 0;                 // dominant column (1-based)
  DenseMatrix probe_x;       // column j of the depth-n iterate (flow input)
  RefinementResult flow;     // the refinement
};

// An empty grid selects default_probe_grid(capital_n).
CombinedOutcome combined_method(const DenseMatrix& a, int capital_n, int n,
                                double gamma, double t_end, double dt,
                                double epsilon = 0.1,
                                const std::vector<int>& grid = {});

}  // namespace perron
