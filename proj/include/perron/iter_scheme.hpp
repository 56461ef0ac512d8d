#pragma once

#include <string>
#include <utility>
#include <vector>

#include "perron/matrix.hpp"

namespace perron {

// Outcome of the normalized truncated-exponential iteration.
struct SpectralEstimate {
  int n = 0;            // iteration depth (also the polynomial degree)
  double gamma = 1.0;   // time-step scale inside the polynomial
  DenseMatrix w_n;      // final iterate, unit Frobenius norm
  double s_n = 0.0;     // principal-eigenvalue estimate <A w_n, w_n>
  std::vector<std::pair<int, double>> rayleigh_trace;  // (k, <A M_k, M_k>)
                                                       // for k = 0..n
  std::string init_description;
};

// One normalized step: T_n(gamma A) m / ||T_n(gamma A) m||. Throws
// SingularIterationError when the image norm falls below 1e-300.
DenseMatrix k_step(const DenseMatrix& a, const DenseMatrix& m, int n,
                   double gamma);

// Run n normalized steps from v (v is normalized first). Rejects v with a
// column of norm below 1e-12 or with numerically dependent columns. The
// trace has n+1 entries; s_n is always the plain Frobenius Rayleigh quotient
// of the final iterate.
SpectralEstimate run_iteration(const DenseMatrix& a, const DenseMatrix& v,
                               int n, double gamma,
                               const std::string& init_description = "custom");

// Single truncated polynomial evaluated at time t and normalized:
// T_n(t A) v / ||T_n(t A) v||. This direct form is only usable while
// t * ||A|| stays small: the truncation error of the degree-n polynomial
// grows like (t ||A||)^(n+1) / (n+1)!, so for large t the iterated scheme is
// the only viable route.
DenseMatrix direct_taylor_state(const DenseMatrix& a, const DenseMatrix& v,
                                double t, int n);

// Step-scale heuristic min(1, 2 / ||a||_F), available for callers that want
// to tame matrices of large norm. The estimation commands default to
// gamma = 1, which reproduces the reference trajectories.
double default_gamma(const DenseMatrix& a);

// Richardson-extrapolated eigenvalue estimate. When the top of the spectrum
// is not semisimple the Rayleigh trace converges like s + c/k, so
// 2 s_n - s_{n/2} cancels the leading bias and is typically two orders of
// magnitude closer to s. Falls back to s_n when the trace is too short
// (n < 8) to support the half-depth difference.
double extrapolated_shift(const SpectralEstimate& est);

}  // namespace perron
