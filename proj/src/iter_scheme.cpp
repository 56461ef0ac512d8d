#include "perron/iter_scheme.hpp"

#include <cmath>
#include <string>

#include "perron/dense_core.hpp"
#include "perron/kernels.hpp"
#include "perron/ortho.hpp"

namespace perron {

namespace {

DenseMatrix normalize_checked(DenseMatrix x, const char* op) {
  double nrm = frobenius_norm(x);
  if (nrm < 1e-300)
    throw SingularIterationError(std::string(op) +
                                 ": iterate norm collapsed below 1e-300");
  kernels::divide(x.data(), nrm, x.size());
  if (kernels::any_nonfinite(x.data(), x.size()))
    throw NumericOverflowError(
        std::string(op) + ": non-finite entries after normalization", -1);
  return x;
}

void check_initialization(const DenseMatrix& a, const DenseMatrix& v) {
  if (a.rows() != a.cols())
    throw DimensionError("run_iteration: matrix must be square");
  if (v.rows() != a.rows())
    throw DimensionError("run_iteration: initialization rows mismatch");
  for (int j = 0; j < v.cols(); ++j)
    if (column_norm(v, j) < 1e-12)
      throw DegenerateInputError(
          "run_iteration: initialization column " + std::to_string(j + 1) +
          " has norm below 1e-12");
  double scale = frobenius_norm(v);
  if (pivoted_orthonormalize(v, 1e-10 * scale).rank < v.cols())
    throw DegenerateInputError(
        "run_iteration: initialization columns are numerically dependent");
}

}  // namespace

DenseMatrix k_step(const DenseMatrix& a, const DenseMatrix& m, int n,
                   double gamma) {
  if (n < 1) throw InvalidParameterError("k_step: n must be >= 1");
  DenseMatrix t = taylor_apply(a, m, n, gamma);
  return normalize_checked(std::move(t), "k_step");
}

SpectralEstimate run_iteration(const DenseMatrix& a, const DenseMatrix& v,
                               int n, double gamma,
                               const std::string& init_description) {
  if (n < 1) throw InvalidParameterError("run_iteration: n must be >= 1");
  if (!(gamma > 0.0) || !std::isfinite(gamma))
    throw InvalidParameterError(
        "run_iteration: gamma must be finite and > 0");
  check_initialization(a, v);

  SpectralEstimate est;
  est.n = n;
  est.gamma = gamma;
  est.init_description = init_description;

  DenseMatrix m = normalize_checked(v, "run_iteration");
  est.rayleigh_trace.reserve(n + 1);
  est.rayleigh_trace.emplace_back(0, frobenius_inner(matmul(a, m), m));
  for (int k = 1; k <= n; ++k) {
    m = k_step(a, m, n, gamma);
    est.rayleigh_trace.emplace_back(k, frobenius_inner(matmul(a, m), m));
  }
  est.w_n = std::move(m);
  est.s_n = est.rayleigh_trace.back().second;
  return est;
}

DenseMatrix direct_taylor_state(const DenseMatrix& a, const DenseMatrix& v,
                                double t, int n) {
  if (!(t >= 0.0) || !std::isfinite(t))
    throw InvalidParameterError(
        "direct_taylor_state: t must be finite and >= 0");
  DenseMatrix x = taylor_apply(a, v, n, t);
  return normalize_checked(std::move(x), "direct_taylor_state");
}

double default_gamma(const DenseMatrix& a) {
  double nrm = frobenius_norm(a);
  if (nrm <= 0.0) return 1.0;
  return std::min(1.0, 2.0 / nrm);
}

double extrapolated_shift(const SpectralEstimate& est) {
  const auto& tr = est.rayleigh_trace;
  if (est.n < 8 || tr.size() != static_cast<std::size_t>(est.n) + 1)
    return est.s_n;
  double s_half = tr[est.n / 2].second;
  double s_hat = 2.0 * est.s_n - s_half;
  return std::isfinite(s_hat) ? s_hat : est.s_n;
}

}  // namespace perron
