#include "perron/dense_core.hpp"

#include <cmath>
#include <string>

#include "perron/kernels.hpp"

namespace perron {

namespace {

constexpr double kOverflowGuard = 1e280;

void check_square(const DenseMatrix& a, const char* op) {
  if (a.rows() != a.cols())
    throw DimensionError(std::string(op) + ": matrix must be square");
}

void check_apply_shapes(const DenseMatrix& a, const DenseMatrix& x,
                        const char* op) {
  check_square(a, op);
  if (a.cols() != x.rows())
    throw DimensionError(std::string(op) +
                         ": operand rows do not match matrix dimension");
}

}  // namespace

double frobenius_inner(const DenseMatrix& a, const DenseMatrix& b) {
  if (!a.same_shape(b))
    throw DimensionError("frobenius_inner: shape mismatch");
  return kernels::pairwise_sum_products(a.data(), b.data(), a.size());
}

double frobenius_norm(const DenseMatrix& a) {
  return std::sqrt(kernels::pairwise_sum_squares(a.data(), a.size()));
}

double column_norm(const DenseMatrix& a, int j) {
  if (j < 0 || j >= a.cols())
    throw DimensionError("column_norm: column index out of range");
  double s = 0.0;
  for (int i = 0; i < a.rows(); ++i) s += a(i, j) * a(i, j);
  return std::sqrt(s);
}

DenseMatrix matmul(const DenseMatrix& a, const DenseMatrix& b) {
  if (a.cols() != b.rows()) throw DimensionError("matmul: shape mismatch");
  DenseMatrix c(a.rows(), b.cols());
  kernels::matmul(a.data(), b.data(), c.data(), a.rows(), a.cols(), b.cols());
  return c;
}

DenseMatrix taylor_apply(const DenseMatrix& a, const DenseMatrix& x, int n,
                         double gamma) {
  check_apply_shapes(a, x, "taylor_apply");
  if (n < 0) throw InvalidParameterError("taylor_apply: n must be >= 0");
  if (!(gamma >= 0.0) || !std::isfinite(gamma))
    throw InvalidParameterError(
        "taylor_apply: gamma must be finite and >= 0");

  DenseMatrix acc = x;   // running sum, term 0 included
  DenseMatrix term = x;  // current term (gamma^k / k!) A^k x
  DenseMatrix next(x.rows(), x.cols());
  for (int k = 1; k <= n; ++k) {
    kernels::matmul(a.data(), term.data(), next.data(), a.rows(), a.cols(),
                    term.cols());
    double scale = gamma / static_cast<double>(k);
    for (std::size_t i = 0; i < next.size(); ++i) next.data()[i] *= scale;
    term = next;
    kernels::add_scaled(acc.data(), term.data(), 1.0, acc.size());

    double peak = kernels::max_abs(term.data(), term.size());
    double apeak = kernels::max_abs(acc.data(), acc.size());
    if (peak > kOverflowGuard || apeak > kOverflowGuard ||
        kernels::any_nonfinite(term.data(), term.size()) ||
        kernels::any_nonfinite(acc.data(), acc.size())) {
      throw NumericOverflowError(
          "taylor_apply: term " + std::to_string(k) +
              " exceeded the overflow guard (1e280); use a smaller gamma or "
              "rescale the matrix",
          k);
    }
  }
  return acc;
}

DenseMatrix shifted_apply(const DenseMatrix& a, double shift,
                          const DenseMatrix& x) {
  check_apply_shapes(a, x, "shifted_apply");
  DenseMatrix out(x.rows(), x.cols());
  kernels::shifted_apply(a.data(), x.data(), shift, out.data(), a.rows(),
                         x.cols());
  return out;
}

DenseMatrix shifted_power_apply(const DenseMatrix& a, double shift, int k,
                                const DenseMatrix& x) {
  check_apply_shapes(a, x, "shifted_power_apply");
  if (k < 0)
    throw InvalidParameterError("shifted_power_apply: power must be >= 0");
  DenseMatrix y = x;
  DenseMatrix next(x.rows(), x.cols());
  for (int i = 0; i < k; ++i) {
    kernels::shifted_apply(a.data(), y.data(), shift, next.data(), a.rows(),
                           y.cols());
    y = next;
    if (kernels::any_nonfinite(y.data(), y.size()))
      throw NumericOverflowError(
          "shifted_power_apply: non-finite entries at power " +
              std::to_string(i + 1),
          i + 1);
  }
  return y;
}

}  // namespace perron
