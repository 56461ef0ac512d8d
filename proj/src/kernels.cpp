#include "perron/kernels.hpp"

#include <cmath>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace perron {
namespace kernels {

namespace {

// Work sizes below these thresholds run serially even through the
// dispatching entry points; the fork/join overhead dominates otherwise.
constexpr long kMatmulParallelFlops = 64L * 64L * 64L;
constexpr std::size_t kElementwiseParallelLen = 1u << 15;

double pairwise_products(const double* a, const double* b, std::size_t lo,
                         std::size_t hi) {
  if (hi - lo <= 8) {
    double s = 0.0;
    for (std::size_t i = lo; i < hi; ++i) s += a[i] * b[i];
    return s;
  }
  std::size_t mid = lo + (hi - lo) / 2;
  return pairwise_products(a, b, lo, mid) + pairwise_products(a, b, mid, hi);
}

}  // namespace

namespace serial {

void matmul(const double* a, const double* b, double* c, int m, int k, int n) {
  for (int i = 0; i < m; ++i) {
    const double* arow = a + static_cast<std::size_t>(i) * k;
    double* crow = c + static_cast<std::size_t>(i) * n;
    for (int j = 0; j < n; ++j) crow[j] = 0.0;
    for (int p = 0; p < k; ++p) {
      double aip = arow[p];
      const double* brow = b + static_cast<std::size_t>(p) * n;
      for (int j = 0; j < n; ++j) crow[j] += aip * brow[j];
    }
  }
}

void add_scaled(double* y, const double* x, double s, std::size_t len) {
  for (std::size_t i = 0; i < len; ++i) y[i] += s * x[i];
}

void divide(double* y, double d, std::size_t len) {
  for (std::size_t i = 0; i < len; ++i) y[i] /= d;
}

void shifted_apply(const double* a, const double* x, double shift, double* out,
                   int m, int n) {
  matmul(a, x, out, m, m, n);
  for (int i = 0; i < m; ++i) {
    const double* xrow = x + static_cast<std::size_t>(i) * n;
    double* orow = out + static_cast<std::size_t>(i) * n;
    for (int j = 0; j < n; ++j) orow[j] -= shift * xrow[j];
  }
}

double max_abs(const double* a, std::size_t len) {
  double m = 0.0;
  for (std::size_t i = 0; i < len; ++i) {
    double v = std::fabs(a[i]);
    if (v > m) m = v;
  }
  return m;
}

}  // namespace serial

namespace omp {

// Rows are distributed across threads; each output row is computed by the
// same loop body as the serial kernel, so values match bit-for-bit.
void matmul(const double* a, const double* b, double* c, int m, int k, int n) {
#ifdef _OPENMP
#pragma omp parallel for schedule(static)
#endif
  for (int i = 0; i < m; ++i) {
    const double* arow = a + static_cast<std::size_t>(i) * k;
    double* crow = c + static_cast<std::size_t>(i) * n;
    for (int j = 0; j < n; ++j) crow[j] = 0.0;
    for (int p = 0; p < k; ++p) {
      double aip = arow[p];
      const double* brow = b + static_cast<std::size_t>(p) * n;
      for (int j = 0; j < n; ++j) crow[j] += aip * brow[j];
    }
  }
}

void add_scaled(double* y, const double* x, double s, std::size_t len) {
  long n = static_cast<long>(len);
#ifdef _OPENMP
#pragma omp parallel for schedule(static)
#endif
  for (long i = 0; i < n; ++i) y[i] += s * x[i];
}

void divide(double* y, double d, std::size_t len) {
  long n = static_cast<long>(len);
#ifdef _OPENMP
#pragma omp parallel for schedule(static)
#endif
  for (long i = 0; i < n; ++i) y[i] /= d;
}

void shifted_apply(const double* a, const double* x, double shift, double* out,
                   int m, int n) {
  matmul(a, x, out, m, m, n);
  long rows = m;
#ifdef _OPENMP
#pragma omp parallel for schedule(static)
#endif
  for (long i = 0; i < rows; ++i) {
    const double* xrow = x + static_cast<std::size_t>(i) * n;
    double* orow = out + static_cast<std::size_t>(i) * n;
    for (int j = 0; j < n; ++j) orow[j] -= shift * xrow[j];
  }
}

double max_abs(const double* a, std::size_t len) {
  double m = 0.0;
  long n = static_cast<long>(len);
#ifdef _OPENMP
#pragma omp parallel for schedule(static) reduction(max : m)
#endif
  for (long i = 0; i < n; ++i) {
    double v = std::fabs(a[i]);
    if (v > m) m = v;
  }
  return m;
}

}  // namespace omp

void matmul(const double* a, const double* b, double* c, int m, int k, int n) {
  if (static_cast<long>(m) * k * n >= kMatmulParallelFlops)
    omp::matmul(a, b, c, m, k, n);
  else
    serial::matmul(a, b, c, m, k, n);
}

void add_scaled(double* y, const double* x, double s, std::size_t len) {
  if (len >= kElementwiseParallelLen)
    omp::add_scaled(y, x, s, len);
  else
    serial::add_scaled(y, x, s, len);
}

void divide(double* y, double d, std::size_t len) {
  if (len >= kElementwiseParallelLen)
    omp::divide(y, d, len);
  else
    serial::divide(y, d, len);
}

void shifted_apply(const double* a, const double* x, double shift, double* out,
                   int m, int n) {
  if (static_cast<long>(m) * m * n >= kMatmulParallelFlops)
    omp::shifted_apply(a, x, shift, out, m, n);
  else
    serial::shifted_apply(a, x, shift, out, m, n);
}

double max_abs(const double* a, std::size_t len) {
  if (len >= kElementwiseParallelLen) return omp::max_abs(a, len);
  return serial::max_abs(a, len);
}

double pairwise_sum_products(const double* a, const double* b,
                             std::size_t len) {
  if (len == 0) return 0.0;
  return pairwise_products(a, b, 0, len);
}

double pairwise_sum_squares(const double* a, std::size_t len) {
  if (len == 0) return 0.0;
  return pairwise_products(a, a, 0, len);
}

bool any_nonfinite(const double* a, std::size_t len) {
  for (std::size_t i = 0; i < len; ++i)
    if (!std::isfinite(a[i])) return true;
  return false;
}

}  // namespace kernels
}  // namespace perron
