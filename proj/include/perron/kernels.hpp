#pragma once

#include <cstddef>

namespace perron {
namespace kernels {

// Low-level array kernels. Each kernel exists twice: a plain serial
// reference implementation and an OpenMP variant. The parallel variants are
// constructed so that every output element is computed by exactly the same
// sequence of floating-point operations as in the serial code (rows and
// elements are distributed across threads, but no reduction order changes),
// so results are bitwise identical for any thread count. The dispatching
// entry points pick the OpenMP variant when the problem is large enough to
// amortize the fork/join cost.

namespace serial {

// c[m x n] = a[m x k] * b[k x n], row-major.
void matmul(const double* a, const double* b, double* c, int m, int k, int n);

// y += s * x over len entries.
void add_scaled(double* y, const double* x, double s, std::size_t len);

// y = a - shift * y  elementwise is NOT what we need; kept minimal:
// y /= d over len entries.
void divide(double* y, double d, std::size_t len);

// out = a * x - shift * x   (a is m x m, x is m x n): fused shifted apply.
void shifted_apply(const double* a, const double* x, double shift, double* out,
                   int m, int n);

double max_abs(const double* a, std::size_t len);

}  // namespace serial

namespace omp {

void matmul(const double* a, const double* b, double* c, int m, int k, int n);
void add_scaled(double* y, const double* x, double s, std::size_t len);
void divide(double* y, double d, std::size_t len);
void shifted_apply(const double* a, const double* x, double shift, double* out,
                   int m, int n);
double max_abs(const double* a, std::size_t len);

}  // namespace omp

// Dispatching entry points (OpenMP above a size threshold, serial below).
void matmul(const double* a, const double* b, double* c, int m, int k, int n);
void add_scaled(double* y, const double* x, double s, std::size_t len);
void divide(double* y, double d, std::size_t len);
void shifted_apply(const double* a, const double* x, double shift, double* out,
                   int m, int n);
double max_abs(const double* a, std::size_t len);

// Fixed-tree pairwise reductions. These are kept serial on purpose: the
// reduction tree (binary split down to 8-element leaves) defines the result
// bit-for-bit, which golden-value tests rely on, and the matrices involved
// are far too small for a parallel reduction to pay off.
double pairwise_sum_products(const double* a, const double* b,
                             std::size_t len);
double pairwise_sum_squares(const double* a, std::size_t len);

// True when some entry is NaN or infinite.
bool any_nonfinite(const double* a, std::size_t len);

}  // namespace kernels
}  // namespace perron
