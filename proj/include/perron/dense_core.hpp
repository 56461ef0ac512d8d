#pragma once

#include "perron/matrix.hpp"

namespace perron {

// Frobenius inner product <a, b> = sum_ij a_ij * b_ij. The summation uses a
// fixed pairwise reduction tree, so the value is deterministic across runs
// and thread counts. Throws DimensionError on shape mismatch.
double frobenius_inner(const DenseMatrix& a, const DenseMatrix& b);

// Frobenius norm ||a|| = sqrt(<a, a>).
double frobenius_norm(const DenseMatrix& a);

// Euclidean norm of column j (0-based).
double column_norm(const DenseMatrix& a, int j);

// Matrix product a * b. Throws DimensionError when inner dimensions differ.
DenseMatrix matmul(const DenseMatrix& a, const DenseMatrix& b);

// Truncated exponential polynomial applied to x:
//   T_n(gamma A) x = sum_{k=0}^{n} (gamma^k / k!) A^k x.
// Terms are accumulated by the recurrence term_{k+1} = (gamma/(k+1)) A term_k;
// explicit matrix powers are never formed. Requires a square, a.cols == x.rows,
// n >= 0, gamma >= 0 and finite. If any term or partial sum exceeds 1e280 in
// magnitude (or goes non-finite), throws NumericOverflowError naming the term
// index.
DenseMatrix taylor_apply(const DenseMatrix& a, const DenseMatrix& x, int n,
                         double gamma);

// (A - shift I) x without forming the shifted matrix.
DenseMatrix shifted_apply(const DenseMatrix& a, double shift,
                          const DenseMatrix& x);

// (A - shift I)^k x by k successive shifted applications (k >= 0).
DenseMatrix shifted_power_apply(const DenseMatrix& a, double shift, int k,
                                const DenseMatrix& x);

}  // namespace perron
