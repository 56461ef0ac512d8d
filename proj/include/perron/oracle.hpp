#pragma once

#include <complex>
#include <vector>

#include "perron/matrix.hpp"

namespace perron {

// Brute-force reference results for a Perron-like analysis of a small dense
// matrix. Everything here is computed by dense classical algorithms that are
// independent of the iterative estimation pipeline; the two share only the
// elementary matrix kernels.
struct OracleReport {
  std::vector<std::complex<double>> eigenvalues;  // with multiplicity,
                                                  // decreasing real part
  double s = 0.0;               // dominant (largest real part) eigenvalue,
                                // refined as the centroid of its cluster
  bool is_perron_like = false;  // s real and strictly dominant
  double delta = 0.0;           // half the real-part gap to the rest of the
                                // spectrum (+inf when the cluster is all of it)
  int nu_true = 0;              // cyclic order: smallest k with
                                // (A - sI)^k GE_s = {0}
  int alg_multiplicity = 0;     // dimension of the principal generalized
                                // eigenspace GE_s
  DenseMatrix ge_basis;         // orthonormal basis of GE_s (m x alg_mult)
};

// All eigenvalues of a (m <= 64) via Householder reduction to Hessenberg
// form followed by the implicit double-shift QR iteration with deflation.
// Ordered by decreasing real part (conjugate pairs adjacent). Throws
// OracleFailureError if the iteration exceeds its sweep budget.
std::vector<std::complex<double>> eig_small(const DenseMatrix& a);

// Matrix exponential e^a by scaling and squaring with a Taylor series on the
// scaled matrix (||a/2^p||_F <= 0.5, series summed until the tail is
// negligible).
DenseMatrix expm_reference(const DenseMatrix& a);

// Numerical rank: number of column-pivoted Gram-Schmidt pivots with residual
// norm >= tol * ||a||_F.
int numeric_rank(const DenseMatrix& a, double tol);

// Cyclic order of eigenvalue s of a, via stabilization of the numerical
// ranks of successive normalized powers of (a - sI). Requires s to be close
// to an actual eigenvalue of a (the gate accounts for the splitting a
// defective eigenvalue suffers in floating point).
int true_cyclic_order(const DenseMatrix& a, double s);

// Projection of the columns of v onto the principal generalized eigenspace
// GE_s along the complementary invariant subspace, via the decomposition
// [N | R] with N spanning null((a-sI)^m) and R spanning range((a-sI)^m).
DenseMatrix principal_projection(const DenseMatrix& a, double s,
                                 const DenseMatrix& v);

// Full reference analysis of a.
OracleReport analyze(const DenseMatrix& a);

}  // namespace perron
