#pragma once

#include <vector>

#include "perron/matrix.hpp"

namespace perron {

// Extracted principal generalized eigenspace basis.
struct EigenspaceBasis {
  DenseMatrix b_tilde;  // the full polynomial-corrected iterate, unit
                        // Frobenius norm (m x m)
  double s_bar = 0.0;   // shift used
  int nu = 0;           // cyclic order assumed
  int d = 0;            // correction degree, nu - 1
  int n = 0;            // iteration depth
  std::vector<int> selected_columns;  // pivot columns (1-based), one per
                                      // basis vector
  int dim_estimate = 0;               // number of selected columns
  double conditioning = 0.0;  // smallest singular value of the selected
                              // (normalized) columns
  DenseMatrix basis;          // m x dim_estimate: the selected columns,
                              // each normalized to unit length
};

// Degree-d alternating shifted-power correction applied to x:
//   P(t) x = sum_{k=0}^{d} (-1)^k (t^k / k!) (A - s_bar I)^k x.
DenseMatrix p_bar_apply(const DenseMatrix& a, double s_bar, int d, double t,
                        const DenseMatrix& x);

// The normalized iteration driven by (A - s_bar I) at step scale 1,
// returning the final iterate.
DenseMatrix run_shifted_iteration(const DenseMatrix& a, double s_bar,
                                  const DenseMatrix& v, int n);

// Extract a basis of the principal generalized eigenspace: run the shifted
// iteration, apply the degree-(nu-1) correction at t = n, normalize, and
// keep the pivot columns of a column-pivoted Gram-Schmidt pass (columns are
// 2-norm normalized first; selection stops below rank_tol = 1e-6). Throws
// EmptySpaceError when no column survives.
EigenspaceBasis compute_basis(const DenseMatrix& a, double s_bar, int nu,
                              int n, const DenseMatrix& v);

// Gap between the column spans of u and w: the sine of the largest principal
// angle, computed from the cross-Gram matrix of orthonormalized bases.
// Requires both inputs to have full column rank (DegenerateInputError
// otherwise). Symmetric in its arguments when the spans have equal
// dimension: measures how far the smaller span sticks out of the larger.
double subspace_gap(const DenseMatrix& u, const DenseMatrix& w);

}  // namespace perron
