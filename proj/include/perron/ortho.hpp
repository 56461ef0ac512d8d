#pragma once

#include <vector>

#include "perron/matrix.hpp"

namespace perron {

// Result of column-pivoted modified Gram-Schmidt on a matrix.
struct PivotedBasis {
  DenseMatrix q;                  // m x rank, orthonormal columns (empty()
                                  // when rank == 0)
  std::vector<int> pivots;        // source column (0-based) of each q column,
                                  // in selection order
  std::vector<double> residuals;  // residual norm of each pivot at selection
  int rank = 0;
};

// Column-pivoted modified Gram-Schmidt with one reorthogonalization pass.
// Columns are selected greedily by largest remaining residual norm (smallest
// index on ties); selection stops when the best residual drops below tol_abs.
PivotedBasis pivoted_orthonormalize(const DenseMatrix& a, double tol_abs);

// Rank of a: number of pivots with residual >= tol_rel * ||a||_F.
int mgs_rank(const DenseMatrix& a, double tol_rel);

// Eigenvalues of a symmetric matrix by cyclic Jacobi rotations, ascending.
// Only the symmetric part of g is used. Throws OracleFailureError if the
// off-diagonal mass fails to vanish within the sweep budget.
std::vector<double> symmetric_eigenvalues(const DenseMatrix& g);

// Orthonormal basis of the null space of k (as column span), computed as the
// orthogonal complement of the row space at relative tolerance tol_rel.
// Returns an m x (m - rank) matrix; throws DegenerateInputError when the
// null space is trivial.
DenseMatrix nullspace_basis(const DenseMatrix& k, double tol_rel);

// Orthonormal basis of the column space of k at relative tolerance tol_rel.
DenseMatrix range_basis(const DenseMatrix& k, double tol_rel);

// Solve a * x = b by Gaussian elimination with partial pivoting
// (a is square, consumed by value). Throws DegenerateInputError when a is
// numerically singular.
DenseMatrix solve_linear(DenseMatrix a, const DenseMatrix& b);

}  // namespace perron
