#include "perron/ortho.hpp"

#include <algorithm>
#include <cmath>

#include "perron/dense_core.hpp"

namespace perron {

namespace {

double dot_col(const std::vector<double>& u, const std::vector<double>& v) {
  double s = 0.0;
  for (std::size_t i = 0; i < u.size(); ++i) s += u[i] * v[i];
  return s;
}

double norm_col(const std::vector<double>& u) {
  return std::sqrt(dot_col(u, u));
}

}  // namespace

PivotedBasis pivoted_orthonormalize(const DenseMatrix& a, double tol_abs) {
  const int m = a.rows();
  const int nc = a.cols();

  // Work on column vectors; they are progressively deflated against the
  // selected orthonormal directions (modified Gram-Schmidt).
  std::vector<std::vector<double>> work(nc, std::vector<double>(m));
  for (int j = 0; j < nc; ++j)
    for (int i = 0; i < m; ++i) work[j][i] = a(i, j);
  std::vector<bool> used(nc, false);

  PivotedBasis out;
  std::vector<std::vector<double>> qcols;

  for (int step = 0; step < std::min(m, nc); ++step) {
    int best = -1;
    double best_norm = -1.0;
    for (int j = 0; j < nc; ++j) {
      if (used[j]) continue;
      double njn = norm_col(work[j]);
      if (njn > best_norm) {
        best_norm = njn;
        best = j;
      }
    }
    if (best < 0 || best_norm < tol_abs) break;

    std::vector<double> q = work[best];
    // One reorthogonalization pass tightens orthogonality to round-off.
    for (int pass = 0; pass < 2; ++pass) {
      for (const auto& prev : qcols) {
        double c = dot_col(prev, q);
        for (int i = 0; i < m; ++i) q[i] -= c * prev[i];
      }
    }
    double qn = norm_col(q);
    if (qn < tol_abs) break;
    for (int i = 0; i < m; ++i) q[i] /= qn;

    used[best] = true;
    out.pivots.push_back(best);
    out.residuals.push_back(best_norm);
    qcols.push_back(q);

    // Deflate the remaining columns against the new direction.
    for (int j = 0; j < nc; ++j) {
      if (used[j]) continue;
      double c = dot_col(q, work[j]);
      for (int i = 0; i < m; ++i) work[j][i] -= c * q[i];
    }
  }

  out.rank = static_cast<int>(qcols.size());
  if (out.rank > 0) {
    out.q = DenseMatrix(m, out.rank);
    for (int j = 0; j < out.rank; ++j)
      for (int i = 0; i < m; ++i) out.q(i, j) = qcols[j][i];
  }
  return out;
}

int mgs_rank(const DenseMatrix& a, double tol_rel) {
  double scale = frobenius_norm(a);
  if (scale == 0.0) return 0;
  return pivoted_orthonormalize(a, tol_rel * scale).rank;
}

std::vector<double> symmetric_eigenvalues(const DenseMatrix& g) {
  if (g.rows() != g.cols())
    throw DimensionError("symmetric_eigenvalues: matrix must be square");
  const int n = g.rows();
  DenseMatrix a(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) a(i, j) = 0.5 * (g(i, j) + g(j, i));

  double scale = frobenius_norm(a);
  if (scale == 0.0) return std::vector<double>(n, 0.0);

  const int max_sweeps = 60;
  for (int sweep = 0; sweep < max_sweeps; ++sweep) {
    double off = 0.0;
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j) off += a(i, j) * a(i, j);
    if (std::sqrt(off) <= 1e-14 * scale) {
      std::vector<double> ev(n);
      for (int i = 0; i < n; ++i) ev[i] = a(i, i);
      std::sort(ev.begin(), ev.end());
      return ev;
    }
    for (int p = 0; p < n - 1; ++p) {
      for (int q = p + 1; q < n; ++q) {
        double apq = a(p, q);
        if (std::fabs(apq) <= 1e-300) continue;
        double theta = (a(q, q) - a(p, p)) / (2.0 * apq);
        double t = (theta >= 0 ? 1.0 : -1.0) /
                   (std::fabs(theta) + std::sqrt(theta * theta + 1.0));
        double c = 1.0 / std::sqrt(t * t + 1.0);
        double s = t * c;
        for (int i = 0; i < n; ++i) {
          double aip = a(i, p), aiq = a(i, q);
          a(i, p) = c * aip - s * aiq;
          a(i, q) = s * aip + c * aiq;
        }
        for (int i = 0; i < n; ++i) {
          double api = a(p, i), aqi = a(q, i);
          a(p, i) = c * api - s * aqi;
          a(q, i) = s * api + c * aqi;
        }
      }
    }
  }
  throw OracleFailureError(
      "symmetric_eigenvalues: Jacobi sweeps did not converge");
}

DenseMatrix nullspace_basis(const DenseMatrix& k, double tol_rel) {
  const int m = k.rows();
  if (k.rows() != k.cols())
    throw DimensionError("nullspace_basis: matrix must be square");

  double scale = frobenius_norm(k);
  int rank = 0;
  PivotedBasis rows;
  if (scale > 0.0) {
    rows = pivoted_orthonormalize(k.transposed(), tol_rel * scale);
    rank = rows.rank;
  }
  int dim = m - rank;
  if (dim <= 0)
    throw DegenerateInputError("nullspace_basis: null space is trivial");

  // Orthogonal complement of the row space: project the identity columns out
  // of the row-space basis, then orthonormalize what is left.
  DenseMatrix cand = DenseMatrix::identity(m);
  for (int j = 0; j < m; ++j) {
    for (int r = 0; r < rank; ++r) {
      double c = 0.0;
      for (int i = 0; i < m; ++i) c += rows.q(i, r) * cand(i, j);
      for (int i = 0; i < m; ++i) cand(i, j) -= c * rows.q(i, r);
    }
  }
  PivotedBasis comp = pivoted_orthonormalize(cand, 1e-8);
  if (comp.rank < dim)
    throw OracleFailureError(
        "nullspace_basis: complement construction lost rank");
  if (comp.rank == dim) return comp.q;
  DenseMatrix out(m, dim);
  for (int j = 0; j < dim; ++j)
    for (int i = 0; i < m; ++i) out(i, j) = comp.q(i, j);
  return out;
}

DenseMatrix range_basis(const DenseMatrix& k, double tol_rel) {
  double scale = frobenius_norm(k);
  if (scale == 0.0)
    throw DegenerateInputError("range_basis: zero matrix has empty range");
  PivotedBasis pb = pivoted_orthonormalize(k, tol_rel * scale);
  if (pb.rank == 0)
    throw DegenerateInputError("range_basis: no columns above tolerance");
  return pb.q;
}

DenseMatrix solve_linear(DenseMatrix a, const DenseMatrix& b) {
  const int n = a.rows();
  if (a.cols() != n || b.rows() != n)
    throw DimensionError("solve_linear: shape mismatch");
  DenseMatrix x = b;
  std::vector<int> perm(n);
  for (int i = 0; i < n; ++i) perm[i] = i;

  for (int col = 0; col < n; ++col) {
    int piv = col;
    double best = std::fabs(a(col, col));
    for (int r = col + 1; r < n; ++r) {
      double v = std::fabs(a(r, col));
      if (v > best) {
        best = v;
        piv = r;
      }
    }
    if (best < 1e-300)
      throw DegenerateInputError("solve_linear: matrix numerically singular");
    if (piv != col) {
      for (int j = 0; j < n; ++j) std::swap(a(col, j), a(piv, j));
      for (int j = 0; j < x.cols(); ++j) std::swap(x(col, j), x(piv, j));
    }
    for (int r = col + 1; r < n; ++r) {
      double f = a(r, col) / a(col, col);
      if (f == 0.0) continue;
      for (int j = col; j < n; ++j) a(r, j) -= f * a(col, j);
      for (int j = 0; j < x.cols(); ++j) x(r, j) -= f * x(col, j);
    }
  }
  for (int col = n - 1; col >= 0; --col) {
    for (int j = 0; j < x.cols(); ++j) {
      double s = x(col, j);
      for (int r = col + 1; r < n; ++r) s -= a(col, r) * x(r, j);
      x(col, j) = s / a(col, col);
    }
  }
  return x;
}

}  // namespace perron
