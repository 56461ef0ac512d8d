#include "perron/geigenspace.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "perron/dense_core.hpp"
#include "perron/iter_scheme.hpp"
#include "perron/kernels.hpp"
#include "perron/ortho.hpp"

namespace perron {

namespace {

constexpr double kRankTol = 1e-6;

DenseMatrix gram_of(const DenseMatrix& cols, int count) {
  DenseMatrix g(count, count);
  for (int i = 0; i < count; ++i)
    for (int j = 0; j < count; ++j) {
      double s = 0.0;
      for (int r = 0; r < cols.rows(); ++r) s += cols(r, i) * cols(r, j);
      g(i, j) = s;
    }
  return g;
}

}  // namespace

DenseMatrix p_bar_apply(const DenseMatrix& a, double s_bar, int d, double t,
                        const DenseMatrix& x) {
  if (a.rows() != a.cols())
    throw DimensionError("p_bar_apply: matrix must be square");
  if (x.rows() != a.rows())
    throw DimensionError("p_bar_apply: operand rows mismatch");
  if (d < 0) throw InvalidParameterError("p_bar_apply: degree must be >= 0");
  if (!std::isfinite(t))
    throw InvalidParameterError("p_bar_apply: t must be finite");

  DenseMatrix acc = x;
  DenseMatrix term = x;
  for (int k = 1; k <= d; ++k) {
    term = shifted_apply(a, s_bar, term);
    double scale = -t / static_cast<double>(k);
    for (std::size_t i = 0; i < term.size(); ++i) term.data()[i] *= scale;
    kernels::add_scaled(acc.data(), term.data(), 1.0, acc.size());
    if (kernels::max_abs(term.data(), term.size()) > 1e280 ||
        kernels::any_nonfinite(acc.data(), acc.size()))
      throw NumericOverflowError(
          "p_bar_apply: term " + std::to_string(k) + " overflowed", k);
  }
  return acc;
}

DenseMatrix run_shifted_iteration(const DenseMatrix& a, double s_bar,
                                  const DenseMatrix& v, int n) {
  if (a.rows() != a.cols())
    throw DimensionError("run_shifted_iteration: matrix must be square");
  DenseMatrix shifted = a;
  for (int i = 0; i < a.rows(); ++i) shifted(i, i) -= s_bar;
  return run_iteration(shifted, v, n, 1.0, "shifted").w_n;
}

EigenspaceBasis compute_basis(const DenseMatrix& a, double s_bar, int nu,
                              int n, const DenseMatrix& v) {
  if (nu < 1) throw InvalidParameterError("compute_basis: nu must be >= 1");
  if (n < 1) throw InvalidParameterError("compute_basis: n must be >= 1");

  EigenspaceBasis out;
  out.s_bar = s_bar;
  out.nu = nu;
  out.d = nu - 1;
  out.n = n;

  DenseMatrix s_iter = run_shifted_iteration(a, s_bar, v, n);
  DenseMatrix b = p_bar_apply(a, s_bar, out.d, static_cast<double>(n), s_iter);
  double nb = frobenius_norm(b);
  if (nb < 1e-300)
    throw EmptySpaceError(
        "compute_basis: corrected iterate vanished; the shift is far from "
        "the principal eigenvalue");
  kernels::divide(b.data(), nb, b.size());
  out.b_tilde = b;

  // Column-normalize before pivoting so the rank tolerance is scale-free.
  const int m = b.rows();
  DenseMatrix c = b;
  for (int j = 0; j < c.cols(); ++j) {
    double cn = column_norm(c, j);
    if (cn < 1e-12) {
      for (int i = 0; i < m; ++i) c(i, j) = 0.0;
    } else {
      for (int i = 0; i < m; ++i) c(i, j) /= cn;
    }
  }

  PivotedBasis pb = pivoted_orthonormalize(c, kRankTol);
  if (pb.rank == 0)
    throw EmptySpaceError(
        "compute_basis: no column above the rank tolerance survived");

  // Keep the pivot prefix whose Gram matrix stays well conditioned: the
  // smallest Gram eigenvalue of the selected normalized columns must not
  // drop below the rank tolerance.
  DenseMatrix picked(m, pb.rank);
  int kept = 0;
  double cond = 0.0;
  for (int cidx = 0; cidx < pb.rank; ++cidx) {
    int src = pb.pivots[cidx];
    for (int i = 0; i < m; ++i) picked(i, kept) = c(i, src);
    std::vector<double> ev = symmetric_eigenvalues(gram_of(picked, kept + 1));
    double lam_min = ev.front();
    if (kept > 0 && lam_min < kRankTol) break;
    cond = std::sqrt(std::max(0.0, lam_min));
    ++kept;
    out.selected_columns.push_back(src + 1);
  }

  out.dim_estimate = kept;
  out.conditioning = cond;
  out.basis = DenseMatrix(m, kept);
  for (int j = 0; j < kept; ++j)
    for (int i = 0; i < m; ++i) out.basis(i, j) = picked(i, j);
  return out;
}

double subspace_gap(const DenseMatrix& u, const DenseMatrix& w) {
  if (u.rows() != w.rows())
    throw DimensionError("subspace_gap: ambient dimensions differ");

  auto orthobasis = [](const DenseMatrix& x, const char* side) {
    double scale = frobenius_norm(x);
    if (scale <= 0.0)
      throw DegenerateInputError(std::string("subspace_gap: ") + side +
                                 " basis is zero");
    PivotedBasis pb = pivoted_orthonormalize(x, 1e-10 * scale);
    if (pb.rank < x.cols())
      throw DegenerateInputError(std::string("subspace_gap: ") + side +
                                 " basis is rank deficient");
    return pb.q;
  };

  DenseMatrix qu = orthobasis(u, "first");
  DenseMatrix qw = orthobasis(w, "second");

  DenseMatrix x = matmul(qu.transposed(), qw);  // p x q cross-Gram
  DenseMatrix g = (x.rows() <= x.cols()) ? matmul(x, x.transposed())
                                         : matmul(x.transposed(), x);
  std::vector<double> ev = symmetric_eigenvalues(g);
  double sigma_sq = std::clamp(ev.front(), 0.0, 1.0);
  return std::sqrt(1.0 - sigma_sq);
}

}  // namespace perron
