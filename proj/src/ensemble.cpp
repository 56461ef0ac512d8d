#include "perron/ensemble.hpp"

#include <cmath>

#include "perron/dense_core.hpp"
#include "perron/ortho.hpp"

namespace perron {

DenseMatrix random_orthogonal(std::mt19937_64& rng, int m) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  for (int attempt = 0; attempt < 8; ++attempt) {
    DenseMatrix g(m, m);
    for (int i = 0; i < m; ++i)
      for (int j = 0; j < m; ++j) g(i, j) = gauss(rng);
    PivotedBasis pb = pivoted_orthonormalize(g, 1e-10);
    if (pb.rank == m) return pb.q;
  }
  throw OracleFailureError("random_orthogonal: Gaussian draw was singular");
}

PlantedPerron draw_perron_like(std::mt19937_64& rng, int min_m, int max_m,
                               int max_nu, double min_gap, double max_gap,
                               double max_cond) {
  if (min_m < 2 || max_m < min_m)
    throw InvalidParameterError("draw_perron_like: need 2 <= min_m <= max_m");
  std::uniform_real_distribution<double> unit(0.0, 1.0);

  PlantedPerron out;
  out.m = min_m + static_cast<int>(unit(rng) * (max_m - min_m + 1));
  if (out.m > max_m) out.m = max_m;
  const int m = out.m;

  int nu_cap = std::min(max_nu, m - 1);
  out.nu = 1 + static_cast<int>(unit(rng) * nu_cap);
  if (out.nu > nu_cap) out.nu = nu_cap;

  // Optionally one extra semisimple copy of s, keeping at least one
  // non-principal eigenvalue.
  out.ell = out.nu;
  if (out.nu + 1 <= m - 1 && unit(rng) < 0.5) out.ell = out.nu + 1;

  out.s = 1.0 + unit(rng);
  out.gap = min_gap + unit(rng) * (max_gap - min_gap);

  // Real Jordan form: principal block(s) first, then the rest of the
  // spectrum strictly below s - gap in real part.
  DenseMatrix j(m, m);
  for (int i = 0; i < out.ell; ++i) j(i, i) = out.s;
  for (int i = 0; i + 1 < out.nu; ++i) j(i, i + 1) = 1.0;

  int pos = out.ell;
  bool first_other = true;
  while (pos < m) {
    double re = first_other
                    ? out.s - out.gap
                    : out.s - out.gap - 1.5 * unit(rng);
    first_other = false;
    if (m - pos >= 2 && unit(rng) < 0.4) {
      double im = 0.2 + 0.8 * unit(rng);
      j(pos, pos) = re;
      j(pos, pos + 1) = im;
      j(pos + 1, pos) = -im;
      j(pos + 1, pos + 1) = re;
      pos += 2;
    } else {
      j(pos, pos) = re;
      pos += 1;
    }
  }

  // Similarity transform S = Q1 D Q2 with planted condition number.
  out.cond = std::exp(unit(rng) * std::log(max_cond));
  DenseMatrix q1 = random_orthogonal(rng, m);
  DenseMatrix q2 = random_orthogonal(rng, m);
  DenseMatrix smat(m, m);
  for (int c = 0; c < m; ++c) {
    double sv = (m == 1) ? 1.0
                         : std::pow(out.cond, -static_cast<double>(c) /
                                                  (m - 1));
    for (int r = 0; r < m; ++r) smat(r, c) = q1(r, c) * sv;
  }
  smat = matmul(smat, q2);

  // a = S J S^{-1}, formed as the solution of a S = S J.
  DenseMatrix rhs = matmul(smat, j);
  out.a = solve_linear(smat.transposed(), rhs.transposed()).transposed();

  out.ge = DenseMatrix(m, out.ell);
  for (int c = 0; c < out.ell; ++c)
    for (int r = 0; r < m; ++r) out.ge(r, c) = smat(r, c);
  return out;
}

}  // namespace perron
