#include "perron/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include "perron/dense_core.hpp"
#include "perron/kernels.hpp"
#include "perron/ortho.hpp"

namespace perron {

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();
constexpr int kMaxOracleSize = 64;

double sign_like(double magnitude, double sign_of) {
  return sign_of >= 0.0 ? std::fabs(magnitude) : -std::fabs(magnitude);
}

// Householder reduction to upper Hessenberg form (in place).
void hessenberg_reduce(DenseMatrix& a) {
  const int n = a.rows();
  std::vector<double> v(n);
  for (int k = 0; k + 2 < n; ++k) {
    double xnorm = 0.0;
    for (int i = k + 1; i < n; ++i) xnorm += a(i, k) * a(i, k);
    xnorm = std::sqrt(xnorm);
    if (xnorm <= 1e-300) continue;

    double alpha = -sign_like(xnorm, a(k + 1, k));
    double vnorm2 = 0.0;
    for (int i = k + 1; i < n; ++i) {
      v[i] = a(i, k);
      if (i == k + 1) v[i] -= alpha;
      vnorm2 += v[i] * v[i];
    }
    if (vnorm2 <= 1e-300) continue;
    double vnorm = std::sqrt(vnorm2);
    for (int i = k + 1; i < n; ++i) v[i] /= vnorm;

    // Left: A := (I - 2vv^T) A on rows k+1..n-1.
    for (int c = k; c < n; ++c) {
      double w = 0.0;
      for (int i = k + 1; i < n; ++i) w += v[i] * a(i, c);
      w *= 2.0;
      for (int i = k + 1; i < n; ++i) a(i, c) -= w * v[i];
    }
    // Right: A := A (I - 2vv^T) on columns k+1..n-1.
    for (int r = 0; r < n; ++r) {
      double w = 0.0;
      for (int c = k + 1; c < n; ++c) w += a(r, c) * v[c];
      w *= 2.0;
      for (int c = k + 1; c < n; ++c) a(r, c) -= w * v[c];
    }
    a(k + 1, k) = alpha;
    for (int i = k + 2; i < n; ++i) a(i, k) = 0.0;
  }
}

// Implicit double-shift QR on an upper Hessenberg matrix; eigenvalues only.
// Classic Francis iteration with deflation and exceptional shifts.
std::vector<std::complex<double>> hessenberg_eigenvalues(DenseMatrix a) {
  const int n = a.rows();
  std::vector<std::complex<double>> ev(n);

  double anorm = 0.0;
  for (int i = 0; i < n; ++i)
    for (int j = std::max(i - 1, 0); j < n; ++j) anorm += std::fabs(a(i, j));
  if (anorm == 0.0) return ev;  // zero matrix

  const long sweep_budget = 100L * n;
  long sweeps = 0;

  int nn = n - 1;
  double t = 0.0;
  while (nn >= 0) {
    int its = 0;
    int l;
    for (;;) {
      // Find a negligible subdiagonal entry to split the active block.
      for (l = nn; l >= 1; --l) {
        double s = std::fabs(a(l - 1, l - 1)) + std::fabs(a(l, l));
        if (s == 0.0) s = anorm;
        if (std::fabs(a(l, l - 1)) <= kEps * s) {
          a(l, l - 1) = 0.0;
          break;
        }
      }

      double x = a(nn, nn);
      if (l == nn) {
        ev[nn] = {x + t, 0.0};
        --nn;
        break;
      }
      double y = a(nn - 1, nn - 1);
      double w = a(nn, nn - 1) * a(nn - 1, nn);
      if (l == nn - 1) {
        double p = 0.5 * (y - x);
        double q = p * p + w;
        double z = std::sqrt(std::fabs(q));
        x += t;
        if (q >= 0.0) {
          z = p + sign_like(z, p);
          double r1 = x + z;
          double r2 = (z != 0.0) ? x - w / z : x + z;
          ev[nn - 1] = {r1, 0.0};
          ev[nn] = {r2, 0.0};
        } else {
          ev[nn - 1] = {x + p, z};
          ev[nn] = {x + p, -z};
        }
        nn -= 2;
        break;
      }

      // No deflation yet: run a double-shift sweep.
      if (++sweeps > sweep_budget)
        throw OracleFailureError(
            "eig_small: QR iteration exceeded its sweep budget");
      if (its == 10 || its == 20) {
        // Exceptional shift to break symmetric stagnation.
        t += x;
        for (int i = 0; i <= nn; ++i) a(i, i) -= x;
        double s = std::fabs(a(nn, nn - 1)) + std::fabs(a(nn - 1, nn - 2));
        y = x = 0.75 * s;
        w = -0.4375 * s * s;
      }
      ++its;
      if (its > 60)
        throw OracleFailureError(
            "eig_small: eigenvalue failed to deflate after 60 iterations");

      double p = 0.0, q = 0.0, r = 0.0;
      int m;
      for (m = nn - 2; m >= l; --m) {
        double z = a(m, m);
        double rr = x - z;
        double ss = y - z;
        p = (rr * ss - w) / a(m + 1, m) + a(m, m + 1);
        q = a(m + 1, m + 1) - z - rr - ss;
        r = a(m + 2, m + 1);
        double scale = std::fabs(p) + std::fabs(q) + std::fabs(r);
        p /= scale;
        q /= scale;
        r /= scale;
        if (m == l) break;
        double u = std::fabs(a(m, m - 1)) * (std::fabs(q) + std::fabs(r));
        double v = std::fabs(p) * (std::fabs(a(m - 1, m - 1)) + std::fabs(z) +
                                   std::fabs(a(m + 1, m + 1)));
        if (u <= kEps * v) break;
      }
      for (int i = m + 2; i <= nn; ++i) {
        a(i, i - 2) = 0.0;
        if (i != m + 2) a(i, i - 3) = 0.0;
      }
      for (int k = m; k <= nn - 1; ++k) {
        double scale_x = 0.0;
        if (k != m) {
          p = a(k, k - 1);
          q = a(k + 1, k - 1);
          r = (k != nn - 1) ? a(k + 2, k - 1) : 0.0;
          scale_x = std::fabs(p) + std::fabs(q) + std::fabs(r);
          if (scale_x != 0.0) {
            p /= scale_x;
            q /= scale_x;
            r /= scale_x;
          }
        }
        double s = sign_like(std::sqrt(p * p + q * q + r * r), p);
        if (s == 0.0) continue;
        if (k == m) {
          if (l != m) a(k, k - 1) = -a(k, k - 1);
        } else {
          a(k, k - 1) = -s * scale_x;
        }
        p += s;
        double x2 = p / s;
        double y2 = q / s;
        double z2 = r / s;
        q /= p;
        r /= p;
        // Row modification.
        for (int j = k; j <= nn; ++j) {
          double pp = a(k, j) + q * a(k + 1, j);
          if (k != nn - 1) {
            pp += r * a(k + 2, j);
            a(k + 2, j) -= pp * z2;
          }
          a(k + 1, j) -= pp * y2;
          a(k, j) -= pp * x2;
        }
        int mmin = (nn < k + 3) ? nn : k + 3;
        // Column modification.
        for (int i = l; i <= mmin; ++i) {
          double pp = x2 * a(i, k) + y2 * a(i, k + 1);
          if (k != nn - 1) {
            pp += z2 * a(i, k + 2);
            a(i, k + 2) -= pp * r;
          }
          a(i, k + 1) -= pp * q;
          a(i, k) -= pp;
        }
      }
    }
  }
  return ev;
}

DenseMatrix normalized_or_same(const DenseMatrix& k) {
  double nrm = frobenius_norm(k);
  if (nrm <= 1e-300) return k;
  DenseMatrix out = k;
  kernels::divide(out.data(), nrm, out.size());
  return out;
}

// Ranks of normalized powers (a - sI)^k for k = 1..kmax at tolerance tol.
std::vector<int> power_rank_ladder(const DenseMatrix& a, double s, int kmax,
                                   double tol) {
  DenseMatrix p = shifted_apply(a, s, DenseMatrix::identity(a.rows()));
  DenseMatrix k = normalized_or_same(p);
  std::vector<int> ranks;
  ranks.push_back(numeric_rank(k, tol));
  for (int i = 2; i <= kmax; ++i) {
    k = normalized_or_same(matmul(normalized_or_same(p), k));
    ranks.push_back(numeric_rank(k, tol));
  }
  return ranks;
}

// Normalized m-th power of (a - sI).
DenseMatrix normalized_power(const DenseMatrix& a, double s, int power) {
  DenseMatrix p = normalized_or_same(
      shifted_apply(a, s, DenseMatrix::identity(a.rows())));
  DenseMatrix k = p;
  for (int i = 2; i <= power; ++i) k = normalized_or_same(matmul(p, k));
  return k;
}

int stabilization_order(const std::vector<int>& ranks) {
  for (std::size_t k = 0; k + 1 < ranks.size(); ++k)
    if (ranks[k] == ranks[k + 1]) return static_cast<int>(k) + 1;
  return -1;
}

void check_oracle_size(const DenseMatrix& a, const char* op) {
  if (a.rows() != a.cols())
    throw DimensionError(std::string(op) + ": matrix must be square");
  if (a.rows() > kMaxOracleSize)
    throw InvalidParameterError(
        std::string(op) + ": reference solver handles at most 64x64");
}

}  // namespace

std::vector<std::complex<double>> eig_small(const DenseMatrix& a) {
  check_oracle_size(a, "eig_small");
  DenseMatrix h = a;
  hessenberg_reduce(h);
  std::vector<std::complex<double>> ev = hessenberg_eigenvalues(h);
  std::sort(ev.begin(), ev.end(),
            [](const std::complex<double>& x, const std::complex<double>& y) {
              if (x.real() != y.real()) return x.real() > y.real();
              if (std::fabs(x.imag()) != std::fabs(y.imag()))
                return std::fabs(x.imag()) < std::fabs(y.imag());
              return x.imag() > y.imag();
            });
  return ev;
}

DenseMatrix expm_reference(const DenseMatrix& a) {
  if (a.rows() != a.cols())
    throw DimensionError("expm_reference: matrix must be square");
  const int m = a.rows();
  double nrm = frobenius_norm(a);
  int p = 0;
  double scaled = nrm;
  while (scaled > 0.5) {
    scaled *= 0.5;
    ++p;
    if (p > 200)
      throw NumericOverflowError("expm_reference: norm too large to scale",
                                 -1);
  }
  DenseMatrix b = a;
  double factor = std::ldexp(1.0, -p);
  for (std::size_t i = 0; i < b.size(); ++i) b.data()[i] *= factor;

  DenseMatrix e = DenseMatrix::identity(m);
  DenseMatrix term = DenseMatrix::identity(m);
  for (int k = 1; k <= 200; ++k) {
    term = matmul(b, term);
    double inv = 1.0 / static_cast<double>(k);
    for (std::size_t i = 0; i < term.size(); ++i) term.data()[i] *= inv;
    kernels::add_scaled(e.data(), term.data(), 1.0, e.size());
    if (frobenius_norm(term) < 1e-20 * frobenius_norm(e)) break;
    if (k == 200)
      throw OracleFailureError("expm_reference: series did not converge");
  }
  for (int i = 0; i < p; ++i) e = matmul(e, e);
  return e;
}

int numeric_rank(const DenseMatrix& a, double tol) {
  if (!(tol > 0.0))
    throw InvalidParameterError("numeric_rank: tolerance must be positive");
  return mgs_rank(a, tol);
}

int true_cyclic_order(const DenseMatrix& a, double s) {
  check_oracle_size(a, "true_cyclic_order");
  const int m = a.rows();

  // Gate: s must sit near an actual eigenvalue. A defective eigenvalue of
  // order nu is split by roughly eps^(1/nu) in floating point, so the gate
  // is wider than the simple-eigenvalue accuracy.
  std::vector<std::complex<double>> ev = eig_small(a);
  double dist = std::numeric_limits<double>::infinity();
  for (const auto& lambda : ev)
    dist = std::min(dist, std::abs(lambda - std::complex<double>(s, 0.0)));
  double gate = std::max(1e-6 * std::max(1.0, frobenius_norm(a)),
                         5e-5 * std::max(1.0, std::fabs(s)));
  if (dist > gate)
    throw DegenerateInputError(
        "true_cyclic_order: s is not an eigenvalue (distance " +
        std::to_string(dist) + ")");

  std::vector<int> ranks = power_rank_ladder(a, s, m + 1, 1e-8);
  int nu = stabilization_order(ranks);
  if (nu < 0)
    throw OracleFailureError(
        "true_cyclic_order: power ranks failed to stabilize");
  return nu;
}

DenseMatrix principal_projection(const DenseMatrix& a, double s,
                                 const DenseMatrix& v) {
  check_oracle_size(a, "principal_projection");
  const int m = a.rows();
  if (v.rows() != m)
    throw DimensionError("principal_projection: operand rows mismatch");

  DenseMatrix p = shifted_apply(a, s, DenseMatrix::identity(m));
  if (frobenius_norm(p) <= 1e-300) return v;  // a == sI: GE_s is everything

  DenseMatrix km = normalized_power(a, s, m);
  if (frobenius_norm(km) <= 1e-300) return v;  // (a - sI)^m == 0

  DenseMatrix nbasis = nullspace_basis(km, 1e-8);
  DenseMatrix rbasis = range_basis(km, 1e-8);
  int ell = nbasis.cols();
  int r = rbasis.cols();
  if (ell + r != m)
    throw OracleFailureError(
        "principal_projection: null/range split is not a direct sum");

  DenseMatrix b(m, m);
  for (int i = 0; i < m; ++i) {
    for (int j = 0; j < ell; ++j) b(i, j) = nbasis(i, j);
    for (int j = 0; j < r; ++j) b(i, ell + j) = rbasis(i, j);
  }
  DenseMatrix coeff = solve_linear(b, v);
  DenseMatrix top(ell, v.cols());
  for (int i = 0; i < ell; ++i)
    for (int j = 0; j < v.cols(); ++j) top(i, j) = coeff(i, j);
  return matmul(nbasis, top);
}

OracleReport analyze(const DenseMatrix& a) {
  check_oracle_size(a, "analyze");
  const int m = a.rows();

  OracleReport rep;
  rep.eigenvalues = eig_small(a);
  double s0 = rep.eigenvalues.front().real();

  DenseMatrix p0 = shifted_apply(a, s0, DenseMatrix::identity(m));
  if (frobenius_norm(p0) <= 1e-300) {
    // a == s0 I exactly: the principal space is everything.
    rep.s = s0;
    rep.is_perron_like = true;
    rep.delta = std::numeric_limits<double>::infinity();
    rep.nu_true = 1;
    rep.alg_multiplicity = m;
    rep.ge_basis = DenseMatrix::identity(m);
    return rep;
  }

  // Pass 1: principal multiplicity from the rank of (a - s0 I)^m.
  int ell = m - numeric_rank(normalized_power(a, s0, m), 1e-8);
  if (ell <= 0) {
    // Rank-based count failed (splitting sat right at the tolerance); fall
    // back to merging eigenvalues within 1e-6 of the dominant one.
    ell = 0;
    for (const auto& lambda : rep.eigenvalues)
      if (std::abs(lambda - std::complex<double>(s0, 0.0)) <=
          1e-6 * std::max(1.0, std::fabs(s0)))
        ++ell;
    if (ell <= 0) ell = 1;
  }

  // Cluster: the ell eigenvalues nearest s0. The centroid of the cluster
  // cancels the first-order floating-point splitting of a defective
  // eigenvalue, giving a far more accurate s.
  std::vector<int> order(rep.eigenvalues.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](int x, int y) {
    return std::abs(rep.eigenvalues[x] - std::complex<double>(s0, 0.0)) <
           std::abs(rep.eigenvalues[y] - std::complex<double>(s0, 0.0));
  });
  double sum_re = 0.0, sum_im = 0.0;
  for (int i = 0; i < ell; ++i) {
    sum_re += rep.eigenvalues[order[i]].real();
    sum_im += rep.eigenvalues[order[i]].imag();
  }
  rep.s = sum_re / ell;

  // Pass 2 at the refined shift: cyclic order and the eigenspace basis.
  std::vector<int> ranks = power_rank_ladder(a, rep.s, m + 1, 1e-8);
  int nu = stabilization_order(ranks);
  if (nu < 0)
    throw OracleFailureError("analyze: power ranks failed to stabilize");
  rep.nu_true = nu;
  rep.alg_multiplicity = m - ranks[m - 1];
  if (rep.alg_multiplicity < 1)
    throw OracleFailureError("analyze: empty principal eigenspace");

  rep.ge_basis = nullspace_basis(normalized_power(a, rep.s, nu), 1e-8);
  if (rep.ge_basis.cols() != rep.alg_multiplicity)
    throw OracleFailureError(
        "analyze: eigenspace dimension disagrees with the rank ladder");

  // Dominance: everything outside the cluster must sit strictly below s,
  // and the cluster itself must be real (conjugate parts cancel).
  bool dominant = true;
  double max_other = -std::numeric_limits<double>::infinity();
  for (std::size_t i = ell; i < order.size(); ++i) {
    double re = rep.eigenvalues[order[i]].real();
    max_other = std::max(max_other, re);
    if (!(re < rep.s - 1e-9)) dominant = false;
  }
  bool cluster_real =
      std::fabs(sum_im) <= 1e-8 * ell * std::max(1.0, std::fabs(rep.s));
  rep.is_perron_like = dominant && cluster_real;
  rep.delta = (order.size() > static_cast<std::size_t>(ell))
                  ? 0.5 * (rep.s - max_other)
                  : std::numeric_limits<double>::infinity();
  return rep;
}

}  // namespace perron
