#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <algorithm>
#include <cmath>
#include <complex>
#include <random>

#include "doctest.h"
#include "perron/dense_core.hpp"
#include "perron/oracle.hpp"
#include "perron/ortho.hpp"
#include "test_support.hpp"

using perron::DenseMatrix;

TEST_CASE("eig_small on triangular matrices") {
  auto d = DenseMatrix::from_rows({{1, 5, 0}, {0, 2, -3}, {0, 0, 3}});
  auto ev = perron::eig_small(d);
  REQUIRE(ev.size() == 3);
  // Sorted by descending real part.
  CHECK(ev[0].real() == doctest::Approx(3.0).epsilon(1e-12));
  CHECK(ev[1].real() == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(ev[2].real() == doctest::Approx(1.0).epsilon(1e-12));
  for (auto& z : ev) CHECK(std::fabs(z.imag()) <= 1e-12);
}

TEST_CASE("eig_small recovers a complex conjugate pair") {
  auto rot = DenseMatrix::from_rows({{0, -1}, {1, 0}});
  auto ev = perron::eig_small(rot);
  REQUIRE(ev.size() == 2);
  CHECK(std::fabs(ev[0].real()) <= 1e-12);
  CHECK(std::fabs(std::fabs(ev[0].imag()) - 1.0) <= 1e-12);
  CHECK(ev[0].imag() == doctest::Approx(-ev[1].imag()).epsilon(1e-12));
}

TEST_CASE("eig_small matches companion matrix roots") {
  // Companion of (x-1)(x-2)(x-3) = x^3 - 6x^2 + 11x - 6.
  auto c = DenseMatrix::from_rows({{6, -11, 6}, {1, 0, 0}, {0, 1, 0}});
  auto ev = perron::eig_small(c);
  REQUIRE(ev.size() == 3);
  CHECK(std::fabs(ev[0].real() - 3.0) <= 1e-8);
  CHECK(std::fabs(ev[1].real() - 2.0) <= 1e-8);
  CHECK(std::fabs(ev[2].real() - 1.0) <= 1e-8);
}

TEST_CASE("eig_small eigenvalue sums match traces on random matrices") {
  std::mt19937_64 rng(testsup::env_seed());
  for (int trial = 0; trial < 20; ++trial) {
    auto a = testsup::random_gaussian(rng, 6, 6);
    auto ev = perron::eig_small(a);
    REQUIRE(ev.size() == 6);
    std::complex<double> sum1(0, 0), sum2(0, 0);
    for (auto& z : ev) {
      sum1 += z;
      sum2 += z * z;
    }
    double tr1 = 0.0;
    for (int i = 0; i < 6; ++i) tr1 += a(i, i);
    auto a2 = perron::matmul(a, a);
    double tr2 = 0.0;
    for (int i = 0; i < 6; ++i) tr2 += a2(i, i);
    double scale = std::max(1.0, perron::frobenius_norm(a));
    CHECK(std::fabs(sum1.real() - tr1) <= 1e-9 * scale);
    CHECK(std::fabs(sum1.imag()) <= 1e-9 * scale);
    CHECK(std::fabs(sum2.real() - tr2) <= 1e-8 * scale * scale);
  }
}

TEST_CASE("eig_small rejects oversized and non-square input") {
  CHECK_THROWS_AS(perron::eig_small(DenseMatrix(65, 65)),
                  perron::InvalidParameterError);
  CHECK_THROWS_AS(perron::eig_small(DenseMatrix(3, 4)),
                  perron::DimensionError);
}

TEST_CASE("expm_reference on known exponentials") {
  auto d = DenseMatrix::from_rows({{1, 0}, {0, 2}});
  auto e = perron::expm_reference(d);
  CHECK(e(0, 0) == doctest::Approx(std::exp(1.0)).epsilon(1e-14));
  CHECK(e(1, 1) == doctest::Approx(std::exp(2.0)).epsilon(1e-14));
  CHECK(std::fabs(e(0, 1)) <= 1e-15);

  auto n = DenseMatrix::from_rows({{0, 1}, {0, 0}});
  auto en = perron::expm_reference(n);
  CHECK(en(0, 0) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(en(0, 1) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(en(1, 0) == 0.0);

  CHECK(testsup::max_abs_diff(perron::expm_reference(DenseMatrix(3, 3)),
                              DenseMatrix::identity(3)) == 0.0);
}

TEST_CASE("expm_reference satisfies the semigroup property") {
  std::mt19937_64 rng(testsup::env_seed() + 1);
  auto a = testsup::random_gaussian(rng, 4, 4);
  DenseMatrix half(4, 4);
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) half(i, j) = 0.5 * a(i, j);
  auto eh = perron::expm_reference(half);
  auto prod = perron::matmul(eh, eh);
  auto full = perron::expm_reference(a);
  CHECK(testsup::max_abs_diff(prod, full) <=
        1e-12 * std::max(1.0, perron::frobenius_norm(full)));
}

TEST_CASE("numeric_rank thresholds") {
  CHECK(perron::numeric_rank(DenseMatrix::identity(3), 1e-8) == 3);
  CHECK(perron::numeric_rank(DenseMatrix(3, 3, 1.0), 1e-8) == 1);
  CHECK(perron::numeric_rank(DenseMatrix(2, 2), 1e-8) == 0);
  CHECK_THROWS_AS(perron::numeric_rank(DenseMatrix::identity(2), 0.0),
                  perron::InvalidParameterError);
}

TEST_CASE("true_cyclic_order on reference matrices") {
  CHECK(perron::true_cyclic_order(testsup::ex53(), 2.0) == 3);
  CHECK(perron::true_cyclic_order(testsup::ex81(), 2.0) == 3);
  CHECK(perron::true_cyclic_order(testsup::ex51(), 2.0) == 1);
  auto d = DenseMatrix::from_rows({{2, 0}, {0, 1}});
  CHECK(perron::true_cyclic_order(d, 2.0) == 1);
  // s far from the spectrum is rejected.
  CHECK_THROWS_AS(perron::true_cyclic_order(d, 5.0),
                  perron::DegenerateInputError);
}

TEST_CASE("analyze on the 5x5 reference matrix") {
  auto rep = perron::analyze(testsup::ex53());
  CHECK(std::fabs(rep.s - 2.0) <= 1e-6);
  CHECK(rep.alg_multiplicity == 3);
  CHECK(rep.nu_true == 3);
  CHECK(rep.is_perron_like);
  CHECK(std::fabs(rep.delta - 0.5) <= 1e-6);
  REQUIRE(rep.ge_basis.cols() == 3);
  // Basis columns live in the generalized eigenspace.
  auto img = perron::shifted_power_apply(testsup::ex53(), rep.s, rep.nu_true,
                                         rep.ge_basis);
  CHECK(perron::frobenius_norm(img) <= 1e-6);
}

TEST_CASE("analyze on the 7x7 reference matrix") {
  auto rep = perron::analyze(testsup::ex81());
  CHECK(std::fabs(rep.s - 2.0) <= 1e-5);
  CHECK(rep.alg_multiplicity == 5);
  CHECK(rep.nu_true == 3);
  CHECK(rep.is_perron_like);
  CHECK(std::fabs(rep.delta - 0.5) <= 1e-5);
  REQUIRE(rep.ge_basis.cols() == 5);
  auto g = perron::matmul(rep.ge_basis.transposed(), rep.ge_basis);
  CHECK(testsup::max_abs_diff(g, DenseMatrix::identity(5)) <= 1e-12);
  auto img = perron::shifted_power_apply(testsup::ex81(), rep.s, rep.nu_true,
                                         rep.ge_basis);
  CHECK(perron::frobenius_norm(img) <= 1e-6);
}

TEST_CASE("analyze on the 7x7 semisimple reference matrix") {
  auto rep = perron::analyze(testsup::ex51());
  CHECK(std::fabs(rep.s - 2.0) <= 1e-8);
  CHECK(rep.alg_multiplicity == 5);
  CHECK(rep.nu_true == 1);
  CHECK(rep.is_perron_like);
  // Remaining eigenvalues are -1 and -2, so the half-gap is 1.5.
  CHECK(std::fabs(rep.delta - 1.5) <= 1e-8);
}

TEST_CASE("analyze flags matrices that are not Perron-like") {
  // Dominant complex pair.
  auto rot = DenseMatrix::from_rows({{1, -3, 0}, {3, 1, 0}, {0, 0, 0.5}});
  auto rep = perron::analyze(rot);
  CHECK_FALSE(rep.is_perron_like);
  // Scalar matrix: trivially Perron-like with infinite gap.
  auto scalar = perron::analyze(DenseMatrix::identity(4));
  CHECK(scalar.is_perron_like);
  CHECK(scalar.alg_multiplicity == 4);
  CHECK(scalar.nu_true == 1);
  CHECK(std::isinf(scalar.delta));
}

TEST_CASE("principal_projection reproduces the printed projection") {
  auto y = perron::principal_projection(testsup::ex81(), 2.0,
                                        DenseMatrix::identity(7));
  CHECK(testsup::max_abs_diff(y, testsup::ex81_y()) <= 1e-8);
}

TEST_CASE("principal_projection is idempotent") {
  auto a = testsup::ex53();
  auto once = perron::principal_projection(a, 2.0, DenseMatrix::identity(5));
  auto twice = perron::principal_projection(a, 2.0, once);
  CHECK(testsup::max_abs_diff(once, twice) <= 1e-10);
}

TEST_CASE("principal_projection commutes with the matrix") {
  auto a = testsup::ex81();
  auto pa = perron::principal_projection(a, 2.0, a);
  auto ap =
      perron::matmul(a, perron::principal_projection(
                            a, 2.0, DenseMatrix::identity(7)));
  CHECK(testsup::max_abs_diff(pa, ap) <= 1e-8);
}

TEST_CASE("analyze handles random symmetric matrices with a simple top") {
  std::mt19937_64 rng(testsup::env_seed() + 2);
  auto g = testsup::random_gaussian(rng, 5, 5);
  auto q = perron::pivoted_orthonormalize(g, 1e-12).q;
  REQUIRE(q.cols() == 5);
  DenseMatrix lam(5, 5);
  double target[5] = {2.0, 0.9, 0.5, -0.3, -1.0};
  for (int i = 0; i < 5; ++i) lam(i, i) = target[i];
  auto a = perron::matmul(perron::matmul(q, lam), q.transposed());
  auto rep = perron::analyze(a);
  CHECK(std::fabs(rep.s - 2.0) <= 1e-9);
  CHECK(rep.alg_multiplicity == 1);
  CHECK(rep.nu_true == 1);
  CHECK(rep.is_perron_like);
  CHECK(std::fabs(rep.delta - 0.55) <= 1e-9);
}
