#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>
#include <random>

#include "doctest.h"
#include "perron/dense_core.hpp"
#include "perron/iter_scheme.hpp"
#include "perron/refine.hpp"
#include "test_support.hpp"

using perron::DenseMatrix;

TEST_CASE("phi on a Jordan vector") {
  auto a = DenseMatrix::from_rows({{2, 1}, {0, 2}});
  auto x = DenseMatrix::from_rows({{0.0}, {1.0}});
  // (A - 3I)^2 x = (-2, 1)^T, squared norm 5.
  CHECK(perron::phi(a, 3.0, x, 2) == doctest::Approx(5.0).epsilon(1e-15));
  CHECK(perron::phi(a, 2.0, x, 2) == 0.0);
  CHECK_THROWS_AS(perron::phi(a, 3.0, x, 0), perron::InvalidParameterError);
  CHECK_THROWS_AS(perron::phi(a, 3.0, DenseMatrix(2, 1), 2),
                  perron::DegenerateInputError);
}

TEST_CASE("phi_prime on a scalar matrix") {
  DenseMatrix a(1, 1);
  a(0, 0) = 3.0;
  DenseMatrix x(1, 1);
  x(0, 0) = 1.0;
  // phi(tau) = (3 - tau)^2, so phi'(1) = -2 * 2 = -4.
  CHECK(perron::phi_prime(a, 1.0, x, 1) ==
        doctest::Approx(-4.0).epsilon(1e-15));
}

TEST_CASE("phi is nonnegative and grows away from the spectrum") {
  std::mt19937_64 rng(testsup::env_seed());
  auto a = testsup::random_gaussian(rng, 5, 5);
  auto x = testsup::random_gaussian(rng, 5, 1);
  double bound = 10.0 * perron::frobenius_norm(a);
  for (int nu : {1, 2, 3}) {
    CHECK(perron::phi(a, 0.3, x, nu) >= 0.0);
    CHECK(perron::phi(a, bound, x, nu) > perron::phi(a, 0.0, x, nu));
  }
}

TEST_CASE("phi_prime matches centered differences") {
  std::mt19937_64 rng(testsup::env_seed() + 1);
  const double h = 1e-6;
  for (int trial = 0; trial < 100; ++trial) {
    auto a = testsup::random_gaussian(rng, 4, 4);
    auto x = testsup::random_gaussian(rng, 4, 1);
    int nu = 1 + static_cast<int>(rng() % 3);
    std::uniform_real_distribution<double> tau_dist(-2.0, 2.0);
    double tau = tau_dist(rng);
    double exact = perron::phi_prime(a, tau, x, nu);
    double fd =
        (perron::phi(a, tau + h, x, nu) - perron::phi(a, tau - h, x, nu)) /
        (2.0 * h);
    double denom = std::max(1.0, std::fabs(exact));
    CHECK(std::fabs(exact - fd) / denom <= 1e-5);
  }
}

TEST_CASE("gradient_flow matches the scalar closed form") {
  // a = (3), nu = 1, gamma * n = 1: tau' = 2 (3 - tau), so starting from
  // zero tau(t) = 3 - 3 exp(-2 t).
  DenseMatrix a(1, 1);
  a(0, 0) = 3.0;
  DenseMatrix x(1, 1);
  x(0, 0) = 1.0;
  auto res = perron::gradient_flow(a, x, 1, 0.0, 1.0, 1, 1.0, 0.01);
  double exact = 3.0 - 3.0 * std::exp(-2.0);
  CHECK(std::fabs(res.s_refined - exact) <= 1e-8);
  CHECK(res.trajectory.front().first == 0.0);
  CHECK(res.trajectory.front().second == 0.0);
  CHECK(res.trajectory.back().first == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("gradient_flow reproduces the printed 5x5 trajectory") {
  auto a = testsup::ex53();
  auto deep = perron::run_iteration(a, DenseMatrix::identity(5), 100, 1.0);
  auto shallow = perron::run_iteration(a, DenseMatrix::identity(5), 20, 1.0);
  auto x = shallow.w_n.column(3);  // dominant column of the deep run is 4
  auto res = perron::gradient_flow(a, x, 3, 2.0203, 0.2, 20, 100.0, 0.01);
  CHECK(std::fabs(res.s_refined - 2.0) <= 1e-5);
  // The flow passes through the printed checkpoints.
  for (auto [t_ref, tau_ref] : testsup::ex53_flow_table()) {
    bool found = false;
    for (auto [t, tau] : res.trajectory) {
      if (std::fabs(t - t_ref) <= 1e-9) {
        CHECK(std::fabs(tau - tau_ref) <= 1e-5);
        found = true;
        break;
      }
    }
    CHECK(found);
  }
  // The error decreases monotonically along the checkpoints.
  double prev = 1e300;
  for (auto [t_ref, tau_ref] : testsup::ex53_flow_table()) {
    (void)t_ref;
    double err = std::fabs(tau_ref - 2.0);
    CHECK(err < prev);
    prev = err;
  }
  (void)deep;
}

TEST_CASE("gradient_flow descends its own objective") {
  auto a = testsup::ex53();
  auto shallow = perron::run_iteration(a, DenseMatrix::identity(5), 20, 1.0);
  auto x = shallow.w_n.column(3);
  auto res = perron::gradient_flow(a, x, 3, 2.0203, 0.2, 20, 10.0, 0.01);
  double prev = 1e300;
  for (auto [t, tau] : res.trajectory) {
    (void)t;
    double val = perron::phi(a, tau, x, 3);
    CHECK(val <= prev * (1.0 + 1e-12) + 1e-300);
    prev = val;
  }
}

TEST_CASE("gradient_flow on a scalar matrix family is stationary at s") {
  DenseMatrix a(3, 3);
  for (int i = 0; i < 3; ++i) a(i, i) = 2.0;
  DenseMatrix x(3, 1);
  x(0, 0) = 1.0;
  auto res = perron::gradient_flow(a, x, 1, 2.0, 0.2, 20, 5.0, 0.01);
  CHECK(res.s_refined == 2.0);  // the velocity field vanishes identically
  CHECK(res.converged);
}

TEST_CASE("gradient_flow rejects bad parameters and reports divergence") {
  auto a = testsup::ex53();
  auto x = DenseMatrix(5, 1);
  x(0, 0) = 1.0;
  CHECK_THROWS_AS(perron::gradient_flow(a, x, 3, 2.0, 0.0, 20, 1.0, 0.01),
                  perron::InvalidParameterError);
  CHECK_THROWS_AS(perron::gradient_flow(a, x, 3, 2.0, 0.2, 0, 1.0, 0.01),
                  perron::InvalidParameterError);
  CHECK_THROWS_AS(perron::gradient_flow(a, x, 3, 2.0, 0.2, 20, -1.0, 0.01),
                  perron::InvalidParameterError);
  CHECK_THROWS_AS(perron::gradient_flow(a, x, 3, 2.0, 0.2, 20, 1.0, 0.0),
                  perron::InvalidParameterError);
  // Step budget guard.
  CHECK_THROWS_AS(perron::gradient_flow(a, x, 3, 2.0, 0.2, 20, 1e9, 1e-4),
                  perron::InvalidParameterError);
  // An aggressively scaled flow escapes any bounded region.
  auto shallow = perron::run_iteration(a, DenseMatrix::identity(5), 20, 1.0);
  auto probe = shallow.w_n.column(3);
  CHECK_THROWS_AS(perron::gradient_flow(a, probe, 3, 2.0203, 5.0, 20, 100.0, 0.01),
                  perron::DivergenceError);
}

TEST_CASE("flow_rate_estimate measures the local stiffness") {
  DenseMatrix a(1, 1);
  a(0, 0) = 3.0;
  DenseMatrix x(1, 1);
  x(0, 0) = 1.0;
  // phi(tau) = (3 - tau)^2 has constant second derivative 2, and the
  // velocity prefactor is 1 for gamma * n = 1.
  CHECK(std::fabs(perron::flow_rate_estimate(a, x, 1, 1.0, 1.0, 1) - 2.0) <=
        1e-3);
}

TEST_CASE("combined_method refines the 5x5 estimate to high accuracy") {
  auto out = perron::combined_method(testsup::ex53(), 100, 20, 0.2, 100.0,
                                     0.01);
  CHECK(out.order.detected_nu == 3);
  CHECK(out.j == 4);
  CHECK(std::fabs(out.deep.s_n - 2.0203) <= 5e-4);
  CHECK(std::fabs(out.flow.s_refined - 2.0) <= 1e-5);
  // The refinement improves on the raw deep estimate by orders of magnitude.
  CHECK(std::fabs(out.flow.s_refined - 2.0) <
        1e-3 * std::fabs(out.deep.s_n - 2.0));
}

TEST_CASE("combined_method on the 7x7 reference matrix") {
  auto out = perron::combined_method(testsup::ex81(), 100, 20, 0.2, 150.0,
                                     0.01);
  CHECK(out.order.detected_nu == 3);
  CHECK(out.j == 7);
  CHECK(std::fabs(out.flow.s_refined - 2.000005037291918) <= 1e-5);
}

TEST_CASE("combined_method propagates undetermined detection as an error") {
  auto a = DenseMatrix::from_rows(
      {{1.0, -3.0, 0.2}, {3.0, 1.0, 0.0}, {0.1, 0.0, 0.5}});
  CHECK_THROWS_AS(perron::combined_method(a, 60, 10, 0.2, 10.0, 0.01),
                  perron::CyclicOrderUnresolvedError);
}

TEST_CASE("combined_method validates the depth split") {
  CHECK_THROWS_AS(perron::combined_method(testsup::ex53(), 20, 20, 0.2, 1.0,
                                          0.01),
                  perron::InvalidParameterError);
}

TEST_CASE("stable_flow_gamma gives a usable rate for stiff orders") {
  auto a = testsup::ex53();
  auto shallow = perron::run_iteration(a, DenseMatrix::identity(5), 20, 1.0);
  auto x = shallow.w_n.column(3);
  double g = perron::stable_flow_gamma(a, x, 3, 2.0203, 20, 0.01);
  CHECK(g > 0.0);
  CHECK(g <= 1.0);
  // The suggested rate must actually integrate without escaping.
  auto res = perron::gradient_flow(a, x, 3, 2.0203, g, 20, 50.0, 0.01);
  CHECK(std::fabs(res.s_refined - 2.0) <= 0.05);
}
