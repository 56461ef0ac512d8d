// Acceptance gate: nine end-to-end criteria, one pass/fail line each.
// Exits nonzero if any criterion fails.

#include <cmath>
#include <cstdio>
#include <exception>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "perron/cyclic_order.hpp"
#include "perron/dense_core.hpp"
#include "perron/ensemble.hpp"
#include "perron/geigenspace.hpp"
#include "perron/iter_scheme.hpp"
#include "perron/oracle.hpp"
#include "perron/ortho.hpp"
#include "perron/refine.hpp"
#include "test_support.hpp"

using perron::DenseMatrix;

namespace {

struct Outcome {
  bool ok = true;
  std::string detail;
};

void expect(Outcome& out, bool cond, const std::string& what) {
  if (!cond) {
    out.ok = false;
    if (!out.detail.empty()) out.detail += "; ";
    out.detail += what;
  }
}

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

// --- criterion 1: eigenvalue estimates on the 5x5 reference matrix -------

Outcome criterion1() {
  Outcome out;
  auto a = testsup::ex53();
  auto v = DenseMatrix::identity(5);
  const int depths[5] = {10, 50, 100, 200, 500};
  const double expected[5] = {2.2160, 2.0413, 2.0203, 2.0101, 2.0040};
  for (int i = 0; i < 5; ++i) {
    auto est = perron::run_iteration(a, v, depths[i], 1.0);
    expect(out, std::fabs(est.s_n - expected[i]) <= 5e-4,
           "s_" + std::to_string(depths[i]) + " = " + fmt(est.s_n) +
               " not within 5e-4 of " + fmt(expected[i]));
  }
  return out;
}

// --- criterion 2: fast semisimple convergence on the 7x7 matrix ----------

Outcome criterion2() {
  Outcome out;
  auto a = testsup::ex51();
  auto v = DenseMatrix::identity(7);
  double e8 = testsup::rel_err(perron::run_iteration(a, v, 8, 1.0).s_n, 2.0);
  double e10 =
      testsup::rel_err(perron::run_iteration(a, v, 10, 1.0).s_n, 2.0);
  expect(out, e8 <= 1e-9, "relative error " + fmt(e8) + " at depth 8");
  expect(out, e10 <= 1e-11, "relative error " + fmt(e10) + " at depth 10");
  return out;
}

// --- criterion 3: cyclic-order detection on the 5x5 matrix ---------------

Outcome criterion3() {
  Outcome out;
  auto a = testsup::ex53();
  auto rep = perron::detect_cyclic_order(a, 100, perron::default_probe_grid(),
                                         0.10);
  expect(out, std::fabs(rep.s_approx - 2.0203) <= 5e-4,
         "deep estimate " + fmt(rep.s_approx));
  expect(out, rep.j == 4, "dominant column " + std::to_string(rep.j));
  expect(out, rep.detected_nu == 3,
         "detected order " + std::to_string(rep.detected_nu));

  // Probe ratios at depth 6 against the printed values.
  auto w6 = perron::run_iteration(a, DenseMatrix::identity(5), 6, 1.0)
                .w_n.column(rep.j - 1);
  const double expected[3] = {4.1960, 1.5385, 0.0372};
  for (int k = 1; k <= 3; ++k) {
    double b = perron::beta(a, rep.s_approx, w6, 6, k);
    expect(out, std::fabs(b - expected[k - 1]) <= 1e-2,
           "beta_" + std::to_string(k) + " = " + fmt(b));
  }
  return out;
}

// --- criterion 4: gradient-flow refinement on the 5x5 matrix -------------

Outcome criterion4() {
  Outcome out;
  auto res = perron::combined_method(testsup::ex53(), 100, 20, 0.2, 100.0,
                                     0.01);
  expect(out, std::fabs(res.flow.s_refined - 2.0) <= 1e-5,
         "refined value " + fmt(res.flow.s_refined));

  // The checkpoint errors |tau - 2| at t = 0, 10, ..., 100 must decrease
  // monotonically.
  double prev = 1e300;
  int seen = 0;
  for (auto [t, tau] : res.flow.trajectory) {
    double r = std::fmod(t, 10.0);
    if (std::fabs(r) > 1e-9 && std::fabs(r - 10.0) > 1e-9) continue;
    double err = std::fabs(tau - 2.0);
    expect(out, err < prev,
           "checkpoint at t = " + fmt(t) + " did not decrease");
    prev = err;
    ++seen;
  }
  expect(out, seen == 11, "expected 11 checkpoints, saw " +
                              std::to_string(seen));
  return out;
}

// --- criterion 5: eigenspace extraction on the 7x7 matrix ----------------

Outcome criterion5() {
  Outcome out;
  auto a = testsup::ex81();
  auto res = perron::combined_method(a, 100, 20, 0.2, 150.0, 0.01);
  expect(out, std::fabs(res.flow.s_refined - 2.0) <= 1e-4,
         "refined shift " + fmt(res.flow.s_refined));
  expect(out, res.order.detected_nu == 3,
         "detected order " + std::to_string(res.order.detected_nu));
  if (!out.ok) return out;

  auto basis = perron::compute_basis(a, res.flow.s_refined,
                                     res.order.detected_nu, 20,
                                     DenseMatrix::identity(7));
  auto y_span = perron::pivoted_orthonormalize(testsup::ex81_y(), 1e-8).q;
  double gap = perron::subspace_gap(basis.basis, y_span);
  expect(out, gap <= 1e-2, "subspace gap " + fmt(gap));
  return out;
}

// --- criterion 6: randomized end-to-end pipeline -------------------------

Outcome criterion6() {
  Outcome out;
  std::mt19937_64 rng(testsup::env_seed());
  const int draws = 50;
  int determined = 0, mismatches = 0;
  double worst_s = 0.0, worst_gap = 0.0;

  for (int trial = 0; trial < draws; ++trial) {
    auto planted = perron::draw_perron_like(rng);
    perron::CyclicOrderReport rep;
    try {
      rep = perron::detect_cyclic_order(planted.a, 200,
                                        perron::default_probe_grid(200), 0.10);
    } catch (const perron::Error&) {
      continue;  // counts as undetermined
    }
    if (rep.detected_nu == 0) continue;
    ++determined;
    if (rep.detected_nu != planted.nu) {
      ++mismatches;
      expect(out, false,
             "draw " + std::to_string(trial) + " detected " +
                 std::to_string(rep.detected_nu) + " but planted " +
                 std::to_string(planted.nu));
      continue;
    }

    // Refine with a stability-chosen flow scale; shrink on escape.
    const int n_probe = 30;
    auto shallow = perron::run_iteration(planted.a,
                                         DenseMatrix::identity(planted.m),
                                         n_probe, 1.0);
    auto x = shallow.w_n.column(rep.j - 1);
    double gamma = perron::stable_flow_gamma(planted.a, x, rep.detected_nu,
                                             rep.s_approx, n_probe, 0.01);
    perron::RefinementResult flow;
    bool flowed = false;
    for (int attempt = 0; attempt < 5 && !flowed; ++attempt) {
      try {
        flow = perron::gradient_flow(planted.a, x, rep.detected_nu,
                                     rep.s_approx, gamma, n_probe, 200.0,
                                     0.01);
        flowed = true;
      } catch (const perron::DivergenceError&) {
        gamma *= 0.4;
      }
    }
    if (!flowed) {
      expect(out, false, "draw " + std::to_string(trial) + " flow diverged");
      continue;
    }
    double s_err = std::fabs(flow.s_refined - planted.s);
    worst_s = std::max(worst_s, s_err);
    expect(out, s_err <= 1e-3,
           "draw " + std::to_string(trial) + " eigenvalue error " +
               fmt(s_err));

    auto basis = perron::compute_basis(planted.a, flow.s_refined,
                                       rep.detected_nu, n_probe,
                                       DenseMatrix::identity(planted.m));
    auto oracle_rep = perron::analyze(planted.a);
    double gap = perron::subspace_gap(basis.basis, oracle_rep.ge_basis);
    worst_gap = std::max(worst_gap, gap);
    expect(out, gap <= 1e-3,
           "draw " + std::to_string(trial) + " subspace gap " + fmt(gap));
  }

  expect(out, determined >= (draws * 4) / 5,
         "only " + std::to_string(determined) + "/" + std::to_string(draws) +
             " draws determined");
  expect(out, mismatches == 0,
         std::to_string(mismatches) + " order mismatches");
  if (out.ok)
    out.detail = std::to_string(determined) + "/" + std::to_string(draws) +
                 " determined, worst eigenvalue error " + fmt(worst_s) +
                 ", worst gap " + fmt(worst_gap);
  return out;
}

// --- criterion 7: analytic derivative against centered differences -------

Outcome criterion7() {
  Outcome out;
  std::mt19937_64 rng(testsup::env_seed() + 7);
  const double h = 1e-6;
  double worst = 0.0;
  for (int trial = 0; trial < 100; ++trial) {
    auto a = testsup::random_gaussian(rng, 4, 4);
    auto x = testsup::random_gaussian(rng, 4, 1);
    int nu = 1 + static_cast<int>(rng() % 3);
    std::uniform_real_distribution<double> tau_dist(-2.0, 2.0);
    double tau = tau_dist(rng);
    double exact = perron::phi_prime(a, tau, x, nu);
    double fd = (perron::phi(a, tau + h, x, nu) -
                 perron::phi(a, tau - h, x, nu)) /
                (2.0 * h);
    double rel = std::fabs(exact - fd) / std::max(1.0, std::fabs(exact));
    worst = std::max(worst, rel);
  }
  expect(out, worst <= 1e-5, "worst relative deviation " + fmt(worst));
  if (out.ok) out.detail = "worst relative deviation " + fmt(worst);
  return out;
}

// --- criterion 8: nonnegative data keeps nonnegative iterates ------------

Outcome criterion8() {
  Outcome out;
  std::mt19937_64 rng(testsup::env_seed() + 8);
  double low = 0.0;
  for (int trial = 0; trial < 20; ++trial) {
    auto a = testsup::random_nonneg(rng, 6);
    auto est = perron::run_iteration(a, DenseMatrix::identity(6), 60, 1.0);
    for (int i = 0; i < 6; ++i)
      for (int j = 0; j < 6; ++j) low = std::min(low, est.w_n(i, j));
  }
  expect(out, low >= -1e-8, "lowest entry " + fmt(low));
  if (out.ok) out.detail = "lowest entry " + fmt(low);
  return out;
}

// --- criterion 9: exactness and scale invariance -------------------------

Outcome criterion9() {
  Outcome out;
  DenseMatrix a(4, 4);
  for (int i = 0; i < 4; ++i) a(i, i) = 2.0;
  for (int n = 1; n <= 12; ++n) {
    auto est = perron::run_iteration(a, DenseMatrix::identity(4), n, 1.0);
    expect(out, est.s_n == 2.0,
           "depth " + std::to_string(n) + " estimate " + fmt(est.s_n) +
               " is not exactly 2");
  }

  std::mt19937_64 rng(testsup::env_seed() + 9);
  auto b = testsup::random_gaussian(rng, 5, 5);
  auto v = testsup::random_gaussian(rng, 5, 3);
  auto scaled = v;
  for (int i = 0; i < 5; ++i)
    for (int j = 0; j < 3; ++j) scaled(i, j) *= 10.0;
  auto e1 = perron::run_iteration(b, v, 8, 0.5);
  auto e2 = perron::run_iteration(b, scaled, 8, 0.5);
  expect(out, std::fabs(e1.s_n - e2.s_n) <= 1e-12,
         "estimates differ by " + fmt(std::fabs(e1.s_n - e2.s_n)));
  expect(out, testsup::max_abs_diff(e1.w_n, e2.w_n) <= 1e-12,
         "iterates differ by " + fmt(testsup::max_abs_diff(e1.w_n, e2.w_n)));
  return out;
}

}  // namespace

int main() {
  struct Entry {
    int id;
    const char* label;
    std::function<Outcome()> body;
  };
  const std::vector<Entry> entries = {
      {1, "principal eigenvalue estimates on the 5x5 reference matrix",
       criterion1},
      {2, "semisimple convergence rate on the 7x7 reference matrix",
       criterion2},
      {3, "cyclic-order detection and probe ratios on the 5x5 matrix",
       criterion3},
      {4, "gradient-flow refinement trajectory on the 5x5 matrix",
       criterion4},
      {5, "generalized eigenspace extraction on the 7x7 matrix", criterion5},
      {6, "randomized end-to-end pipeline on planted matrices", criterion6},
      {7, "analytic objective derivative versus centered differences",
       criterion7},
      {8, "nonnegative invariance of the iteration", criterion8},
      {9, "exactness on scalar matrices and scale invariance", criterion9},
  };

  int failures = 0;
  for (const auto& e : entries) {
    Outcome out;
    try {
      out = e.body();
    } catch (const std::exception& ex) {
      out.ok = false;
      out.detail = std::string("exception: ") + ex.what();
    }
    if (out.ok) {
      std::printf("PASS criterion %d: %s%s%s\n", e.id, e.label,
                  out.detail.empty() ? "" : " — ", out.detail.c_str());
    } else {
      ++failures;
      std::printf("FAIL criterion %d: %s — %s\n", e.id, e.label,
                  out.detail.c_str());
    }
    std::fflush(stdout);
  }
  return failures == 0 ? 0 : 1;
}
