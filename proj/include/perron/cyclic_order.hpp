#pragma once

#include <vector>

#include "perron/iter_scheme.hpp"
#include "perron/matrix.hpp"

namespace perron {

// Report of the cyclic-order probe. For the dominant column w_j of a deep
// iterate, the normalized annihilation ratios
//   beta_k = psi_k / psi_{k-1},  psi_k = n^(2k) ||(A - s I)^k w_j||^2
// stay near 1 for k below the cyclic order and collapse toward 0 at it.
struct CyclicOrderReport {
  int capital_n = 0;     // depth of the run that produced s_approx and j
  double s_approx = 0.0; // principal-eigenvalue estimate of the deep run
  double s_probe = 0.0;  // shift the ladders used: the Richardson-
                         // extrapolated trace value, which cancels the
                         // leading O(1/N) bias of s_approx. The collapse
                         // ratio scales like (n nu (shift - s))^2, so this
                         // is what makes deep probe rows usable.
  int j = 0;             // dominant column of the deep iterate (1-based)
  double epsilon = 0.0;  // dichotomy threshold
  std::vector<int> grid; // probe depths (>= 2 of them)
  std::vector<std::vector<double>> beta_grid;  // [row][k-1], k = 1..m;
                                               // NaN once a ladder dies
  std::vector<int> row_orders;  // per-row dichotomy outcome, 0 = inconclusive
  int detected_nu = 0;          // 0 = undetermined
  bool stable = false;          // whether the detection was certified
  std::vector<int> confirmation_depths;  // extra deep runs used to certify a
                                         // single-row candidate
};

// Index (1-based) of the column of w with the largest Euclidean norm,
// smallest index on ties. Throws DegenerateInputError when w is zero.
int select_dominant_column(const DenseMatrix& w);

// psi_k = n^(2k) ||(A - s_bar I)^k w||^2 for a column vector w.
double psi_bar(const DenseMatrix& a, double s_bar, const DenseMatrix& w_col,
               int n, int k);

// beta_k = psi_k / psi_{k-1}; beta_0 is 1 by convention. Throws
// DegenerateRatioError when the denominator falls below 1e-300 (the column
// was already annihilated at power k-1).
double beta(const DenseMatrix& a, double s_bar, const DenseMatrix& w_col,
            int n, int k);

// The shallow probe band {4, ..., 10} used by the worked examples.
std::vector<int> default_probe_grid();

// The production default for a deep run of the given depth: the shallow
// band plus the deep confirmation rows {16, 32, 64}, keeping only depths
// strictly below capital_n. Deep rows matter on skewed chain geometry,
// where the sub-order ratios approach 1 only like 1/n; they stay reliable
// because the ladders are evaluated at the bias-cancelled probe shift.
std::vector<int> default_probe_grid(int capital_n);

// Full detection: deep run at capital_n for the shift and dominant column,
// beta ladders over the probe grid, dichotomy per row, then a two-tier
// decision. Tier 1 accepts an order seen consistently on at least two rows
// (strictly ahead of any rival). When the dichotomy is clean on a single row
// only, tier 2 re-derives the shift at depths capital_n + 5 and
// capital_n + 10 and accepts the candidate only if it reproduces under both.
// Everything else is reported as undetermined (detected_nu == 0).
CyclicOrderReport detect_cyclic_order(const DenseMatrix& a, int capital_n,
                                      const std::vector<int>& grid,
                                      double epsilon, double gamma = 1.0);

// Same, reusing an already-computed deep run (avoids repeating the most
// expensive step when the caller already has it).
CyclicOrderReport detect_cyclic_order_from(const DenseMatrix& a,
                                           const SpectralEstimate& deep,
                                           const std::vector<int>& grid,
                                           double epsilon);

}  // namespace perron
