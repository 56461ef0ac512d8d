#pragma once

#include <random>

#include "perron/matrix.hpp"

namespace perron {

// A randomly drawn Perron-like test matrix with known ground truth, built as
// S J S^{-1} from an explicit real Jordan-form J.
struct PlantedPerron {
  DenseMatrix a;
  int m = 0;        // dimension
  double s = 0.0;   // dominant eigenvalue
  int nu = 0;       // cyclic order (largest principal Jordan block)
  int ell = 0;      // algebraic multiplicity of s
  double gap = 0.0; // s minus the largest other real part
  double cond = 0.0;  // condition number planted into S
  DenseMatrix ge;   // m x ell: columns spanning the principal generalized
                    // eigenspace exactly
};

// Haar-like random orthogonal matrix (orthonormalized Gaussian).
DenseMatrix random_orthogonal(std::mt19937_64& rng, int m);

// Draw a random Perron-like matrix: dimension in [min_m, max_m], cyclic
// order in [1, min(max_nu, m-1)], dominant eigenvalue in [1, 2], real-part
// gap in [min_gap, max_gap], similarity transform with condition number
// log-uniform in [1, max_cond]. The spectrum always contains at least one
// non-principal eigenvalue; complex pairs appear as real 2x2 blocks.
PlantedPerron draw_perron_like(std::mt19937_64& rng, int min_m = 3,
                               int max_m = 6, int max_nu = 3,
                               double min_gap = 0.5, double max_gap = 1.5,
                               double max_cond = 50.0);

}  // namespace perron
