#pragma once

// Independent brute-force oracles for the test suites.  Everything here
// recomputes from first principles (naive loops, subset enumeration) and
// must not share code with the library paths it checks.

#include <cmath>
#include <cstdint>
#include <vector>

#include "wlab/grid_function.hpp"
#include "wlab/rng.hpp"

namespace oracle {

// ||| f |||: exhaustive max over all cell subsets (<= 16 cells).
double triple_norm_subsets(const wlab::GridFunction& f,
                           const wlab::GridFunction& nu, double p, double r);

// sup_{E subset Q} (|E|/|Q|) (w(Q)/w(E))^(1/p) over cell subsets of a cube.
double doublebar_inner_subsets(const std::vector<double>& cell_values,
                               double p);

// Naive O(N^2)-style maximal operators, cell-sup convention, 1D.
std::vector<double> maximal_uncentered_1d(const wlab::GridFunction& f);
std::vector<double> maximal_weighted_1d(const wlab::GridFunction& f,
                                        const wlab::GridFunction& u);
std::vector<double> maximal_dyadic_1d(const wlab::GridFunction& f,
                                      bool third);
std::vector<double> maximal_uncentered_2d(const wlab::GridFunction& f);

// Random positive step function with dyadic-quantized values (cube sums are
// then exact in binary64, so optimized kernels must match bit for bit).
wlab::GridFunction random_quantized(const wlab::Window& w, wlab::Rng& rng);
// Generic positive random function / weight.
wlab::GridFunction random_positive(const wlab::Window& w, wlab::Rng& rng,
                                   double lo = 0.1, double hi = 10.0);
// Random characteristic function of a union of cell runs.
wlab::GridFunction random_characteristic(const wlab::Window& w,
                                         wlab::Rng& rng);

}  // namespace oracle
