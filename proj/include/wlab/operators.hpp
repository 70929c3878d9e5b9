#pragma once

#include <span>

#include "wlab/exponents.hpp"
#include "wlab/grid_function.hpp"

namespace wlab {

// Discrete maximal operators under the cell-sup convention.
//
// Uncentered/centered kinds take the max over lattice cubes whose closure
// meets the cell's closure; in one dimension this equals sup over the cell of
// the pointwise maximal function (averages are fractional-linear in each
// endpoint).  Dyadic kinds take the max over grid cubes overlapping the cell
// with positive measure, which keeps the standard grid from leaking across 0.
enum class MaxKind {
    Uncentered,
    Centered,
    Dyadic,
    WeightedUncentered,
    WeightedCentered,
    WeightedDyadic,
};

struct MaximalVariant {
    MaxKind kind = MaxKind::Uncentered;
    std::array<std::uint8_t, 2> alpha = {0, 0};  // dyadic kinds
    const GridFunction* base = nullptr;          // weighted kinds, positive

    static MaximalVariant uncentered() { return {}; }
    static MaximalVariant centered() { return {MaxKind::Centered, {0, 0}, nullptr}; }
    static MaximalVariant dyadic(std::array<std::uint8_t, 2> a) {
        return {MaxKind::Dyadic, a, nullptr};
    }
    static MaximalVariant weighted(const GridFunction& u) {
        return {MaxKind::WeightedUncentered, {0, 0}, &u};
    }
    static MaximalVariant weighted_centered(const GridFunction& u) {
        return {MaxKind::WeightedCentered, {0, 0}, &u};
    }
    static MaximalVariant weighted_dyadic(const GridFunction& u,
                                          std::array<std::uint8_t, 2> a) {
        return {MaxKind::WeightedDyadic, a, &u};
    }
};

GridFunction maximal(const GridFunction& f, const MaximalVariant& variant);

// M^(x)(f_vec) = prod_i M f_i, all uncentered.
GridFunction product_maximal(std::span<const GridFunction> fs);

// Curly M (one shared cube per candidate); centered selects the concentric
// family of sides (2t+1)*2^-K.
GridFunction multilinear_maximal(std::span<const GridFunction> fs,
                                 bool centered = false);

// N^theta_{w,nu}: cell-sup of nu(Q)^{-theta/p} prod_i ||f_i chi_Q||^theta
// with the L^{p_i,1}(w_i) norms.  Quadratic-ish per cube; meant for small
// windows.
GridFunction n_theta(std::span<const GridFunction> fs, const WeightVector& wv,
                     const ExponentTuple& P, double theta);

}  // namespace wlab
