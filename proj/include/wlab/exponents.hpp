#pragma once

#include <cmath>
#include <limits>
#include <optional>
#include <vector>

#include "wlab/errors.hpp"
#include "wlab/grid_function.hpp"

namespace wlab {

inline double conjugate_exponent(double p) {
    if (!(p >= 1)) throw BadExponent("conjugate of exponent < 1");
    if (p == 1) return std::numeric_limits<double>::infinity();
    return p / (p - 1.0);
}

// Exponent data (p_1,...,p_m) with the harmonic combination
// 1/p = sum 1/p_i computed, never stored independently.
struct ExponentTuple {
    std::vector<double> p_list;

    // Auxiliary named slots used by individual theorems.
    std::optional<double> r, q, s, epsilon, theta, delta;

    explicit ExponentTuple(std::vector<double> ps) : p_list(std::move(ps)) {
        if (p_list.empty()) throw BadExponent("empty exponent tuple");
        for (double pi : p_list)
            if (!(pi >= 1) || !std::isfinite(pi))
                throw BadExponent("exponents must lie in [1, infinity)");
    }

    std::size_t m() const { return p_list.size(); }

    double p() const {
        double inv = 0;
        for (double pi : p_list) inv += 1.0 / pi;
        return 1.0 / inv;
    }

    double conjugate(std::size_t i) const { return conjugate_exponent(p_list[i]); }
};

// Weight tuple (w_1,...,w_m) plus optional target weight nu; when absent the
// canonical nu_w = prod w_i^{p/p_i} is used.
struct WeightVector {
    std::vector<GridFunction> weights;
    std::optional<GridFunction> nu;

    GridFunction nu_or_default(const ExponentTuple& P) const {
        if (nu) return *nu;
        if (weights.size() != P.m())
            throw DimensionMismatch("weight count != exponent count");
        double p = P.p();
        GridFunction out(weights[0].window(), 1.0);
        for (std::size_t i = 0; i < weights.size(); ++i) {
            GridFunction wi = weights[i].pow(p / P.p_list[i]);
            out = GridFunction::multiply(out, wi);
        }
        return out;
    }
};

}  // namespace wlab
