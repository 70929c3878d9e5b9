#pragma once

#include <span>

#include "wlab/exponents.hpp"
#include "wlab/grid_function.hpp"

namespace wlab {

// Weight-class constants, each an exact maximum over every lattice cube of
// the window.  Inner suprema over subsets E of a cube are evaluated by
// scanning complete value-level prefixes of the cube's cells, which attains
// the measurable-set supremum (the objective is unimodal in the level-set
// mass between group boundaries).

double a1_constant(const GridFunction& w);
double ap_constant(const GridFunction& w, double p);  // p > 1

// Restricted weak type constants [w]_{A_p^R} and ||w||_{A_p^R}.
double apr_bracket(const GridFunction& w, double p);
double apr_double(const GridFunction& w, double p);

struct AprPair {
    double bracket;
    double double_bar;
};
AprPair apr_both(const GridFunction& w, double p);

struct CubeArgmax {
    double value;
    LatticeCube cube;
};
CubeArgmax apr_bracket_argmax(const GridFunction& w, double p);

// Fujii-Wilson A_infty constant sup_Q (1/w(Q)) int_Q M(w chi_Q); the inner
// maximal restricts to sub-cubes of Q, so the cost is quadratic in |Q|.
double fujii_wilson(const GridFunction& w);

double rh_constant(const GridFunction& w, double s);  // s > 1
double rh_inf(const GridFunction& w);
// [g]_{RH_infty(w)} = sup_Q (w(Q)/gw(Q)) * esssup_Q g; pass g = v^-eps.
double rh_inf_weighted(const GridFunction& g, const GridFunction& w);

// [v]_{A_p(u)}; p = 1 uses the essinf form.
double base_weighted_constant(const GridFunction& v, const GridFunction& u,
                              double p);

enum class MultilinearVariant { Bracket, DoubleBar };

double multilinear_apr(const WeightVector& wv, const ExponentTuple& P,
                       MultilinearVariant variant);
CubeArgmax multilinear_apr_argmax(const WeightVector& wv,
                                  const ExponentTuple& P);
double multilinear_ap(const WeightVector& wv, const ExponentTuple& P);

// Smallest r on a grid with ap_constant(w, r) <= cap; reporting helper for
// the RH_infty -> A_r question, asserts nothing.
struct ApExponentScan {
    double r = 0.0;
    double value = 0.0;
    bool found = false;
};
ApExponentScan smallest_ap_exponent(const GridFunction& w,
                                    std::span<const double> grid, double cap);

}  // namespace wlab
