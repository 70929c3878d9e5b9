#pragma once

#include <string>

#include "wlab/grid_function.hpp"
#include "wlab/rng.hpp"

#include "json.hpp"

namespace wlab::fam {

// Fixture builders for the experiment harness.  JSON descriptors follow the
// schema documented in the README:
//   weights:   ones | step{values|levels} | power{a} | mh{h,exponent} |
//              product{factors} | random{lo,hi}
//   functions: characteristic{runs} | characteristic_interval{x0,x1} |
//              step{levels} | power{a} | mh{h,exponent} | random{lo,hi}

// Exact cell averages of |x|^a on a 1D window (a > -1, a != -1 by domain);
// the antiderivative keeps boundary cells exact.
GridFunction power_abs(const Window& w, double a);

// Window split into |values| equal x-blocks.
GridFunction step_blocks(const Window& w, const std::vector<double>& values);

// Characteristic function of [x0, x1) intersected with the window; the
// endpoints are snapped to the cell lattice.
GridFunction characteristic_interval(const Window& w, double x0, double x1);

// (M h)^e, uncentered maximal.
GridFunction mh_weight(const Window& w, const GridFunction& h, double e);

// Counterexample data: h = |x|^(-n/p) outside [-1,1], v = h + chi_(-1,1).
GridFunction counterexample_h(const Window& w, double p);
GridFunction counterexample_v(const Window& w, double p);

GridFunction build_weight(const Window& w, const nlohmann::json& spec,
                          Rng& rng);
GridFunction build_function(const Window& w, const nlohmann::json& spec,
                            Rng& rng);

}  // namespace wlab::fam
