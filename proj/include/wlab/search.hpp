#pragma once

#include <functional>
#include <string>
#include <vector>

#include "wlab/constants.hpp"
#include "wlab/exponents.hpp"
#include "wlab/grid_function.hpp"

#include "json.hpp"

namespace wlab {

// Bound-constrained derivative-free objective.  build() may throw
// DegenerateFamily when a parameter point yields non-positive weights.
struct ParamFamily {
    std::string name;
    std::vector<std::pair<double, double>> box;  // empty: zero-dimensional
    std::function<double(std::span<const double>)> objective;
};

struct SearchResult {
    std::string objective;
    std::vector<double> best_params;
    double best_ratio = 0.0;
    std::vector<double> trace;  // best-so-far after each evaluation
    int restarts = 0;
    int evaluations = 0;
    std::uint64_t seed = 0;
};

// Coordinate polling with step halving from `restarts` seeded starts;
// deterministic given (seed, budget, restarts).  budget >= 50.
SearchResult maximize_ratio(const ParamFamily& family, int budget,
                            int restarts, std::uint64_t seed);

// Ready-made objectives.
// Kolmogorov slack (p/(p-r))^(1/r) ||f||_{p,inf} / |||f|||  >= 1.
ParamFamily kolmogorov_slack_family(const Window& win, double p, double r,
                                    int levels);
// Sawyer ratio over a step-weight family (parameters: u and v levels), the
// objective being the max ratio over a fixed seeded function family.
ParamFamily sawyer_ratio_family(const Window& win, double p, int samples,
                                std::uint64_t seed);
// Conjecture probe: nu decoupled from nu_w; parameters steer step levels of
// (w_1, w_2, nu, v); objective is the normalized conjecture ratio.
ParamFamily conjecture_family(const Window& win, const ExponentTuple& P,
                              int samples, std::uint64_t seed,
                              double apr_cap = 1e6);

nlohmann::ordered_json search_result_json(const SearchResult& r);

// VIOLATION payload: full inputs for independent replay.
nlohmann::ordered_json violation_payload(const SearchResult& r,
                                         double theoretical_log10,
                                         const nlohmann::json& spec);

struct SharpnessRow {
    std::string theorem;
    double p = 0.0;
    std::string family;
    double empirical_C = 0.0;
    double theoretical_log10 = 0.0;
    double log10_gap = 0.0;
};

// Per-(exponent, family) gap table for the Sawyer chain.
std::vector<SharpnessRow> sharpness_scan(const Window& win,
                                         std::span<const double> p_grid,
                                         const nlohmann::json& weight_specs,
                                         int samples, std::uint64_t seed,
                                         const ConstantsConfig& cfg);
std::string sharpness_csv(std::span<const SharpnessRow> rows);

}  // namespace wlab
