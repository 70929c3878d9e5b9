#pragma once

#include <optional>
#include <string>
#include <vector>

#include "wlab/constants.hpp"
#include "wlab/exponents.hpp"
#include "wlab/grid_function.hpp"
#include "wlab/sparse.hpp"

#include "json.hpp"

namespace wlab {

struct RatioRow {
    std::string input_id;
    double lhs = 0.0;
    double rhs = 0.0;
    double ratio = 0.0;
};

struct ConstantDetails {
    double log10_value = 0.0;
    std::string formula_id;
    nlohmann::ordered_json inputs;
};

// Result record of one inequality experiment.  pass means every per-input
// ratio respects the theoretical constant (when present) or the blow-up cap.
// runtime_seconds is informational and never serialized: reports must be
// byte-identical across thread counts.
struct RatioReport {
    std::string theorem;
    std::vector<RatioRow> rows;
    double empirical_C = 0.0;
    std::optional<ConstantDetails> constant;
    double cap = 1e12;
    std::string witness;
    bool pass = false;
    nlohmann::ordered_json extra = nlohmann::ordered_json::object();
    double runtime_seconds = 0.0;

    void finalize();  // empirical_C / witness / pass from rows
};

// ---- Theorem checks (programmatic layer) ----

// ||Mf/v||_{L^{p,inf}(u v^p)} <= C ||f||_{L^{p,1}(u)}.
RatioReport check_sawyer(const GridFunction& u, const GridFunction& v,
                         double p, std::span<const GridFunction> family,
                         double r, const ConstantsConfig& cfg);

struct CounterexampleRow {
    int L = 0;
    double ratio = 0.0;
    double closed_form = 0.0;
    double control = 0.0;  // same ratio with v = 1
};
struct CounterexampleReport {
    std::vector<CounterexampleRow> rows;
    bool strictly_increasing = false;
    bool matches_closed_form = false;  // 5% at the probed K
    bool control_flat = false;
};
CounterexampleReport check_counterexample(double p, std::span<const int> L_list,
                                          int K);

// Theorems on the m-fold product: prodhl is msawyer at v = 1.
RatioReport check_msawyer(std::span<const GridFunction> ws,
                          const GridFunction& v, const ExponentTuple& P,
                          std::span<const std::vector<GridFunction>> samples,
                          const ConstantsConfig& cfg, bool as_prodhl = false);
RatioReport check_prodhl(std::span<const GridFunction> ws,
                         const ExponentTuple& P,
                         std::span<const std::vector<GridFunction>> samples,
                         const ConstantsConfig& cfg);

// ||A_S(f)/v|| <= C ||M(f)/v||, both L^{p,inf}(w).  Throws UncertifiedFamily
// unless the family passes the max-flow check at its stated eta.
RatioReport check_sparse_domination(
    const SparseFamily& S, const GridFunction& v, const GridFunction& w,
    const ExponentTuple& P, double epsilon,
    std::span<const std::vector<GridFunction>> samples,
    const ConstantsConfig& cfg);

// ||M(f u v^(p-1))/u||_{L^{p',inf}(u)} <= C ||f||_{L^{p',1}(u v^p)}, plus the
// characterization direction apr_bracket(u,p) <= p' * char_sup * (1+tol)
// probed on characteristic inputs (computed at v = 1).
struct DualSawyerReport {
    RatioReport report;
    double char_sup = 0.0;
    double apr = 0.0;
    double p_conj = 0.0;
    bool characterization_pass = false;
};
DualSawyerReport check_dual_sawyer(const GridFunction& u,
                                   const GridFunction& v, double p,
                                   double epsilon,
                                   std::span<const GridFunction> family,
                                   const ConstantsConfig& cfg);

// Restricted weak type characterization of the curly maximal operator.
struct MultilinearReport {
    double bracket = 0.0;
    double upper_norm = 0.0;    // sup over characteristic family
    double lower_norm = 0.0;    // greedy witness value
    double upper_cap = 0.0;     // 2^(nm) 72^(n/p) bracket
    double lower_floor = 0.0;   // bracket / (1.05^m prod p_i 3^(nm))
    bool pass = false;
    bool sparse_comparable = false;  // ||M_S|| <= ||A_S|| pointwise probe
};
MultilinearReport check_multilinear_characterization(const WeightVector& wv,
                                                     const ExponentTuple& P,
                                                     int nsamples,
                                                     std::uint64_t seed);

// ---- Experiment specs and report emission ----

struct ExperimentSpec {
    std::string theorem;  // sawyer | counterexample | prodhl | msawyer |
                          // sparsemax | dualsawyer | multilinear | paper-core
    int n = 1, K = 4, L = 6;
    std::vector<double> p_list{2.0};
    double r = 2.0;
    double epsilon = 0.5;
    int samples = 25;
    std::uint64_t seed = 1;
    std::vector<int> L_list{4, 6, 8, 10, 12};
    nlohmann::json weights = nlohmann::json::array();
    nlohmann::json functions = nlohmann::json::array();
    double debug_constant_log10_shift = 0.0;  // test hook: corrupt constants

    static ExperimentSpec from_json(const nlohmann::json& j);
};

std::vector<RatioReport> run_experiments(const ExperimentSpec& spec,
                                         const ConstantsConfig& cfg);

std::string reports_to_json(std::span<const RatioReport> reports);
std::string reports_to_csv(std::span<const RatioReport> reports);

// Atomic write (temp file + rename).
void write_file_atomic(const std::string& path, const std::string& content);

}  // namespace wlab
