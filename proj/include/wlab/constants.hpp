#pragma once

#include <optional>
#include <string>
#include <vector>

#include "wlab/errors.hpp"

namespace wlab {

// Value carried as a natural log; the explicit constant chains reach
// exponents around A^(2p) and overflow binary64 immediately.
struct LogValue {
    double ln = 0.0;

    static LogValue from_value(double v);
    static LogValue from_ln(double l) { return {l}; }

    LogValue operator*(LogValue o) const { return {ln + o.ln}; }
    LogValue operator/(LogValue o) const { return {ln - o.ln}; }
    LogValue pow(double e) const { return {ln * e}; }
    LogValue plus(LogValue o) const;  // log-sum-exp

    double log10() const { return ln / 2.302585092994045684; }
    double value() const;  // may overflow to +inf
    bool operator<(LogValue o) const { return ln < o.ln; }
};

struct ConstantsConfig {
    // A_1 constant parameter of (Mf)^delta ("c_n"); inherited from a citation
    // without a number, so it is configuration, default 2*3^n, non-normative.
    std::optional<double> c_n_override;
    // Marcinkiewicz interpolation constant in the sparse-vs-maximal bound.
    double c_npe = 1.0;
    bool c_npe_is_default = true;
    // Decimal digits for the high-precision cross-check harness.
    int precision = 50;

    double c_n(int n) const;
};

struct CmnpResult {
    LogValue value;
    double delta;  // argmin
};

// c_{m,n,p} = inf_delta (c_n/(1-delta))^(mp/delta), dense grid plus
// golden-section refinement, delta clamped to [1e-6, 1-1e-6].
CmnpResult c_mnp(int m, int n, double p, const ConstantsConfig& cfg);

// E^n_{r,p}(A, B): the full Sawyer constant chain.  A = [u]_{A_p^R} (or
// [u]_{A_1} at p = 1), B = [uv^p]_{A_r^R}; r = 1 routes through r = 2 with
// B |-> sqrt(B) where the given B is then read as [uv^p]_{A_1}.
LogValue script_E(int n, double r, double p, double A, double B,
                  const ConstantsConfig& cfg);

// Inner chain C^n_{r,p}(A, B) (the dyadic C_{u,v} bound).
LogValue chain_C(int n, double r, double p, double A, double B,
                 const ConstantsConfig& cfg);

enum class TheoremId { Sawyer, ProdHL, MSawyer, SparseMax, DyadicCuv };

TheoremId theorem_id_from_string(const std::string& s);
std::string to_string(TheoremId id);

struct TheoremInputs {
    int n = 1;
    // sawyer / dyadic_Cuv
    std::optional<double> p, r, A, B;
    // prodhl / msawyer: per-component tuples
    std::vector<double> p_list, A_list, B_list, s_list;
    // sparsemax
    std::optional<double> epsilon, eta, rh_weighted;
    std::vector<std::pair<double, double>> W_norms;  // (r, ||W||_{A_r^R})
};

LogValue theorem_constant(TheoremId id, const TheoremInputs& in,
                          const ConstantsConfig& cfg);

}  // namespace wlab
