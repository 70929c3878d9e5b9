#include "wlab/constants.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "wlab/exponents.hpp"

namespace wlab {

LogValue LogValue::from_value(double v) {
    if (!(v > 0)) throw BadExponent("LogValue requires a positive value");
    return {std::log(v)};
}

LogValue LogValue::plus(LogValue o) const {
    double a = std::max(ln, o.ln), b = std::min(ln, o.ln);
    return {a + std::log1p(std::exp(b - a))};
}

double LogValue::value() const { return std::exp(ln); }

double ConstantsConfig::c_n(int n) const {
    if (c_n_override) return *c_n_override;
    return 2.0 * std::pow(3.0, n);
}

namespace {

constexpr double kDeltaLo = 1e-6;
constexpr double kDeltaHi = 1.0 - 1e-6;

double cmnp_ln(double delta, int m, int n, double p,
               const ConstantsConfig& cfg) {
    return m * p / delta * (std::log(cfg.c_n(n)) - std::log1p(-delta));
}

}  // namespace

CmnpResult c_mnp(int m, int n, double p, const ConstantsConfig& cfg) {
    if (m < 1 || !(p >= 1)) throw BadExponent("c_mnp requires m >= 1, p >= 1");
    const int grid = 10000;
    double best_d = kDeltaLo;
    double best = cmnp_ln(kDeltaLo, m, n, p, cfg);
    for (int i = 1; i <= grid; ++i) {
        double d = kDeltaLo + (kDeltaHi - kDeltaLo) * i / grid;
        double v = cmnp_ln(d, m, n, p, cfg);
        if (v < best) {
            best = v;
            best_d = d;
        }
    }
    // Golden-section refinement around the grid minimum.
    double step = (kDeltaHi - kDeltaLo) / grid;
    double a = std::max(kDeltaLo, best_d - step);
    double b = std::min(kDeltaHi, best_d + step);
    const double phi = 0.6180339887498949;
    double x1 = b - phi * (b - a), x2 = a + phi * (b - a);
    double f1 = cmnp_ln(x1, m, n, p, cfg), f2 = cmnp_ln(x2, m, n, p, cfg);
    for (int it = 0; it < 80; ++it) {
        if (f1 < f2) {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - phi * (b - a);
            f1 = cmnp_ln(x1, m, n, p, cfg);
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + phi * (b - a);
            f2 = cmnp_ln(x2, m, n, p, cfg);
        }
    }
    double d = f1 < f2 ? x1 : x2;
    double v = std::min(f1, f2);
    if (best < v) {
        d = best_d;
        v = best;
    }
    return {LogValue::from_ln(v), d};
}

LogValue chain_C(int n, double r, double p, double A, double B,
                 const ConstantsConfig& cfg) {
    if (!(r > 1)) throw BadExponent("chain_C requires r > 1");
    if (!(p >= 1) || !(A >= 1) || !(B >= 1))
        throw BadExponent("chain_C requires p >= 1 and constants >= 1");
    const double ln2 = std::log(2.0);
    double c_pn = std::pow(2.0 * p - 1.0, 2.0 * p - 1.0) * cfg.c_n(n);
    double qprime = std::pow(2.0, n + 2) * r * c_pn * std::pow(A, 2.0 * p);
    double d_u_log2 = p * std::log2(std::pow(2.0, n) * p * A);
    double inner = (n + 5) * ln2 + std::log(r) + std::log(c_pn) +
                   2.0 * p * std::log(A) + 5.0 * d_u_log2 * std::log(40.0);
    double ln = (2.0 + n * r) * ln2 + (4.0 * r - 2.0) * std::log(2.0 * r - 1.0) +
                r * std::log(r) + 5.0 * r * std::log(B) + qprime * inner;
    return LogValue::from_ln(ln);
}

LogValue script_E(int n, double r, double p, double A, double B,
                  const ConstantsConfig& cfg) {
    if (!(p >= 1) || !(A >= 1) || !(B >= 1))
        throw BadExponent("script_E requires p >= 1 and constants >= 1");
    if (!(r >= 1)) throw BadExponent("script_E requires r >= 1");
    if (r == 1.0) {
        // [uv^p] in A_1: route through r = 2 with [uv^p]_{A_2^R} <= sqrt(B).
        return script_E(n, 2.0, p, A, std::sqrt(B), cfg);
    }
    LogValue C = chain_C(n, r, p, A, B, cfg);
    const double ln24 = std::log(24.0);
    if (p == 1.0)
        return LogValue::from_ln(n * ln24 + std::log(A) + C.ln);
    double pc = conjugate_exponent(p);
    return LogValue::from_ln(std::log(4.0) + n * ln24 + std::log(pc) +
                             std::log(A) + C.ln / p);
}

TheoremId theorem_id_from_string(const std::string& s) {
    if (s == "sawyer") return TheoremId::Sawyer;
    if (s == "prodhl") return TheoremId::ProdHL;
    if (s == "msawyer") return TheoremId::MSawyer;
    if (s == "sparsemax") return TheoremId::SparseMax;
    if (s == "dyadic_Cuv") return TheoremId::DyadicCuv;
    throw ConfigError("unknown theorem id: " + s);
}

std::string to_string(TheoremId id) {
    switch (id) {
        case TheoremId::Sawyer: return "sawyer";
        case TheoremId::ProdHL: return "prodhl";
        case TheoremId::MSawyer: return "msawyer";
        case TheoremId::SparseMax: return "sparsemax";
        case TheoremId::DyadicCuv: return "dyadic_Cuv";
    }
    return "?";
}

LogValue theorem_constant(TheoremId id, const TheoremInputs& in,
                          const ConstantsConfig& cfg) {
    switch (id) {
        case TheoremId::Sawyer: {
            if (!in.p || !in.r || !in.A || !in.B)
                throw MissingInput("sawyer constant needs p, r, A, B");
            return script_E(in.n, *in.r, *in.p, *in.A, *in.B, cfg);
        }
        case TheoremId::DyadicCuv: {
            if (!in.p || !in.r || !in.A || !in.B)
                throw MissingInput("dyadic_Cuv needs p, r, A, B");
            return chain_C(in.n, *in.r, *in.p, *in.A, *in.B, cfg);
        }
        case TheoremId::ProdHL:
        case TheoremId::MSawyer: {
            std::size_t m = in.p_list.size();
            if (m == 0 || in.A_list.size() != m || in.B_list.size() != m ||
                in.s_list.size() != m)
                throw MissingInput("product constant needs p/A/B/s tuples");
            double invp = 0;
            for (double pi : in.p_list) invp += 1.0 / pi;
            double p = 1.0 / invp;
            // 2^(m+1) / (2^p - 1)^(1/p) * prod E^n_{s_i, p_i}(A_i, B_i)
            double ln = (m + 1) * std::log(2.0) -
                        std::log(std::exp2(p) - 1.0) / p;
            for (std::size_t i = 0; i < m; ++i)
                ln += script_E(in.n, in.s_list[i], in.p_list[i], in.A_list[i],
                               in.B_list[i], cfg)
                          .ln;
            return LogValue::from_ln(ln);
        }
        case TheoremId::SparseMax: {
            if (!in.p || !in.epsilon || !in.eta || !in.rh_weighted ||
                in.W_norms.empty())
                throw MissingInput(
                    "sparsemax constant needs p, epsilon, eta, rh_weighted, "
                    "W_norms");
            double p = *in.p, eps = *in.epsilon;
            if (!(eps > 0) || !(eps < p) || eps > 1)
                throw BadExponent("sparsemax requires 0 < eps <= 1, eps < p");
            double best = std::numeric_limits<double>::infinity();
            for (auto [r, Wn] : in.W_norms) {
                double ln = std::log(p / (p - eps)) +
                            r * (in.n * std::log(3.0) - std::log(*in.eta) +
                                 std::log(Wn)) +
                            std::log(cfg.c_npe) +
                            (1.0 - eps / p) * std::log(*in.rh_weighted);
                best = std::min(best, ln / eps);
            }
            return LogValue::from_ln(best);
        }
    }
    throw ConfigError("unhandled theorem id");
}

}  // namespace wlab
