#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "support/highprec.hpp"
#include "wlab/constants.hpp"
#include "wlab/rng.hpp"

using namespace wlab;

namespace {

double rel_log_err(double a, double b) {
    return std::abs(a - b) / std::max(std::abs(b), 1.0);
}

}  // namespace

TEST_CASE("c_mnp: dense-grid values and monotonicity") {
    ConstantsConfig cfg;
    cfg.c_n_override = 2.0;
    auto r = c_mnp(1, 1, 1.0, cfg);
    double v = r.value.value();
    CHECK(v >= 14.0);
    CHECK(v <= 15.0);
    CHECK(std::abs(r.delta - 0.63) < 0.02);

    // Oracle: independent dense scan.
    double best = 1e300;
    for (int i = 1; i < 200000; ++i) {
        double d = i / 200000.0;
        double val = (1.0 / d) * (std::log(2.0) - std::log1p(-d));
        best = std::min(best, val);
    }
    CHECK(r.value.ln == doctest::Approx(best).epsilon(1e-8));

    // value at m = 2 exceeds value at m = 1
    CHECK(c_mnp(2, 1, 1.5, cfg).value.ln > c_mnp(1, 1, 1.5, cfg).value.ln);

    // c_n = 1: infimum is e^(mp), reached at the small-delta end.
    ConstantsConfig unit;
    unit.c_n_override = 1.0;
    auto r1 = c_mnp(1, 1, 2.0, unit);
    CHECK(r1.value.ln == doctest::Approx(2.0).epsilon(1e-4));
}

TEST_CASE("script_E: monotone in each argument on the {1,2,4,8}^2 grid") {
    ConstantsConfig cfg;
    std::vector<double> g{1, 2, 4, 8};
    for (double A : g)
        for (double B : g) {
            LogValue base = script_E(1, 2.0, 2.0, A, B, cfg);
            CHECK(std::isfinite(base.ln));
            if (A < 8)
                CHECK(script_E(1, 2.0, 2.0, 2 * A, B, cfg).ln > base.ln);
            if (B < 8)
                CHECK(script_E(1, 2.0, 2.0, A, 2 * B, cfg).ln > base.ln);
        }
}

TEST_CASE("script_E: exceeds its wrapper factor and stays finite at 1e3") {
    ConstantsConfig cfg;
    LogValue v = script_E(1, 2.0, 2.0, 1.0, 1.0, cfg);
    double wrapper = std::log(4.0) + std::log(24.0) + std::log(2.0);  // 4*24^n*p'*A
    CHECK(v.ln > wrapper);
    CHECK(std::isfinite(script_E(1, 2.0, 3.0, 1e3, 1e3, cfg).ln));
    CHECK(std::isfinite(script_E(2, 4.0, 1.0, 1e3, 1e3, cfg).ln));
}

TEST_CASE("script_E: r = 1 routes through r = 2 with a square root") {
    ConstantsConfig cfg;
    CHECK(script_E(1, 1.0, 2.0, 3.0, 9.0, cfg).ln ==
          doctest::Approx(script_E(1, 2.0, 2.0, 3.0, 3.0, cfg).ln)
              .epsilon(1e-12));
}

TEST_CASE("log-domain vs 256-bit cross-check") {
    ConstantsConfig cfg;
    cfg.c_n_override = 2.0;
    // The named spec point first.
    {
        LogValue mine = script_E(1, 2.0, 2.0, 1.0, 1.0, cfg);
        double ref = highprec::script_E_ln(1, 2.0, 2.0, 1.0, 1.0, 2.0);
        CHECK(rel_log_err(mine.ln, ref) < 1e-9);
    }
    Rng rng(5);
    for (int rep = 0; rep < 20; ++rep) {
        int n = 1 + int(rng.below(2));
        double r = rep % 5 == 0 ? 1.0 : rng.uniform(1.3, 4.0);
        double p = rep % 3 == 0 ? 1.0 : rng.uniform(1.1, 3.0);
        double A = rng.log_uniform(1.0, 1e3);
        double B = rng.log_uniform(1.0, 1e3);
        double c_n = rng.uniform(1.0, 8.0);
        ConstantsConfig c;
        c.c_n_override = c_n;
        LogValue mine = script_E(n, r, p, A, B, c);
        double ref = highprec::script_E_ln(n, r, p, A, B, c_n);
        CHECK(rel_log_err(mine.ln, ref) < 1e-9);
    }
}

TEST_CASE("theorem constants") {
    ConstantsConfig cfg;
    // prodhl with m = 1 collapses to 4 / (2^p - 1)^(1/p) * E.
    TheoremInputs in;
    in.n = 1;
    in.p_list = {2.0};
    in.A_list = {3.0};
    in.B_list = {5.0};
    in.s_list = {2.0};
    LogValue got = theorem_constant(TheoremId::ProdHL, in, cfg);
    double expect = 2.0 * std::log(2.0) - std::log(std::exp2(2.0) - 1.0) / 2.0 +
                    script_E(1, 2.0, 2.0, 3.0, 5.0, cfg).ln;
    CHECK(got.ln == doctest::Approx(expect).epsilon(1e-12));

    // sparsemax at unit inputs matches the hand expansion.
    TheoremInputs sp;
    sp.n = 1;
    sp.p = 1.0;
    sp.epsilon = 0.5;
    sp.eta = 0.5;
    sp.rh_weighted = 1.0;
    sp.W_norms = {{2.0, 1.0}};
    LogValue c = theorem_constant(TheoremId::SparseMax, sp, cfg);
    double hand = (std::log(1.0 / (1.0 - 0.5)) + 2.0 * std::log(6.0) +
                   std::log(cfg.c_npe)) /
                  0.5;
    CHECK(c.ln == doctest::Approx(hand).epsilon(1e-12));

    // Monotone in each supplied constant on a small grid.
    for (double A : {1.0, 2.0, 4.0}) {
        TheoremInputs a = in;
        a.A_list = {A};
        TheoremInputs b = in;
        b.A_list = {2 * A};
        CHECK(theorem_constant(TheoremId::ProdHL, b, cfg).ln >
              theorem_constant(TheoremId::ProdHL, a, cfg).ln);
    }

    // Missing inputs are reported.
    TheoremInputs bad;
    CHECK_THROWS_AS(theorem_constant(TheoremId::Sawyer, bad, cfg), MissingInput);
    CHECK_THROWS_AS(theorem_constant(TheoremId::SparseMax, bad, cfg),
                    MissingInput);
    CHECK_THROWS_AS(theorem_id_from_string("nope"), ConfigError);
}

TEST_CASE("dyadic C_{u,v} id exposes the inner chain") {
    ConstantsConfig cfg;
    TheoremInputs in;
    in.n = 1;
    in.p = 2.0;
    in.r = 2.0;
    in.A = 3.0;
    in.B = 5.0;
    CHECK(theorem_constant(TheoremId::DyadicCuv, in, cfg).ln ==
          doctest::Approx(chain_C(1, 2.0, 2.0, 3.0, 5.0, cfg).ln)
              .epsilon(1e-15));
    CHECK(to_string(theorem_id_from_string("dyadic_Cuv")) == "dyadic_Cuv");
}

TEST_CASE("log value plumbing") {
    LogValue a = LogValue::from_value(10.0);
    LogValue b = LogValue::from_value(0.1);
    CHECK((a * b).ln == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(a.pow(2.0).log10() == doctest::Approx(2.0).epsilon(1e-12));
    CHECK(a.plus(a).value() == doctest::Approx(20.0).epsilon(1e-12));
    CHECK_THROWS_AS(LogValue::from_value(-1.0), BadExponent);
}
