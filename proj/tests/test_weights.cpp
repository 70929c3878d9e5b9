#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "support/oracles.hpp"
#include "wlab/constants.hpp"
#include "wlab/detail/sweep.hpp"
#include "wlab/operators.hpp"
#include "wlab/weights.hpp"

using namespace wlab;

namespace {

const Window W2(1, 0, 0);  // two unit cells

GridFunction step12() { return GridFunction(W2, std::vector<double>{1, 2}); }

// Duplicate each cell along every axis: the same weight at resolution K+1.
GridFunction refine(const GridFunction& g) {
    const Window& w = g.window();
    Window fine(w.n, w.K + 1, w.L);
    std::vector<double> v(static_cast<std::size_t>(fine.cell_count()));
    std::int64_t m = fine.axis_cells();
    for (std::int64_t i = 0; i < fine.cell_count(); ++i) {
        auto c = fine.cell_coords(i);
        std::array<std::int64_t, 2> coarse = {
            detail::floor_div(c[0], 2), w.n == 2 ? detail::floor_div(c[1], 2) : 0};
        v[static_cast<std::size_t>(i)] = g.at_cell(coarse);
    }
    (void)m;
    return GridFunction(fine, std::move(v));
}

// Direct double-loop Fujii-Wilson value.
double fw_oracle_1d(const GridFunction& w) {
    const Window& win = w.window();
    std::int64_t m = win.axis_cells(), h = win.half();
    double best = 0.0;
    for (std::int64_t s = 1; s <= m; ++s)
        for (std::int64_t a = -h; a + s <= h; ++a) {
            double wq = 0.0;
            for (std::int64_t x = a; x < a + s; ++x) wq += w.at_cell({x, 0});
            double integral = 0.0;
            for (std::int64_t c = a; c < a + s; ++c) {
                double mval = 0.0;
                for (std::int64_t s2 = 1; s2 <= s; ++s2)
                    for (std::int64_t r = a; r + s2 <= a + s; ++r) {
                        if (r > c + 1 || r + s2 < c) continue;  // not touching
                        double sum = 0.0;
                        for (std::int64_t x = r; x < r + s2; ++x)
                            sum += w.at_cell({x, 0});
                        mval = std::max(mval, sum / double(s2));
                    }
                integral += mval;
            }
            best = std::max(best, integral / wq);
        }
    return best;
}

}  // namespace

TEST_CASE("unit weight: every constant is 1") {
    for (const Window& w : {Window(1, 2, 2), Window(2, 1, 1)}) {
        GridFunction ones(w, 1.0);
        CHECK(a1_constant(ones) == doctest::Approx(1.0).epsilon(1e-12));
        CHECK(ap_constant(ones, 2.0) == doctest::Approx(1.0).epsilon(1e-12));
        CHECK(apr_bracket(ones, 2.0) == doctest::Approx(1.0).epsilon(1e-12));
        CHECK(apr_double(ones, 2.0) == doctest::Approx(1.0).epsilon(1e-12));
        CHECK(rh_constant(ones, 2.0) == doctest::Approx(1.0).epsilon(1e-12));
        CHECK(rh_inf(ones) == doctest::Approx(1.0).epsilon(1e-12));
        CHECK(rh_inf_weighted(ones, ones) == doctest::Approx(1.0).epsilon(1e-12));
        CHECK(fujii_wilson(ones) == doctest::Approx(1.0).epsilon(1e-12));
        CHECK(base_weighted_constant(ones, ones, 2.0) ==
              doctest::Approx(1.0).epsilon(1e-12));
        WeightVector wv;
        wv.weights = {ones, ones};
        ExponentTuple P({2.0, 2.0});
        CHECK(multilinear_apr(wv, P, MultilinearVariant::Bracket) ==
              doctest::Approx(1.0).epsilon(1e-12));
        CHECK(multilinear_apr(wv, P, MultilinearVariant::DoubleBar) ==
              doctest::Approx(1.0).epsilon(1e-12));
        CHECK(multilinear_ap(wv, P) == doctest::Approx(1.0).epsilon(1e-12));
    }
}

TEST_CASE("step weight spec values") {
    auto w = step12();
    CHECK(a1_constant(w) == doctest::Approx(1.5).epsilon(1e-14));
    CHECK(ap_constant(w, 2.0) == doctest::Approx(9.0 / 8.0).epsilon(1e-14));
    CHECK(apr_bracket(w, 2.0) == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(apr_double(w, 2.0) == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(rh_inf(w) == doctest::Approx(4.0 / 3.0).epsilon(1e-14));
    GridFunction ones(W2, 1.0);
    CHECK(rh_inf_weighted(ones, w) == doctest::Approx(1.0).epsilon(1e-14));

    // Refined to K = 1: A_1 becomes 5/3 via Q = [1/2, 2).
    auto wf = refine(w);
    CHECK(a1_constant(wf) == doctest::Approx(5.0 / 3.0).epsilon(1e-14));
}

TEST_CASE("fujii-wilson agrees with the double loop and refinement fixture") {
    Rng rng(3);
    for (int rep = 0; rep < 5; ++rep) {
        Window w(1, 1, 1);
        auto g = oracle::random_positive(w, rng, 0.2, 5.0);
        CHECK(fujii_wilson(g) ==
              doctest::Approx(fw_oracle_1d(g)).epsilon(1e-12));
    }
    auto w12 = step12();
    CHECK(fujii_wilson(w12) >= 1.0 - 1e-12);
    CHECK(fujii_wilson(refine(w12)) >= fujii_wilson(w12) - 1e-12);
}

TEST_CASE("A_p^R sandwich and subset oracle") {
    Rng rng(7);
    for (double p : {1.5, 2.0, 4.0}) {
        for (int rep = 0; rep < 34; ++rep) {
            Window w(1, 1, 2);
            auto g = oracle::random_positive(w, rng, 0.05, 20.0);
            auto pair = apr_both(g, p);
            CHECK(pair.bracket <= pair.double_bar * (1 + 1e-12));
            CHECK(pair.double_bar <= p * pair.bracket * (1 + 1e-12));
        }
    }
    // Inner sup equals the exhaustive subset maximum on small cubes.
    for (int rep = 0; rep < 20; ++rep) {
        Window w(1, 0, 3);  // 16 cells: the window is one cube of 16 cells
        auto g = oracle::random_positive(w, rng, 0.05, 20.0);
        double p = rng.uniform(1.1, 3.5);
        double mine = apr_double(g, p);
        // Brute force over all cubes x all subsets.
        double brute = 0.0;
        std::int64_t m = w.axis_cells(), h = w.half();
        PrefixTable T(g);
        for (std::int64_t s = 1; s <= m; ++s)
            for (std::int64_t a = -h; a + s <= h; ++a) {
                std::vector<double> cells;
                for (std::int64_t x = a; x < a + s; ++x)
                    cells.push_back(g.at_cell({x, 0}));
                brute = std::max(brute,
                                 oracle::doublebar_inner_subsets(cells, p));
            }
        CHECK(mine == doctest::Approx(brute).epsilon(1e-12));
    }
}

TEST_CASE("base-measure constants") {
    Rng rng(11);
    Window w(1, 1, 1);
    GridFunction ones(w, 1.0);
    // v = 1 for arbitrary base.
    auto u = oracle::random_positive(w, rng);
    CHECK(base_weighted_constant(ones, u, 2.0) ==
          doctest::Approx(1.0).epsilon(1e-12));
    // u = 1 collapses to the unweighted constants.
    for (int rep = 0; rep < 20; ++rep) {
        auto v = oracle::random_positive(w, rng, 0.1, 8.0);
        CHECK(base_weighted_constant(v, GridFunction(w, 1.0), 2.0) ==
              doctest::Approx(ap_constant(v, 2.0)).epsilon(1e-12));
        CHECK(base_weighted_constant(v, GridFunction(w, 1.0), 1.0) ==
              doctest::Approx(a1_constant(v)).epsilon(1e-12));
    }
    // Lemma "weights" quantitative form: [v]_{A_q(u)} <= [u]_{RH_s}^q [uv]_{A_r},
    // q = r s / (s - 1); fixtures at r = s = 2, q = 4.
    for (int rep = 0; rep < 10; ++rep) {
        auto uu = oracle::random_positive(w, rng, 0.3, 3.0);
        auto vv = oracle::random_positive(w, rng, 0.3, 3.0);
        double lhs = base_weighted_constant(vv, uu, 4.0);
        double rhs = std::pow(rh_constant(uu, 2.0), 4.0) *
                     ap_constant(GridFunction::multiply(uu, vv), 2.0);
        CHECK(lhs <= rhs * (1 + 1e-12));
    }
}

TEST_CASE("lemma pesos properties") {
    Rng rng(13);
    Window w(1, 1, 2);
    ConstantsConfig cfg;
    // (a) [u^-1]_{RH_inf} <= [u]_{A_1}
    for (int rep = 0; rep < 30; ++rep) {
        auto u = oracle::random_positive(w, rng, 0.05, 20.0);
        CHECK(rh_inf(u.pow(-1.0)) <= a1_constant(u) * (1 + 1e-12));
    }
    // (b) [u^q]_{RH_inf} <= [u]_{RH_inf}^q, q = 1, 2, 3
    for (int rep = 0; rep < 10; ++rep) {
        auto u = oracle::random_positive(w, rng, 0.2, 5.0);
        double base = rh_inf(u);
        for (double q : {1.0, 2.0, 3.0})
            CHECK(rh_inf(u.pow(q)) <= std::pow(base, q) * (1 + 1e-12));
    }
    // (d) [uw]_{A_s} <= [w]_{RH_inf} [u]_{A_q} [w]_{A_r}, s = q + r - 1
    for (int rep = 0; rep < 10; ++rep) {
        auto u = oracle::random_positive(w, rng, 0.3, 4.0);
        auto v = oracle::random_positive(w, rng, 0.3, 4.0);
        double q = 2.0, r = 2.0, s = 3.0;
        CHECK(ap_constant(GridFunction::multiply(u, v), s) <=
              rh_inf(v) * ap_constant(u, q) * ap_constant(v, r) * (1 + 1e-12));
    }
    // (e) A_1 and RH_inf constants both 1 forces a constant weight.
    GridFunction c(w, 2.5);
    CHECK(a1_constant(c) == doctest::Approx(1.0).epsilon(1e-13));
    CHECK(rh_inf(c) == doctest::Approx(1.0).epsilon(1e-13));
    {
        auto u = oracle::random_positive(w, rng, 0.5, 2.0);
        bool both_one = a1_constant(u) <= 1 + 1e-12 && rh_inf(u) <= 1 + 1e-12;
        auto vals = u.values();
        double mx = *std::max_element(vals.begin(), vals.end());
        double mn = *std::min_element(vals.begin(), vals.end());
        CHECK(both_one == (mx / mn <= 1 + 1e-9));
    }
    // (f) v = prod (Mf_i)^-1: 1 <= [v^p]_{RH_inf} <= c_{m,n,p}
    for (int rep = 0; rep < 20; ++rep) {
        auto f1 = oracle::random_positive(w, rng, 0.1, 10.0);
        auto f2 = oracle::random_positive(w, rng, 0.1, 10.0);
        auto m1 = maximal(f1, MaximalVariant::uncentered());
        auto m2 = maximal(f2, MaximalVariant::uncentered());
        auto v = GridFunction::multiply(m1, m2).pow(-1.0);
        double p = rep % 2 == 0 ? 1.0 : 2.0;
        double val = rh_inf(v.pow(p));
        CHECK(val >= 1.0 - 1e-12);
        double cap = c_mnp(2, 1, p, cfg).value.value();
        CHECK(val <= cap * (1 + 1e-12));
    }
    // Section 4 remark, finite form: FW(w v^-eps) <= 10 [v^-eps]_{RH_inf(w)} FW(w).
    for (int rep = 0; rep < 5; ++rep) {
        Window ws(1, 1, 1);
        auto wgt = oracle::random_positive(ws, rng, 0.5, 2.0);
        auto v = oracle::random_positive(ws, rng, 0.5, 2.0);
        auto g = v.pow(-0.5);
        double lhs = fujii_wilson(GridFunction::multiply(wgt, g));
        double bound = 10.0 * rh_inf_weighted(g, wgt) * fujii_wilson(wgt);
        CHECK(lhs <= bound);
    }
}

TEST_CASE("multilinear constants") {
    Rng rng(17);
    Window w(1, 1, 1);
    // Sandwich on random pairs.
    for (int rep = 0; rep < 50; ++rep) {
        WeightVector wv;
        wv.weights = {oracle::random_positive(w, rng, 0.1, 10.0),
                      oracle::random_positive(w, rng, 0.1, 10.0)};
        double p1 = rep % 3 == 0 ? 1.0 : rng.uniform(1.2, 3.0);
        double p2 = rng.uniform(1.2, 3.0);
        ExponentTuple P({p1, p2});
        double br = multilinear_apr(wv, P, MultilinearVariant::Bracket);
        double db = multilinear_apr(wv, P, MultilinearVariant::DoubleBar);
        CHECK(br <= db * (1 + 1e-12));
        CHECK(db <= p1 * p2 * br * (1 + 1e-12));
        // restricted weak constant never exceeds the strong one
        CHECK(br <= multilinear_ap(wv, P) * (1 + 1e-12));
    }
    // Holder upper bound with the canonical nu.
    for (int rep = 0; rep < 10; ++rep) {
        WeightVector wv;
        wv.weights = {oracle::random_positive(w, rng, 0.2, 5.0),
                      oracle::random_positive(w, rng, 0.2, 5.0)};
        ExponentTuple P({2.0, 2.0});
        double br = multilinear_apr(wv, P, MultilinearVariant::Bracket);
        CHECK(br <= apr_bracket(wv.weights[0], 2.0) *
                        apr_bracket(wv.weights[1], 2.0) * (1 + 1e-12));
    }
    // m = 1 identities.
    for (int rep = 0; rep < 5; ++rep) {
        auto u = oracle::random_positive(w, rng, 0.2, 5.0);
        WeightVector wv;
        wv.weights = {u};
        ExponentTuple P({2.0});
        CHECK(multilinear_apr(wv, P, MultilinearVariant::Bracket) ==
              doctest::Approx(apr_bracket(u, 2.0)).epsilon(1e-12));
        CHECK(multilinear_ap(wv, P) ==
              doctest::Approx(std::pow(ap_constant(u, 2.0), 0.5))
                  .epsilon(1e-12));
    }
}

TEST_CASE("weighted pointwise maximal bounds") {
    Rng rng(19);
    Window w(1, 1, 2);
    for (int rep = 0; rep < 10; ++rep) {
        auto f = oracle::random_positive(w, rng, 0.05, 10.0);
        auto u = oracle::random_positive(w, rng, 0.3, 3.0);
        auto md = maximal(f, MaximalVariant::dyadic({0, 0}));
        auto mud = maximal(f, MaximalVariant::weighted_dyadic(u, {0, 0}));
        double a1 = a1_constant(u);
        for (std::int64_t i = 0; i < md.size(); ++i)
            CHECK(md[i] <= a1 * mud[i] * (1 + 1e-12));

        auto chi = oracle::random_characteristic(w, rng);
        double p = 2.0;
        auto mdc = maximal(chi, MaximalVariant::dyadic({0, 0}));
        auto mudc = maximal(chi, MaximalVariant::weighted_dyadic(u, {0, 0}));
        double cap = p * apr_bracket(u, p);
        for (std::int64_t i = 0; i < mdc.size(); ++i)
            CHECK(mdc[i] <= cap * std::pow(mudc[i], 1.0 / p) * (1 + 1e-12));
    }
}

TEST_CASE("ap finiteness across p and the RH_inf r-scan helper") {
    Rng rng(23);
    Window w(1, 1, 1);
    auto u = oracle::random_positive(w, rng, 0.2, 5.0);
    CHECK(std::isfinite(ap_constant(u, 2.0)));
    CHECK(std::isfinite(ap_constant(u, 3.0)));
    std::vector<double> grid{1.1, 1.5, 2.0, 3.0, 5.0, 8.0};
    auto scan = smallest_ap_exponent(u, grid, 1e6);
    CHECK(scan.found);
    CHECK(scan.r >= 1.1);
}
