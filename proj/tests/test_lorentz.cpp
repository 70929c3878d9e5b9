#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "support/oracles.hpp"
#include "wlab/lorentz.hpp"
#include "wlab/rng.hpp"

using namespace wlab;

namespace {

GridFunction two_cells(double a, double b, double na = 1.0, double nb = 1.0) {
    (void)na;
    (void)nb;
    return GridFunction(Window(1, 0, 0), std::vector<double>{a, b});
}

const Window W10(1, 0, 0);  // two unit cells on [-1, 1)

}  // namespace

TEST_CASE("distribution: exact masses") {
    GridFunction f(W10, std::vector<double>{2, 1});
    GridFunction ones(W10, 1.0);
    CHECK(distribution(f, ones, 1.5) == 1.0);
    CHECK(distribution(f, ones, 0.0) == 2.0);
    GridFunction nu(W10, std::vector<double>{1, 2});
    CHECK(distribution(f, nu, 0.5) == 3.0);
    CHECK_THROWS_AS(distribution(f, ones, -1.0), NegativeLevel);
}

TEST_CASE("rearrangement: sort-by-value oracle") {
    GridFunction f(W10, std::vector<double>{2, 1});
    GridFunction ones(W10, 1.0);
    auto pr = rearrangement(f, ones);
    REQUIRE(pr.levels.size() == 2);
    CHECK(pr.value_at(0.5) == 2.0);
    CHECK(pr.value_at(1.5) == 1.0);
    CHECK(pr.value_at(2.5) == 0.0);

    // Constant function: f* = c on [0, mass).
    GridFunction c(W10, 3.25);
    auto pc = rearrangement(c, ones);
    REQUIRE(pc.levels.size() == 1);
    CHECK(pc.levels[0] == 3.25);
    CHECK(pc.masses[0] == 2.0);

    // Permuting cells leaves the profile unchanged.
    GridFunction g(W10, std::vector<double>{1, 2});
    auto pg = rearrangement(g, ones);
    CHECK(pg.levels == pr.levels);
    CHECK(pg.masses == pr.masses);
}

TEST_CASE("norm_p1 closed forms") {
    GridFunction f(W10, std::vector<double>{2, 1});
    GridFunction ones(W10, 1.0);
    // characteristic: p * nu(E)^(1/p)
    GridFunction chi(W10, std::vector<double>{1, 0});
    CHECK(norm_p1(chi, ones, 2.0) == doctest::Approx(2.0).epsilon(1e-14));
    CHECK(norm_p1(f, ones, 1.0) == doctest::Approx(3.0).epsilon(1e-14));
    CHECK(norm_p1(f, ones, 2.0) ==
          doctest::Approx(2.0 * (std::sqrt(2.0) + 1.0)).epsilon(1e-14));
    // Sub-one exponents are allowed: integrating lambda^2 over the level
    // intervals gives 2^2 * 1 + 1^2 * 1, times p = 1/2.
    CHECK(norm_p1(f, ones, 0.5) ==
          doctest::Approx(0.5 * (4.0 + 1.0)).epsilon(1e-14));
    CHECK_THROWS_AS(norm_p1(f, ones, 0.0), BadExponent);
}

TEST_CASE("norm_pinf: threshold scan values") {
    GridFunction f(W10, std::vector<double>{2, 1});
    GridFunction ones(W10, 1.0);
    CHECK(norm_pinf(f, ones, 1.0) == doctest::Approx(2.0).epsilon(1e-14));
    GridFunction chi(W10, std::vector<double>{0, 1});
    CHECK(norm_pinf(chi, ones, 2.0) == doctest::Approx(1.0).epsilon(1e-14));
    // homogeneity
    GridFunction f2 = f.map([](double x) { return 3.7 * x; });
    CHECK(norm_pinf(f2, ones, 1.7) ==
          doctest::Approx(3.7 * norm_pinf(f, ones, 1.7)).epsilon(1e-13));
}

TEST_CASE("norm_lebesgue") {
    GridFunction f(W10, std::vector<double>{2, 1});
    GridFunction ones(W10, 1.0);
    CHECK(norm_lebesgue(f, ones, 2.0) ==
          doctest::Approx(std::sqrt(5.0)).epsilon(1e-14));
    CHECK(norm_lebesgue(f, ones, std::numeric_limits<double>::infinity()) == 2.0);
    GridFunction chi(W10, std::vector<double>{1, 0});
    CHECK(norm_lebesgue(chi, ones, 3.0) == doctest::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("norm_triple: small closed form and subset oracle") {
    GridFunction f(W10, std::vector<double>{2, 1});
    GridFunction ones(W10, 1.0);
    CHECK(norm_triple(f, ones, 2.0, 1.0) ==
          doctest::Approx(3.0 / std::sqrt(2.0)).epsilon(1e-14));
    CHECK_THROWS_AS(norm_triple(f, ones, 1.0, 1.5), BadExponent);

    Rng rng(99);
    for (int rep = 0; rep < 40; ++rep) {
        Window w(1, 0, rep % 2 == 0 ? 2 : 3);  // 8 or 16 cells
        auto g = oracle::random_positive(w, rng, 0.05, 5.0);
        auto nu = oracle::random_positive(w, rng, 0.2, 4.0);
        double p = rng.uniform(1.2, 3.0);
        double r = rng.uniform(0.3, p - 0.2);
        double mine = norm_triple(g, nu, p, r);
        double brute = oracle::triple_norm_subsets(g, nu, p, r);
        CHECK(mine == doctest::Approx(brute).epsilon(1e-12));
    }
}

TEST_CASE("Kolmogorov sandwich and embedding chain on random data") {
    Rng rng(7);
    const double tol = 1e-12;
    std::vector<std::pair<double, double>> prs = {{2, 1}, {1.5, 0.5}, {3, 1.5}};
    for (auto [p, r] : prs) {
        for (int rep = 0; rep < 50; ++rep) {
            Window w(1, 1, 2);
            auto f = oracle::random_positive(w, rng, 0.01, 20.0);
            auto nu = oracle::random_positive(w, rng, 0.1, 5.0);
            double weak = norm_pinf(f, nu, p);
            double triple = norm_triple(f, nu, p, r);
            CHECK(weak <= triple * (1 + tol));
            CHECK(triple <= kolmogorov_factor(p, r) * weak * (1 + tol));
        }
    }
    // L^{p,1} -> L^p -> L^{p,inf} for p >= 1.
    for (int rep = 0; rep < 50; ++rep) {
        Window w(1, 1, 2);
        auto f = oracle::random_positive(w, rng, 0.01, 20.0);
        auto nu = oracle::random_positive(w, rng, 0.1, 5.0);
        double p = rng.uniform(1.0, 4.0);
        double weak = norm_pinf(f, nu, p);
        double leb = norm_lebesgue(f, nu, p);
        double strong = norm_p1(f, nu, p);
        CHECK(weak <= leb * (1 + 1e-12));
        CHECK(leb <= strong * (1 + 1e-12));
    }
}

TEST_CASE("homogeneity in f and in nu") {
    Rng rng(21);
    Window w(1, 0, 2);
    auto f = oracle::random_positive(w, rng);
    auto nu = oracle::random_positive(w, rng);
    auto f3 = f.map([](double x) { return 3.7 * x; });
    auto nu2 = nu.map([](double x) { return 2.0 * x; });
    double p = 1.8;
    CHECK(norm_p1(f3, nu, p) ==
          doctest::Approx(3.7 * norm_p1(f, nu, p)).epsilon(1e-13));
    // nu-scaling: degree 1/p (the factor 2 is exact).
    CHECK(norm_p1(f, nu2, p) ==
          doctest::Approx(std::pow(2.0, 1 / p) * norm_p1(f, nu, p))
              .epsilon(1e-13));
    CHECK(norm_pinf(f, nu2, p) ==
          doctest::Approx(std::pow(2.0, 1 / p) * norm_pinf(f, nu, p))
              .epsilon(1e-13));
}
