#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "support/oracles.hpp"
#include "wlab/operators.hpp"
#include "wlab/sparse.hpp"

using namespace wlab;

namespace {

GridFunction spike_fixture(const Window& w) {
    std::vector<double> v(static_cast<std::size_t>(w.cell_count()), 0.0);
    v[static_cast<std::size_t>(w.cell_index({0, 0}))] = 8.0;
    for (std::int64_t x = 1; x < 8; ++x)
        v[static_cast<std::size_t>(w.cell_index({x, 0}))] = 1.0;
    return GridFunction(w, std::move(v));
}

const DyadicCube* find_cube(const SparseFamily& S, int k, std::int64_t j) {
    for (const auto& c : S.cubes)
        if (c.k == k && c.j[0] == j) return &c;
    return nullptr;
}

double run_measure(const SparseFamily& S, const Window& w, std::size_t i) {
    double units = 0.0;
    for (auto [a, b] : S.runs[i]) units += static_cast<double>(b - a);
    return units * w.cell_volume() / 3.0;
}

}  // namespace

TEST_CASE("stopping decomposition of the 8-1-...-1 fixture") {
    Window w(1, 0, 3);  // [-8, 8), unit cells
    auto f = spike_fixture(w);
    auto S = cz_sparse_decompose(f, {0, 0}, 2.0);
    CHECK(S.eta == 0.5);

    // The two stopping cubes named in the construction, under the top root.
    const auto* q8 = find_cube(S, 3, 0);  // [0, 8)
    const auto* q2 = find_cube(S, 1, 0);  // [0, 2)
    REQUIRE(q8 != nullptr);
    REQUIRE(q2 != nullptr);

    // Hand-checkable averages: 15/8 on [0,8) and 4.5 on [0,2).
    PrefixTable T(f);
    CHECK(T.dyadic_avg(*q8) == doctest::Approx(15.0 / 8.0).epsilon(1e-14));
    CHECK(T.dyadic_avg(*q2) == doctest::Approx(4.5).epsilon(1e-14));

    // E_Q measures: E_{[0,8)} = [2,8), E_{[0,2)} = [0,2).
    for (std::size_t i = 0; i < S.cubes.size(); ++i) {
        if (&S.cubes[i] == q8) CHECK(run_measure(S, w, i) == 6.0);
        if (&S.cubes[i] == q2) CHECK(run_measure(S, w, i) == 2.0);
    }

    // Packing: per cube, children measure at most |Q| / lambda.
    for (std::size_t i = 0; i < S.cubes.size(); ++i) {
        double kids = 0.0;
        for (std::size_t c : S.children[i])
            kids += S.cubes[c].side_len();
        CHECK(kids <= S.cubes[i].side_len() / 2.0 + 1e-12);
    }

    // Certified 1/2-sparse.
    CHECK(is_certificate(verify_sparse(w, S, 0.5)));

    // Cellwise certificate: M^D f <= 2 A_S f; at cell 0 the values are 8 and
    // 15/32 + 15/8 + 4.5.
    auto A = sparse_operator(S, std::vector<GridFunction>{f});
    auto MD = maximal(f, MaximalVariant::dyadic({0, 0}));
    CHECK(A[w.cell_index({0, 0})] ==
          doctest::Approx(15.0 / 32.0 + 15.0 / 8.0 + 4.5).epsilon(1e-14));
    for (std::int64_t i = 0; i < MD.size(); ++i)
        CHECK(MD[i] <= 2.0 * A[i] * (1 + 1e-12));
}

TEST_CASE("constant function decomposes into the root alone") {
    Window w(1, 0, 3);
    GridFunction c(w, 3.0);
    auto S = cz_sparse_decompose(c, {1, 0}, 2.0);
    REQUIRE(S.cubes.size() == 1);  // single shifted root covers the window
    CHECK(S.cubes[0].k == w.L + 2);
    CHECK(run_measure(S, w, 0) ==
          doctest::Approx(S.cubes[0].side_len()).epsilon(1e-14));
}

TEST_CASE("verify_sparse: certificate and refutation fixtures") {
    Window w(1, 2, 0);  // [-1, 1), cells of 1/4
    SparseFamily S;
    S.alpha = {0, 0};
    S.cubes = {{{0, 0}, 0, {0, 0}},    // [0, 1)
               {{0, 0}, -1, {0, 0}},   // [0, 1/2)
               {{0, 0}, -1, {1, 0}}};  // [1/2, 1)
    S.children.resize(3);

    auto good = verify_sparse(w, S, 0.5);
    REQUIRE(is_certificate(good));
    // Demands exactly saturate [0,1): allocations partition it.
    const auto& cert = std::get<SparseCertificate>(good);
    double total = 0.0;
    for (const auto& r : cert.assignment) total += double(r.units);
    CHECK(total * w.cell_volume() / 3.0 == doctest::Approx(1.0));

    auto bad = verify_sparse(w, S, 0.6);
    REQUIRE(!is_certificate(bad));
    const auto& ref = std::get<SparseRefutation>(bad);
    CHECK(ref.demand == doctest::Approx(1.2).epsilon(1e-6));
    CHECK(ref.capacity == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(ref.cube_cut.size() == 3);

    // Any single cube is eta-sparse for every eta < 1.
    SparseFamily one;
    one.cubes = {{{0, 0}, 0, {0, 0}}};
    one.children.resize(1);
    CHECK(is_certificate(verify_sparse(w, one, 0.97)));
}

TEST_CASE("every stopping decomposition passes the eta = 1/2 certificate") {
    Rng rng(3);
    for (int rep = 0; rep < 12; ++rep) {
        Window w(1, 1, 2);
        auto f = rep % 4 == 0 ? oracle::random_characteristic(w, rng)
                              : oracle::random_positive(w, rng, 0.01, 30.0);
        for (auto alpha : {std::array<std::uint8_t, 2>{0, 0},
                           std::array<std::uint8_t, 2>{1, 0}}) {
            auto S = cz_sparse_decompose(f, alpha, 2.0);
            CHECK(is_certificate(verify_sparse(w, S, 0.5)));
            // Construction runs are themselves a valid assignment.
            if (S.has_assignment()) {
                for (std::size_t i = 0; i < S.cubes.size(); ++i)
                    CHECK(run_measure(S, w, i) >=
                          0.5 * S.cubes[i].side_len() - 1e-12);
            }
        }
    }
}

TEST_CASE("domination chain on random functions") {
    Rng rng(5);
    for (int rep = 0; rep < 30; ++rep) {
        Window w(1, 1, 2);
        auto f = rep % 3 == 0 ? oracle::random_characteristic(w, rng)
                              : oracle::random_positive(w, rng, 0.05, 20.0);
        auto M = maximal(f, MaximalVariant::uncentered());
        std::vector<GridFunction> fs{f};
        GridFunction total(w, 0.0);
        for (auto alpha : {std::array<std::uint8_t, 2>{0, 0},
                           std::array<std::uint8_t, 2>{1, 0}}) {
            auto S = cz_sparse_decompose(f, alpha, 2.0);
            auto A = sparse_operator(S, fs);
            auto MD = maximal(f, MaximalVariant::dyadic(alpha));
            for (std::int64_t i = 0; i < MD.size(); ++i)
                CHECK(MD[i] <= 2.0 * A[i] * (1 + 1e-12));
            for (std::int64_t i = 0; i < total.size(); ++i)
                total[i] += A[i];
        }
        // Mf <= 6 * 2 * sum_alpha A <= 2*12 * sum_alpha A  (n = 1)
        for (std::int64_t i = 0; i < M.size(); ++i)
            CHECK(M[i] <= 24.0 * total[i] * (1 + 1e-12));
    }
}

TEST_CASE("sparse operator values and linearity") {
    Window w(1, 0, 1);  // [-2, 2)
    // S = {[0,1)}, f1 = f2 = chi_[0,1).
    SparseFamily S;
    S.cubes = {{{0, 0}, 0, {0, 0}}};
    S.children.resize(1);
    std::vector<double> v(4, 0.0);
    v[static_cast<std::size_t>(w.cell_index({0, 0}))] = 1.0;
    GridFunction chi(w, v);
    auto A = sparse_operator(S, std::vector<GridFunction>{chi, chi});
    for (std::int64_t c = -2; c < 2; ++c)
        CHECK(A[w.cell_index({c, 0})] == (c == 0 ? 1.0 : 0.0));

    // Homogeneity in each slot.
    Rng rng(7);
    Window w2(1, 1, 2);
    auto f = oracle::random_positive(w2, rng);
    auto S2 = cz_sparse_decompose(f, {0, 0}, 2.0);
    auto A1 = sparse_operator(S2, std::vector<GridFunction>{f});
    auto A2 = sparse_operator(
        S2, std::vector<GridFunction>{f.map([](double x) { return 2 * x; })});
    for (std::int64_t i = 0; i < A1.size(); ++i)
        CHECK(A2[i] == doctest::Approx(2 * A1[i]).epsilon(1e-13));

    // M_S <= A_S pointwise.
    auto MS = sparse_maximal(S2, std::vector<GridFunction>{f});
    for (std::int64_t i = 0; i < MS.size(); ++i)
        CHECK(MS[i] <= A1[i] * (1 + 1e-12));
}

TEST_CASE("json round trip") {
    Window w(1, 1, 2);
    Rng rng(11);
    auto f = oracle::random_positive(w, rng);
    auto S = cz_sparse_decompose(f, {1, 0}, 2.0);
    auto text = sparse_to_json(w, S);
    auto back = sparse_from_json(w, text);
    REQUIRE(back.cubes.size() == S.cubes.size());
    CHECK(back.eta == S.eta);
    CHECK(back.alpha == S.alpha);
    for (std::size_t i = 0; i < S.cubes.size(); ++i) {
        CHECK(back.cubes[i].k == S.cubes[i].k);
        CHECK(back.cubes[i].j == S.cubes[i].j);
        CHECK(back.runs[i] == S.runs[i]);
    }
}

TEST_CASE("2d decomposition sanity") {
    Window w(2, 0, 1);
    Rng rng(13);
    auto f = oracle::random_positive(w, rng, 0.1, 10.0);
    auto S = cz_sparse_decompose(f, {1, 1}, 2.0);
    CHECK(!S.cubes.empty());
    CHECK(is_certificate(verify_sparse(w, S, 0.5)));
    auto A = sparse_operator(S, std::vector<GridFunction>{f});
    auto MD = maximal(f, MaximalVariant::dyadic({1, 1}));
    for (std::int64_t i = 0; i < MD.size(); ++i)
        CHECK(MD[i] <= 2.0 * A[i] * (1 + 1e-12));
}
