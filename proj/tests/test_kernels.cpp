#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cstdlib>
#include <cstring>
#include <vector>

#include "wlab/dd.hpp"
#include "wlab/kernels.hpp"
#include "wlab/rng.hpp"

using namespace wlab;

namespace {

std::vector<double> random_values(Rng& rng, std::size_t n, bool quantized) {
    std::vector<double> v(n);
    for (auto& x : v) x = quantized ? rng.quantized() : rng.uniform(0.0, 10.0);
    return v;
}

bool bit_equal(double a, double b) {
    return std::memcmp(&a, &b, sizeof(double)) == 0;
}

}  // namespace

TEST_CASE("scalar and avx2 kernels are bit-identical") {
    if (!kern::avx2_available()) return;  // nothing to compare on this host
    const auto& sc = kern::scalar_ops();
    const auto& vx = kern::avx2_ops();
    Rng rng(7);
    for (int rep = 0; rep < 200; ++rep) {
        std::size_t n = 1 + rng.below(333);
        auto a = random_values(rng, n, false);
        auto b = random_values(rng, n, false);
        CHECK(bit_equal(sc.sum(a.data(), n), vx.sum(a.data(), n)));
        CHECK(bit_equal(sc.dot(a.data(), b.data(), n),
                        vx.dot(a.data(), b.data(), n)));
        double t = rng.uniform(0.0, 10.0);
        CHECK(bit_equal(sc.mass_above(a.data(), b.data(), n, t),
                        vx.mass_above(a.data(), b.data(), n, t)));
        CHECK(bit_equal(sc.max(a.data(), n), vx.max(a.data(), n)));
        CHECK(bit_equal(sc.min(a.data(), n), vx.min(a.data(), n)));

        auto d1 = a, d2 = a;
        sc.max_inplace(d1.data(), b.data(), n);
        vx.max_inplace(d2.data(), b.data(), n);
        CHECK(d1 == d2);
    }
}

TEST_CASE("window_avg kernels agree between flavors") {
    if (!kern::avx2_available()) return;
    const auto& sc = kern::scalar_ops();
    const auto& vx = kern::avx2_ops();
    Rng rng(13);
    for (int rep = 0; rep < 100; ++rep) {
        std::size_t n = 8 + rng.below(200);
        auto v = random_values(rng, n, false);
        std::vector<double> hi(n + 1, 0.0), lo(n + 1, 0.0);
        dd acc{};
        for (std::size_t i = 0; i < n; ++i) {
            acc = dd_add(acc, v[i]);
            hi[i + 1] = acc.hi;
            lo[i + 1] = acc.lo;
        }
        std::size_t s = 1 + rng.below(n);
        std::size_t count = n - s + 1;
        std::vector<double> o1(count), o2(count);
        sc.window_avg(hi.data(), lo.data(), count, s, double(s), o1.data());
        vx.window_avg(hi.data(), lo.data(), count, s, double(s), o2.data());
        for (std::size_t i = 0; i < count; ++i) CHECK(bit_equal(o1[i], o2[i]));
    }
}

TEST_CASE("dd prefix differences recover exact sums on dyadic data") {
    Rng rng(29);
    std::size_t n = 1024;
    auto v = random_values(rng, n, true);
    std::vector<double> hi(n + 1, 0.0), lo(n + 1, 0.0);
    dd acc{};
    for (std::size_t i = 0; i < n; ++i) {
        acc = dd_add(acc, v[i]);
        hi[i + 1] = acc.hi;
        lo[i + 1] = acc.lo;
    }
    for (int rep = 0; rep < 200; ++rep) {
        std::size_t a = rng.below(n);
        std::size_t b = a + 1 + rng.below(n - a);
        // Oracle: plain left-to-right sum; exact because values are dyadic
        // multiples of 2^-8 bounded by 4.
        double direct = 0.0;
        for (std::size_t i = a; i < b; ++i) direct += v[i];
        dd d = two_sum(hi[b], -hi[a]);
        double fast = d.hi + (d.lo + (lo[b] - lo[a]));
        CHECK(bit_equal(direct, fast));
    }
}

TEST_CASE("dispatch honors availability and the override") {
    CHECK((kern::active_name() == "avx2" || kern::active_name() == "scalar"));
    const char* env = std::getenv("WLAB_SIMD");
    if (env != nullptr) {
        CHECK(kern::active_name() == env);
    } else if (kern::avx2_available()) {
        CHECK(kern::active_name() == "avx2");
    }
}
