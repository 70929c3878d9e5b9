#pragma once

#include <cstdint>
#include <cmath>

namespace wlab {

// Deterministic generator shared by every sampler in the project.  Results
// must be identical across platforms and thread counts, so we avoid the
// standard <random> distributions and keep the whole chain explicit.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : state_(seed) {}

    // Derive an independent stream, e.g. one per experiment index.
    static Rng stream(std::uint64_t seed, std::uint64_t index) {
        Rng r(seed ^ (0x9e3779b97f4a7c15ULL * (index + 1)));
        r.next();
        r.next();
        return r;
    }

    std::uint64_t next() {
        std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    // Uniform in [0, 1).
    double u01() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

    // Uniform in [lo, hi).
    double uniform(double lo, double hi) { return lo + (hi - lo) * u01(); }

    // Log-uniform in [lo, hi), lo > 0.
    double log_uniform(double lo, double hi) {
        return std::exp(uniform(std::log(lo), std::log(hi)));
    }

    // Uniform integer in [0, n).
    std::uint64_t below(std::uint64_t n) { return next() % n; }

    // Dyadic value in (0, 4]; a multiple of 2^-8, so short sums of products
    // of two such values are exact in binary64.
    double quantized() {
        return static_cast<double>(1 + below(1 << 10)) * 0x1.0p-8;
    }

private:
    std::uint64_t state_;
};

}  // namespace wlab
