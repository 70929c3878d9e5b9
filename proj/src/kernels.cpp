#include "wlab/kernels.hpp"

#include <cstdlib>
#include <string>

#include "wlab/dd.hpp"

namespace wlab::kern {

namespace {

// Scalar reference.  The lane structure mirrors one AVX2 register of four
// doubles; keep the loops in this exact shape.

double sum_scalar(const double* v, std::size_t n) {
    double l0 = 0, l1 = 0, l2 = 0, l3 = 0;
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        l0 += v[i];
        l1 += v[i + 1];
        l2 += v[i + 2];
        l3 += v[i + 3];
    }
    double acc = (l0 + l2) + (l1 + l3);
    for (; i < n; ++i) acc += v[i];
    return acc;
}

double dot_scalar(const double* a, const double* b, std::size_t n) {
    double l0 = 0, l1 = 0, l2 = 0, l3 = 0;
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        l0 += a[i] * b[i];
        l1 += a[i + 1] * b[i + 1];
        l2 += a[i + 2] * b[i + 2];
        l3 += a[i + 3] * b[i + 3];
    }
    double acc = (l0 + l2) + (l1 + l3);
    for (; i < n; ++i) acc += a[i] * b[i];
    return acc;
}

double mass_above_scalar(const double* f, const double* mass, std::size_t n,
                         double t) {
    double l0 = 0, l1 = 0, l2 = 0, l3 = 0;
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        l0 += f[i] > t ? mass[i] : 0.0;
        l1 += f[i + 1] > t ? mass[i + 1] : 0.0;
        l2 += f[i + 2] > t ? mass[i + 2] : 0.0;
        l3 += f[i + 3] > t ? mass[i + 3] : 0.0;
    }
    double acc = (l0 + l2) + (l1 + l3);
    for (; i < n; ++i) acc += f[i] > t ? mass[i] : 0.0;
    return acc;
}

double max_scalar(const double* v, std::size_t n) {
    double m = v[0];
    for (std::size_t i = 1; i < n; ++i)
        if (v[i] > m) m = v[i];
    return m;
}

double min_scalar(const double* v, std::size_t n) {
    double m = v[0];
    for (std::size_t i = 1; i < n; ++i)
        if (v[i] < m) m = v[i];
    return m;
}

void max_inplace_scalar(double* dst, const double* src, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i)
        if (src[i] > dst[i]) dst[i] = src[i];
}

void window_avg_scalar(const double* hi, const double* lo, std::size_t count,
                       std::size_t s, double div, double* out) {
    for (std::size_t i = 0; i < count; ++i) {
        dd d = two_sum(hi[i + s], -hi[i]);
        double v = d.hi + (d.lo + (lo[i + s] - lo[i]));
        out[i] = v / div;
    }
}

const Ops kScalar = {sum_scalar,        dot_scalar, mass_above_scalar,
                     max_scalar,        min_scalar, max_inplace_scalar,
                     window_avg_scalar};

const Ops* select() {
    const char* env = std::getenv("WLAB_SIMD");
    if (env != nullptr) {
        std::string s(env);
        if (s == "scalar") return &kScalar;
        if (s == "avx2" && avx2_available()) return &avx2_ops();
    }
    if (avx2_available()) return &avx2_ops();
    return &kScalar;
}

}  // namespace

const Ops& scalar_ops() { return kScalar; }

const Ops& ops() {
    static const Ops* chosen = select();
    return *chosen;
}

std::string_view active_name() {
    return &ops() == &kScalar ? "scalar" : "avx2";
}

#if !defined(__x86_64__)
// Non-x86 build: no AVX2 translation unit is compiled.
bool avx2_available() { return false; }
const Ops& avx2_ops() { return kScalar; }
#endif

}  // namespace wlab::kern
