// AVX2 variants of the sweep kernels.  Compiled with -mavx2 in its own
// translation unit; everything else in the library stays at the baseline
// ISA.  Reduction order matches the scalar reference lane for lane.

#if defined(__x86_64__)

#include <immintrin.h>

#include "wlab/kernels.hpp"

namespace wlab::kern {

namespace {

// (l0+l2)+(l1+l3), same tree as the scalar kernels.
inline double hsum(__m256d v) {
    __m128d lo = _mm256_castpd256_pd128(v);    // l0 l1
    __m128d hi = _mm256_extractf128_pd(v, 1);  // l2 l3
    __m128d s = _mm_add_pd(lo, hi);            // l0+l2, l1+l3
    return _mm_cvtsd_f64(s) + _mm_cvtsd_f64(_mm_unpackhi_pd(s, s));
}

inline double hmax(__m256d v) {
    __m128d lo = _mm256_castpd256_pd128(v);
    __m128d hi = _mm256_extractf128_pd(v, 1);
    __m128d m = _mm_max_pd(lo, hi);
    return _mm_cvtsd_f64(_mm_max_sd(m, _mm_unpackhi_pd(m, m)));
}

inline double hmin(__m256d v) {
    __m128d lo = _mm256_castpd256_pd128(v);
    __m128d hi = _mm256_extractf128_pd(v, 1);
    __m128d m = _mm_min_pd(lo, hi);
    return _mm_cvtsd_f64(_mm_min_sd(m, _mm_unpackhi_pd(m, m)));
}

double sum_avx2(const double* v, std::size_t n) {
    __m256d acc = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) acc = _mm256_add_pd(acc, _mm256_loadu_pd(v + i));
    double s = hsum(acc);
    for (; i < n; ++i) s += v[i];
    return s;
}

double dot_avx2(const double* a, const double* b, std::size_t n) {
    __m256d acc = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4)
        acc = _mm256_add_pd(
            acc, _mm256_mul_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i)));
    double s = hsum(acc);
    for (; i < n; ++i) s += a[i] * b[i];
    return s;
}

double mass_above_avx2(const double* f, const double* mass, std::size_t n,
                       double t) {
    __m256d acc = _mm256_setzero_pd();
    __m256d vt = _mm256_set1_pd(t);
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        __m256d sel = _mm256_cmp_pd(_mm256_loadu_pd(f + i), vt, _CMP_GT_OQ);
        acc = _mm256_add_pd(acc,
                            _mm256_and_pd(sel, _mm256_loadu_pd(mass + i)));
    }
    double s = hsum(acc);
    for (; i < n; ++i) s += f[i] > t ? mass[i] : 0.0;
    return s;
}

double max_avx2(const double* v, std::size_t n) {
    if (n < 8) {
        double m = v[0];
        for (std::size_t i = 1; i < n; ++i)
            if (v[i] > m) m = v[i];
        return m;
    }
    __m256d acc = _mm256_loadu_pd(v);
    std::size_t i = 4;
    for (; i + 4 <= n; i += 4) acc = _mm256_max_pd(acc, _mm256_loadu_pd(v + i));
    double m = hmax(acc);
    for (; i < n; ++i)
        if (v[i] > m) m = v[i];
    return m;
}

double min_avx2(const double* v, std::size_t n) {
    if (n < 8) {
        double m = v[0];
        for (std::size_t i = 1; i < n; ++i)
            if (v[i] < m) m = v[i];
        return m;
    }
    __m256d acc = _mm256_loadu_pd(v);
    std::size_t i = 4;
    for (; i + 4 <= n; i += 4) acc = _mm256_min_pd(acc, _mm256_loadu_pd(v + i));
    double m = hmin(acc);
    for (; i < n; ++i)
        if (v[i] < m) m = v[i];
    return m;
}

void max_inplace_avx2(double* dst, const double* src, std::size_t n) {
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4)
        _mm256_storeu_pd(
            dst + i,
            _mm256_max_pd(_mm256_loadu_pd(dst + i), _mm256_loadu_pd(src + i)));
    for (; i < n; ++i)
        if (src[i] > dst[i]) dst[i] = src[i];
}

void window_avg_avx2(const double* hi, const double* lo, std::size_t count,
                     std::size_t s, double div, double* out) {
    __m256d vdiv = _mm256_set1_pd(div);
    std::size_t i = 0;
    for (; i + 4 <= count; i += 4) {
        __m256d a = _mm256_loadu_pd(hi + i);
        __m256d b = _mm256_loadu_pd(hi + i + s);
        // two_sum(b, -a)
        __m256d sum = _mm256_sub_pd(b, a);
        __m256d bb = _mm256_sub_pd(sum, b);
        __m256d err = _mm256_add_pd(_mm256_sub_pd(b, _mm256_sub_pd(sum, bb)),
                                    _mm256_sub_pd(_mm256_setzero_pd(),
                                                  _mm256_add_pd(a, bb)));
        __m256d tail = _mm256_sub_pd(_mm256_loadu_pd(lo + i + s),
                                     _mm256_loadu_pd(lo + i));
        __m256d v = _mm256_add_pd(sum, _mm256_add_pd(err, tail));
        _mm256_storeu_pd(out + i, _mm256_div_pd(v, vdiv));
    }
    for (; i < count; ++i) {
        double b = hi[i + s], a = -hi[i];
        double sum = b + a;
        double bb = sum - b;
        double err = (b - (sum - bb)) + (a - bb);
        out[i] = (sum + (err + (lo[i + s] - lo[i]))) / div;
    }
}

const Ops kAvx2 = {sum_avx2,        dot_avx2, mass_above_avx2, max_avx2,
                   min_avx2,        max_inplace_avx2, window_avg_avx2};

}  // namespace

bool avx2_available() { return __builtin_cpu_supports("avx2") != 0; }
const Ops& avx2_ops() { return kAvx2; }

}  // namespace wlab::kern

#endif  // __x86_64__
