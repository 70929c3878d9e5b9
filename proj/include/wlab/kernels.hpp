#pragma once

#include <cstddef>
#include <string_view>

namespace wlab::kern {

// Hot inner loops of the grid sweeps, in two interchangeable flavors: a
// scalar reference and an AVX2 variant.  Both evaluate the *same* 4-lane
// reduction tree, so results are bit-identical and the dispatch choice can
// never change a report.  Selected once at startup: AVX2 when the CPU has it,
// scalar otherwise; WLAB_SIMD=scalar|avx2 overrides.
struct Ops {
    // Sum of v[0..n); lanewise accumulation, lanes combined as
    // (l0+l2)+(l1+l3), remainder added last.
    double (*sum)(const double* v, std::size_t n);
    // Sum of a[i]*b[i].
    double (*dot)(const double* a, const double* b, std::size_t n);
    // Sum of mass[i] over positions with f[i] > t.
    double (*mass_above)(const double* f, const double* mass, std::size_t n,
                         double t);
    // Max / min of v[0..n); n >= 1, values finite.
    double (*max)(const double* v, std::size_t n);
    double (*min)(const double* v, std::size_t n);
    // dst[i] = max(dst[i], src[i]).
    void (*max_inplace)(double* dst, const double* src, std::size_t n);
    // out[i] = round((hi[i+s] - hi[i]) + carry terms) / div: cube sums of a
    // dd prefix table at one scale, already divided by the cube cell count.
    void (*window_avg)(const double* hi, const double* lo, std::size_t count,
                       std::size_t s, double div, double* out);
};

const Ops& scalar_ops();
const Ops& avx2_ops();       // valid only if avx2_available()
bool avx2_available();
const Ops& ops();            // runtime-selected table
std::string_view active_name();

}  // namespace wlab::kern
