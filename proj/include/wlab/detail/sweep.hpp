#pragma once

#include <cstdint>
#include <deque>
#include <span>
#include <vector>

namespace wlab::detail {

inline std::int64_t floor_div(std::int64_t a, std::int64_t b) {
    std::int64_t q = a / b;
    return (a % b != 0 && ((a < 0) != (b < 0))) ? q - 1 : q;
}

// out[ic] = max(out[ic], max A[ia]) over ia in [ic - s, ic + 1] ∩ [0, count):
// corners of side-s cubes whose closure meets cell ic.
inline void touching_window_max(const double* A, std::int64_t count,
                                std::int64_t s, std::int64_t m, double* out) {
    std::deque<std::int64_t> dq;
    std::int64_t nxt = 0;
    for (std::int64_t ic = 0; ic < m; ++ic) {
        std::int64_t r = std::min(ic + 1, count - 1);
        while (nxt <= r) {
            while (!dq.empty() && A[dq.back()] <= A[nxt]) dq.pop_back();
            dq.push_back(nxt);
            ++nxt;
        }
        std::int64_t l = std::max<std::int64_t>(0, ic - s);
        while (dq.front() < l) dq.pop_front();
        if (A[dq.front()] > out[ic]) out[ic] = A[dq.front()];
    }
}

// Uncentered maximal of a bare value array, the array itself acting as the
// window (used for M(w chi_Q) restricted to Q).
std::vector<double> local_maximal_1d(std::span<const double> v);
std::vector<double> local_maximal_2d(std::span<const double> v,
                                     std::int64_t side);

}  // namespace wlab::detail
