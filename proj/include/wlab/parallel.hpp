#pragma once

#include <cstdint>
#include <thread>
#include <vector>

namespace wlab {

// Worker count for sweep and experiment pools.  Partitions are static and
// contiguous and every reduction is associative-exact (max or indexed
// writes), so results do not depend on this value.
int threads();
void set_threads(int t);

template <class Fn>
void parallel_ranges(std::int64_t n, Fn fn) {
    int t = threads();
    if (n <= 0) return;
    if (t <= 1 || n < 2 * t) {
        fn(std::int64_t(0), n);
        return;
    }
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(t));
    std::int64_t chunk = (n + t - 1) / t;
    for (int i = 0; i < t; ++i) {
        std::int64_t b = i * chunk;
        std::int64_t e = std::min<std::int64_t>(n, b + chunk);
        if (b >= e) break;
        pool.emplace_back([&fn, b, e] { fn(b, e); });
    }
    for (auto& th : pool) th.join();
}

}  // namespace wlab
