#include "wlab/parallel.hpp"

#include <atomic>
#include <cstdlib>

namespace wlab {

namespace {

std::atomic<int> g_threads{0};

int detect() {
    if (const char* env = std::getenv("WLAB_THREADS")) {
        int t = std::atoi(env);
        if (t >= 1) return t;
    }
    unsigned hc = std::thread::hardware_concurrency();
    return hc == 0 ? 1 : static_cast<int>(hc);
}

}  // namespace

int threads() {
    int t = g_threads.load(std::memory_order_relaxed);
    if (t == 0) {
        t = detect();
        g_threads.store(t, std::memory_order_relaxed);
    }
    return t;
}

void set_threads(int t) { g_threads.store(t < 1 ? 1 : t, std::memory_order_relaxed); }

}  // namespace wlab
