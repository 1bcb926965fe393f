#include "potcompose/parallel.hpp"

#include <atomic>

namespace potcompose {

namespace {
std::atomic<bool> g_parallel{true};
}

bool parallel_enabled() { return g_parallel.load(std::memory_order_relaxed); }

void set_parallel_enabled(bool on) {
    g_parallel.store(on, std::memory_order_relaxed);
}

int worker_count() {
#ifdef _OPENMP
    return parallel_enabled() ? omp_get_max_threads() : 1;
#else
    return 1;
#endif
}

}  // namespace potcompose
