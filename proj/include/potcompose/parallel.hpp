#pragma once

#include <cstddef>
#include <exception>
#include <mutex>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace potcompose {

/// Runtime switch for the OpenMP kernels. The serial path runs the exact
/// same per-element code in index order, so results are bit-identical
/// either way; tests and the benchmark flip this knob.
bool parallel_enabled();
void set_parallel_enabled(bool on);
int worker_count();

/// Parallel loop over [0, n). Each element writes only its own slot, so
/// the schedule never changes the arithmetic. Exceptions thrown by the
/// body are captured and rethrown on the calling thread.
template <class F>
void par_for(std::size_t n, F&& body) {
#ifdef _OPENMP
    if (parallel_enabled() && n > 1) {
        std::exception_ptr err;
        std::mutex err_mutex;
#pragma omp parallel for schedule(dynamic, 1)
        for (long long i = 0; i < static_cast<long long>(n); ++i) {
            try {
                body(static_cast<std::size_t>(i));
            } catch (...) {
                std::lock_guard<std::mutex> lock(err_mutex);
                if (!err) err = std::current_exception();
            }
        }
        if (err) std::rethrow_exception(err);
        return;
    }
#endif
    for (std::size_t i = 0; i < n; ++i) body(i);
}

}  // namespace potcompose
