// Timing comparison of the OpenMP kernels against the serial reference
// path (same per-element code, plain loop). Also asserts that both paths
// produce bit-identical results, which the scheduling guarantees.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <vector>

#include "potcompose/catalog.hpp"
#include "potcompose/composition.hpp"
#include "potcompose/parallel.hpp"
#include "potcompose/tail_table.hpp"
#include "potcompose/verify.hpp"

namespace pc = potcompose;

namespace {

using Clock = std::chrono::steady_clock;

template <class F>
double time_ms(F&& f) {
    auto t0 = Clock::now();
    f();
    auto t1 = Clock::now();
    return std::chrono::duration<double, std::milli>(t1 - t0).count();
}

template <class F>
void report(const char* name, F&& f) {
    pc::set_parallel_enabled(false);
    double serial = time_ms(f);
    pc::set_parallel_enabled(true);
    double parallel = time_ms(f);
    std::printf("%-28s serial %8.1f ms   openmp %8.1f ms   speedup %.2fx\n", name, serial,
                parallel, serial / parallel);
}

}  // namespace

int main() {
    std::printf("workers available: %d\n", pc::worker_count());

    pc::SpecPtr ro = pc::make_potential(pc::Family::RadialOscillator, {{"g", 1.5}});
    pc::SpecPtr well = pc::make_potential(pc::Family::InfiniteWell, {{"width", 1.0}});

    report("seed construction checks", [&] { (void)pc::virtual_state(ro, 2); });

    pc::NodelessSolution seed = pc::virtual_state(ro, 1);
    report("tail tabulation (512 knots)", [&] {
        (void)pc::tabulate_tail_integral(seed.log_abs, ro->domain, 512);
    });

    pc::Composition comp = pc::compose(pc::virtual_state(ro, 1), well);
    report("grid sampling (4096 pts)", [&] {
        (void)pc::sample_grid(comp, 4096, 1e-3, {1, 2, 3});
    });
    report("residual check (m=1..3)", [&] {
        for (int m = 1; m <= 3; ++m) (void)pc::residual_check(comp, m, 64, 1e-3, 1e-6);
    });
    report("orthogonality gram (m<=4)", [&] {
        (void)pc::orthogonality_check(comp, 4, 1e-8);
    });

    // bitwise serial-vs-parallel agreement on a sampled grid
    pc::set_parallel_enabled(false);
    pc::GridSample a = pc::sample_grid(comp, 1024, 1e-3, {1, 2});
    pc::set_parallel_enabled(true);
    pc::GridSample b = pc::sample_grid(comp, 1024, 1e-3, {1, 2});
    std::size_t mismatches = 0;
    for (std::size_t c = 0; c < a.columns.size(); ++c)
        for (std::size_t i = 0; i < a.xs.size(); ++i)
            if (a.columns[c][i] != b.columns[c][i]) ++mismatches;
    std::printf("serial vs openmp grid mismatches: %zu %s\n", mismatches,
                mismatches == 0 ? "(bit-identical)" : "(BUG)");
    return mismatches == 0 ? 0 : 1;
}
