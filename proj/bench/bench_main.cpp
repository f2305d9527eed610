// Times the production paths against the serial reference implementations
// kept for testing. The production side is OpenMP-parallel; for the sampler
// it is also algorithmically faster on a single thread (it updates the
// reduced kernel in place instead of rebuilding it for every cell), so the
// ratio mixes both effects. Minimum over alternating rounds to suppress
// ordering and frequency-scaling artifacts. No assertions: agreement between
// the paths is covered by the test suite.
#include <pfpp/fredholm.hpp>
#include <pfpp/instances.hpp>
#include <pfpp/kernels.hpp>
#include <pfpp/rng.hpp>
#include <pfpp/sampler.hpp>

#include <chrono>
#include <cstdio>
#include <functional>
#include <limits>
#include <string>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace {

double once(const std::function<void()>& fn) {
    const auto start = std::chrono::steady_clock::now();
    fn();
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

void bench(const std::string& name, const std::string& workload,
           const std::function<void()>& reference, const std::function<void()>& production) {
    reference();  // warm-up, untimed
    production();
    double ref = std::numeric_limits<double>::infinity();
    double prod = ref;
    for (int round = 0; round < 5; ++round) {
        ref = std::min(ref, once(reference));
        prod = std::min(prod, once(production));
    }
    std::printf("%-22s %-34s %12.3f %13.3f %8.2fx\n", name.c_str(), workload.c_str(),
                ref * 1e3, prod * 1e3, ref / prod);
}

}  // namespace

int main() {
#ifdef _OPENMP
    std::printf("OpenMP enabled, max threads %d\n\n", omp_get_max_threads());
#else
    std::printf("built without OpenMP: both columns run serially\n\n");
#endif
    std::printf("%-22s %-34s %12s %13s %9s\n", "path", "workload", "reference ms",
                "production ms", "ratio");
    std::printf("%-22s %-34s %12s %13s %9s\n", "----", "--------", "------------",
                "-------------", "-----");

    using namespace pfpp;

    {
        const CseKernel k(24);
        CounterRng rng(901, 0);
        std::vector<std::vector<double>> tuples(512);
        for (auto& t : tuples) {
            t.resize(4);
            for (double& x : t) x = 6.28318530717958648 * rng.next_uniform();
        }
        bench("correlation_batch", "cse(24), 512 tuples of 4 points",
              [&] { correlation_batch_serial(k, tuples); },
              [&] { correlation_batch(k, tuples); });
    }

    {
        CounterRng rng(902, 0);
        const GridKernel t = random_grid_kernel(rng, 12, 0.4);
        bench("fredholm_series", "12 cells (4096 subsets)",
              [&] { fredholm_series_serial(t); }, [&] { fredholm_series(t); });
    }

    {
        CounterRng rng(903, 0);
        const GridKernel t = random_projection_kernel(rng, 12, 5);
        bench("principal_qdets", "rank-5 projection on 12 cells",
              [&] { principal_qdets_serial(t); }, [&] { principal_qdets(t); });
    }

    {
        CounterRng rng(904, 0);
        const GridKernel t = random_projection_kernel(rng, 10, 4);
        bench("sequential_sample", "64 draws, rank-4 on 10 cells",
              [&] { sequential_sample_serial(t, 31, 64); },
              [&] { sequential_sample(t, 31, 64); });
    }

    return 0;
}
