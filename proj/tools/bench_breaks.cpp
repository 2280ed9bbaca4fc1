// Benchmark of the breakpoint-search kernel against the serial brute-force
// reference. The reference refits every candidate segment from scratch; the
// kernel evaluates candidates in O(1) from prefix moments and scans them
// with OpenMP. Both must select the same segmentation.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <random>
#include <vector>

#if defined(_OPENMP)
#include <omp.h>
#endif

#include "growth/detection.hpp"
#include "growth/reference.hpp"

using namespace growth;

namespace {

TimeSeries synthetic_series(std::size_t n, unsigned seed) {
    std::mt19937 rng(seed);
    std::normal_distribution<double> noise(0.0, 0.003);
    std::vector<Observation> obs;
    obs.reserve(n);
    const double span = 2000.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double t = span * static_cast<double>(i) / (n - 1);
        double r = 4.0 - 0.0012 * t;
        if (t > 1100.0) r -= 0.0008 * (t - 1100.0);
        if (t > 1700.0) r += 0.0005 * (t - 1700.0);
        r += noise(rng);
        obs.push_back({t + 1.0, 1.0 / std::max(r, 0.05)});
    }
    return TimeSeries("bench", std::move(obs));
}

template <typename F>
double time_ms(F&& fn, int repeats = 3) {
    double best = 1e300;
    for (int i = 0; i < repeats; ++i) {
        const auto start = std::chrono::steady_clock::now();
        fn();
        const auto stop = std::chrono::steady_clock::now();
        best = std::min(
            best,
            std::chrono::duration<double, std::milli>(stop - start).count());
    }
    return best;
}

void set_threads(int n) {
#if defined(_OPENMP)
    omp_set_num_threads(n);
#else
    (void)n;
#endif
}

int max_threads() {
#if defined(_OPENMP)
    return omp_get_max_threads();
#else
    return 1;
#endif
}

bool same_breaks(const SegmentedFit& a, const SegmentedFit& b) {
    return a.breakpoints == b.breakpoints;
}

} // namespace

int main(int argc, char** argv) {
    const std::size_t n_small = argc > 1 ? std::strtoull(argv[1], nullptr, 10) : 400;
    const std::size_t n_large = argc > 2 ? std::strtoull(argv[2], nullptr, 10) : 3000;
    const int threads = max_threads();

    std::printf("breakpoint search benchmark (threads available: %d)\n\n", threads);
    std::printf("%-34s %10s %10s  %s\n", "case", "n", "time", "breaks");

    // single break, moderate n: reference is O(n^2), kernel O(n)
    {
        const TimeSeries s = synthetic_series(n_large, 1);
        SegmentedFit ref, serial, parallel;
        const double t_ref =
            time_ms([&] { ref = reference::find_breakpoints_bruteforce(s, 1); }, 1);
        set_threads(1);
        const double t1 = time_ms([&] { serial = find_breakpoints(s, 1); });
        set_threads(threads);
        const double tp = time_ms([&] { parallel = find_breakpoints(s, 1); });
        std::printf("%-34s %10zu %8.2fms  %zu\n", "reference brute force (1 break)",
                    n_large, t_ref, ref.breakpoints.size());
        std::printf("%-34s %10zu %8.2fms  %zu\n", "prefix kernel, 1 thread",
                    n_large, t1, serial.breakpoints.size());
        std::printf("%-34s %10zu %8.2fms  %zu\n", "prefix kernel, all threads",
                    n_large, tp, parallel.breakpoints.size());
        if (!same_breaks(ref, serial) || !same_breaks(ref, parallel)) {
            std::printf("MISMATCH in single-break results\n");
            return 1;
        }
    }
    std::printf("\n");

    // two breaks, small n: reference is O(n^3)
    {
        const TimeSeries s = synthetic_series(n_small, 2);
        SegmentedFit ref, serial, parallel;
        const double t_ref =
            time_ms([&] { ref = reference::find_breakpoints_bruteforce(s, 2); }, 1);
        set_threads(1);
        const double t1 = time_ms([&] { serial = find_breakpoints(s, 2); });
        set_threads(threads);
        const double tp = time_ms([&] { parallel = find_breakpoints(s, 2); });
        std::printf("%-34s %10zu %8.2fms  %zu\n", "reference brute force (2 breaks)",
                    n_small, t_ref, ref.breakpoints.size());
        std::printf("%-34s %10zu %8.2fms  %zu\n", "prefix kernel, 1 thread",
                    n_small, t1, serial.breakpoints.size());
        std::printf("%-34s %10zu %8.2fms  %zu\n", "prefix kernel, all threads",
                    n_small, tp, parallel.breakpoints.size());
        if (!same_breaks(ref, serial) || !same_breaks(ref, parallel)) {
            std::printf("MISMATCH in double-break results\n");
            return 1;
        }
    }
    std::printf("\n");

    // two breaks at scale: kernel only, serial vs parallel speedup
    {
        const TimeSeries s = synthetic_series(n_large, 3);
        SegmentedFit serial, parallel;
        set_threads(1);
        const double t1 = time_ms([&] { serial = find_breakpoints(s, 2); });
        set_threads(threads);
        const double tp = time_ms([&] { parallel = find_breakpoints(s, 2); });
        std::printf("%-34s %10zu %8.2fms  %zu\n", "prefix kernel, 1 thread (2 breaks)",
                    n_large, t1, serial.breakpoints.size());
        std::printf("%-34s %10zu %8.2fms  %zu\n", "prefix kernel, all threads",
                    n_large, tp, parallel.breakpoints.size());
        if (!same_breaks(serial, parallel)) {
            std::printf("MISMATCH between serial and parallel kernel\n");
            return 1;
        }
        std::printf("speedup: %.2fx\n", t1 / tp);
    }

    std::printf("\nall variants agree\n");
    return 0;
}
