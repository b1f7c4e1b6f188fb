#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <string>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "emdscale/emd.hpp"
#include "emdscale/scaling.hpp"
#include "emdscale/synth.hpp"

using namespace emdscale;

namespace {

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
        .count();
}

bool same(const std::vector<double>& a, const std::vector<double>& b) {
    if (a.size() != b.size()) return false;
    for (std::size_t i = 0; i < a.size(); ++i) {
        // bitwise comparison; NaN slots must match as NaN
        if (a[i] != b[i] && !(a[i] != a[i] && b[i] != b[i])) return false;
    }
    return true;
}

} // namespace

// Times the replicate-parallel ensemble kernels against the serial reference
// and checks that both paths agree bit for bit.
int main(int argc, char** argv) {
    const std::size_t reps = argc > 1 ? std::strtoull(argv[1], nullptr, 10) : 16;
    const std::size_t length = argc > 2 ? std::strtoull(argv[2], nullptr, 10) : 8192;

    int threads = 1;
#ifdef _OPENMP
    threads = omp_get_max_threads();
#endif
    std::printf("replicates %zu, path length %zu, max threads %d\n\n", reps,
                length, threads);

    {
        auto t0 = std::chrono::steady_clock::now();
        const MonteCarloH serial =
            monte_carlo_h(0.7, length, reps, 42, {}, Exec::serial);
        const double ts = seconds_since(t0);
        t0 = std::chrono::steady_clock::now();
        const MonteCarloH parallel =
            monte_carlo_h(0.7, length, reps, 42, {}, Exec::parallel);
        const double tp = seconds_since(t0);
        std::printf("simulate ensemble   serial %7.3f s  parallel %7.3f s  "
                    "speedup %.2fx  identical %s\n",
                    ts, tp, ts / tp,
                    same(serial.h_stars, parallel.h_stars) ? "yes" : "NO");
    }

    {
        const Signal probe = generate_bm(length, 7);
        const Decomposition d = decompose(probe);
        auto t0 = std::chrono::steady_clock::now();
        const BaselineEnsemble serial =
            baseline_compare(d, reps, 42, {}, Exec::serial);
        const double ts = seconds_since(t0);
        t0 = std::chrono::steady_clock::now();
        const BaselineEnsemble parallel =
            baseline_compare(d, reps, 42, {}, Exec::parallel);
        const double tp = seconds_since(t0);
        std::vector<double> rs, rp;
        for (const auto& r : serial.replicates) rs.push_back(r.r2_bm_i);
        for (const auto& r : parallel.replicates) rp.push_back(r.r2_bm_i);
        std::printf("baseline ensemble   serial %7.3f s  parallel %7.3f s  "
                    "speedup %.2fx  identical %s\n",
                    ts, tp, ts / tp, same(rs, rp) ? "yes" : "NO");
    }

    return 0;
}
