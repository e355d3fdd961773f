// Benchmark: the flat union-find kernels against their serial BFS references,
// and the replica runner at 1 worker vs machine parallelism. Also asserts the
// tallies agree bit-for-bit, which is the whole point of the design.
#include <chrono>
#include <cstdint>
#include <iostream>

#include "percolab/connectivity.hpp"
#include "percolab/mc_stats.hpp"
#include "percolab/oracles.hpp"
#include "percolab/rng.hpp"

using namespace percolab;

namespace {

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

CountTally crossing_tally(std::int64_t replicas, int workers, int n, double p,
                          const SeedSpec& seed, bool reference) {
    const ReplicaPlan plan = make_plan(replicas, seed, workers);
    return run_replicas<CountTally>(plan, [&](std::int64_t r, CountTally& t) {
        const Stream stream(plan.seed.with_replica(static_cast<std::uint64_t>(r)));
        t.add(reference ? oracle::reference_lr_crossing(n, n, p, stream)
                        : sample_lr_crossing(n, n, p, stream));
    });
}

}  // namespace

int main() {
    const SeedSpec seed{7, 0, "bench"};
    const int n = 32;
    const double p = 0.55;
    const std::int64_t replicas = 20000;
    const int machine = default_workers();

    std::cout << "crossing kernel on [0," << n << "]^2 at p=" << p << ", " << replicas
              << " replicas\n";

    auto t0 = std::chrono::steady_clock::now();
    const CountTally ref = crossing_tally(replicas, 1, n, p, seed, true);
    const double t_ref = seconds_since(t0);
    std::cout << "  serial BFS reference:      " << t_ref << " s ("
              << static_cast<double>(replicas) / t_ref << " replicas/s)\n";

    t0 = std::chrono::steady_clock::now();
    const CountTally serial = crossing_tally(replicas, 1, n, p, seed, false);
    const double t_serial = seconds_since(t0);
    std::cout << "  union-find kernel (1 wkr): " << t_serial << " s ("
              << static_cast<double>(replicas) / t_serial << " replicas/s)\n";

    t0 = std::chrono::steady_clock::now();
    const CountTally parallel = crossing_tally(replicas, machine, n, p, seed, false);
    const double t_parallel = seconds_since(t0);
    std::cout << "  union-find kernel (" << machine << " wkr): " << t_parallel << " s ("
              << static_cast<double>(replicas) / t_parallel << " replicas/s)\n";

    if (!(ref == serial && serial == parallel)) {
        std::cerr << "FAIL: tallies disagree (reference " << ref.successes << ", serial "
                  << serial.successes << ", parallel " << parallel.successes << ")\n";
        return 1;
    }
    std::cout << "  tallies identical: " << serial.successes << "/" << serial.trials
              << " crossings\n";
    std::cout << "  kernel speedup over reference: " << t_ref / t_serial << "x; parallel scaling: "
              << t_serial / t_parallel << "x\n";
    return 0;
}
