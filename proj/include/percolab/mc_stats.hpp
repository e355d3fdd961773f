// Estimation infrastructure: Wilson proportions, delta-method ratios, and
// the deterministic replica-parallel execution contract. Replicas never
// communicate; tallies are folded in replica-index order, so the folded
// result is bit-identical for any worker count.
#pragma once

#include <cstdint>
#include <functional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "percolab/rng.hpp"

namespace percolab {

struct Estimate {
    double point = 0.0;
    double lo = 0.0;
    double hi = 0.0;
    double confidence = 0.95;
    std::int64_t trials = 0;
    std::int64_t successes = -1;  // -1 when not a Bernoulli proportion
    SeedSpec seed;

    double half_width() const { return (hi - lo) / 2.0; }
};

// z such that P(|N(0,1)| <= z) = confidence.
double normal_quantile_two_sided(double confidence);

Estimate wilson_interval(std::int64_t successes, std::int64_t trials, double confidence);

// Delta-method CI for num/den, treating the two estimates as independent.
// Identical num and den objects are still treated as independent, which makes
// the interval conservative for correlated inputs; the point is exactly 1.
Estimate ratio_estimate(const Estimate& num, const Estimate& den);

// Delta-method CI for num*other, same independence convention.
Estimate product_estimate(const Estimate& a, const Estimate& b);

struct ReplicaPlan {
    std::int64_t total = 0;
    int workers = 1;
    SeedSpec seed;  // replica r runs with seed.with_replica(r)
};

int default_workers();
void set_default_workers(int workers);

// workers = 0 selects the process-wide default (machine parallelism unless
// overridden via set_default_workers or PERCOLAB_WORKERS).
ReplicaPlan make_plan(std::int64_t total, const SeedSpec& seed, int workers = 0);

struct ReplicaFailure : std::runtime_error {
    ReplicaFailure(std::int64_t replica, const SeedSpec& seed, const std::string& what);
    std::int64_t replica_index;
    SeedSpec replica_seed;
};

namespace detail {

std::pair<std::int64_t, std::int64_t> worker_range(std::int64_t total, int workers, int w);

void parallel_workers(int workers, const std::function<void(int)>& run_worker);

}  // namespace detail

// Reference implementation: one worker, plain fold in replica order.
template <typename Tally, typename Body>
Tally run_replicas_serial(const ReplicaPlan& plan, Body&& body) {
    Tally tally{};
    for (std::int64_t r = 0; r < plan.total; ++r) {
        try {
            body(r, tally);
        } catch (const std::exception& e) {
            throw ReplicaFailure(r, plan.seed.with_replica(static_cast<std::uint64_t>(r)), e.what());
        }
    }
    return tally;
}

// Parallel implementation. Worker w owns the contiguous replica block
// worker_range(total, workers, w) and folds it in index order into its own
// tally; worker tallies are then merged in worker order. Tally::merge must be
// associative for the partition invariance to be exact; all tallies in this
// project are integer counts or maxima, so it is.
template <typename Tally, typename Body>
Tally run_replicas(const ReplicaPlan& plan, Body&& body) {
    if (plan.workers <= 1) return run_replicas_serial<Tally>(plan, body);

    std::vector<Tally> partial(static_cast<std::size_t>(plan.workers));
    std::vector<std::pair<std::int64_t, std::string>> failure(1, {-1, {}});

    detail::parallel_workers(plan.workers, [&](int w) {
        const auto [lo, hi] = detail::worker_range(plan.total, plan.workers, w);
        Tally local{};
        for (std::int64_t r = lo; r < hi; ++r) {
            try {
                body(r, local);
            } catch (const std::exception& e) {
                #pragma omp critical(percolab_replica_failure)
                {
                    if (failure[0].first < 0 || r < failure[0].first) failure[0] = {r, e.what()};
                }
                break;
            }
        }
        partial[static_cast<std::size_t>(w)] = std::move(local);
    });

    if (failure[0].first >= 0) {
        const auto r = failure[0].first;
        throw ReplicaFailure(r, plan.seed.with_replica(static_cast<std::uint64_t>(r)), failure[0].second);
    }

    Tally tally{};
    for (auto& p : partial) tally.merge(p);
    return tally;
}

// The workhorse tally: Bernoulli successes out of trials.
struct CountTally {
    std::int64_t successes = 0;
    std::int64_t trials = 0;

    void add(bool success) {
        successes += success ? 1 : 0;
        ++trials;
    }
    void merge(const CountTally& other) {
        successes += other.successes;
        trials += other.trials;
    }
    friend bool operator==(const CountTally&, const CountTally&) = default;
};

// Runs a Bernoulli experiment over the plan and wraps the folded counts in a
// Wilson interval carrying full seed provenance.
template <typename Experiment>
Estimate estimate_proportion(const ReplicaPlan& plan, double confidence, Experiment&& experiment) {
    const CountTally tally = run_replicas<CountTally>(
        plan, [&](std::int64_t r, CountTally& t) {
            t.add(experiment(r, Stream(plan.seed.with_replica(static_cast<std::uint64_t>(r)))));
        });
    Estimate est = wilson_interval(tally.successes, tally.trials, confidence);
    est.seed = plan.seed;
    return est;
}

}  // namespace percolab
