// Finite-size scaling: crossing probabilities of [0,n]^2, the level p_n at
// which the crossing probability passes 1 - epsilon, and the divergence
// statistic (p_n - p_c) n^2.
#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "percolab/mc_stats.hpp"
#include "percolab/rng.hpp"

namespace percolab {

// Monte Carlo proportion of level-p configurations of [0,n]^2 with an open
// left-right crossing, with Wilson CI.
Estimate crossing_probability(double p, int n, std::int64_t replicas, const SeedSpec& seed,
                              int workers = 0, double confidence = 0.99);

struct PnSchedule {
    std::int64_t first_batch = 1000;     // probe batches double from here
    std::int64_t probe_budget = 100000;  // replicas per probe before giving up
    double probe_confidence = 0.99;      // CI level for the separation test
};

struct PnEstimate {
    double p_hat = 0.0;
    double lo = 0.0;            // final bracket
    double hi = 0.0;
    double tolerance = 0.0;
    bool degenerate = false;    // crossing at p_c already >= 1 - epsilon
    bool unresolved = false;    // a probe exhausted its budget with the bracket still wide
    std::int64_t replicas_used = 0;
    Estimate last_probe;
    SeedSpec seed;

    double divergence_stat(int n) const {
        return (p_hat - 0.5) * static_cast<double>(n) * static_cast<double>(n);
    }
};

// Noisy bisection for the p where the [0,n]^2 crossing probability crosses
// 1 - epsilon. Each probe runs the doubling replica schedule until its Wilson
// CI separates from 1 - epsilon; a probe that exhausts the budget leaves the
// bracket unresolved and the result is flagged with the widened interval.
PnEstimate estimate_pn(int n, double epsilon, double tolerance, const SeedSpec& seed,
                       int workers = 0, const PnSchedule& schedule = {});

struct CorrelationRow {
    int n = 0;
    double epsilon = 0.0;
    double p_hat = 0.0;
    double ci_lo = 0.0;
    double ci_hi = 0.0;
    std::int64_t replicas = 0;
    double crossing_at_phat = 0.0;
    double divergence_stat = 0.0;
    bool degenerate = false;
    SeedSpec seed;
};

struct CorrelationTable {
    double epsilon = 0.0;
    double tolerance = 0.0;
    std::vector<CorrelationRow> rows;
    std::vector<int> excluded;          // n values whose p_hat was unresolved
    bool divergence_increasing = false;  // statistic strictly increasing over rows
};

// Per-n rows with the divergence statistic (p_hat - p_c) n^2; unresolved rows
// are excluded and listed. `divergence_increasing` records whether the
// statistic is strictly increasing across the retained rows.
CorrelationTable divergence_table(std::span<const int> n_list, double epsilon,
                                  const SeedSpec& seed, double tolerance = 2e-3,
                                  int workers = 0, const PnSchedule& schedule = {});

}  // namespace percolab
