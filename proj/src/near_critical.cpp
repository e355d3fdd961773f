#include "percolab/near_critical.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>

#include "percolab/connectivity.hpp"
#include "percolab/random_field.hpp"

namespace percolab {

Estimate crossing_probability(double p, int n, std::int64_t replicas, const SeedSpec& seed,
                              int workers, double confidence) {
    if (n < 1) throw std::invalid_argument("percolab: crossing box size must be >= 1");
    if (replicas < 1) throw std::invalid_argument("percolab: need at least one replica");
    if (!(p >= 0.0 && p <= 1.0)) throw std::invalid_argument("percolab: p must be in [0,1]");
    const ReplicaPlan plan = make_plan(replicas, seed, workers);
    return estimate_proportion(plan, confidence, [p, n](std::int64_t, const Stream& stream) {
        return sample_lr_crossing(n, n, p, stream);
    });
}

namespace {

enum class ProbeVerdict { below, above, unresolved };

struct ProbeResult {
    ProbeVerdict verdict = ProbeVerdict::unresolved;
    Estimate estimate;
    std::int64_t replicas_used = 0;
};

// Runs the doubling schedule at level p until the Wilson CI separates the
// crossing estimate from the 1 - epsilon target. Replica indices continue
// across batches, so the final estimate reuses every draw.
ProbeResult run_probe(int n, double p, double target, const SeedSpec& probe_seed,
                      int workers, const PnSchedule& schedule) {
    ProbeResult result;
    CountTally tally;
    std::int64_t done = 0;
    std::int64_t next_total = schedule.first_batch;
    while (true) {
        next_total = std::min(next_total, schedule.probe_budget);
        const std::int64_t batch = next_total - done;
        ReplicaPlan plan = make_plan(batch, probe_seed, workers);
        const CountTally batch_tally = run_replicas<CountTally>(
            plan, [&, done](std::int64_t r, CountTally& t) {
                const Stream stream(
                    probe_seed.with_replica(static_cast<std::uint64_t>(done + r)));
                t.add(sample_lr_crossing(n, n, p, stream));
            });
        tally.merge(batch_tally);
        done = next_total;

        Estimate est = wilson_interval(tally.successes, tally.trials, schedule.probe_confidence);
        est.seed = probe_seed;
        result.estimate = est;
        result.replicas_used = done;
        if (est.lo > target) {
            result.verdict = ProbeVerdict::above;
            return result;
        }
        if (est.hi < target) {
            result.verdict = ProbeVerdict::below;
            return result;
        }
        if (done >= schedule.probe_budget) {
            result.verdict = ProbeVerdict::unresolved;
            return result;
        }
        next_total = done * 2;
    }
}

}  // namespace

PnEstimate estimate_pn(int n, double epsilon, double tolerance, const SeedSpec& seed,
                       int workers, const PnSchedule& schedule) {
    if (!(epsilon > 0.0 && epsilon < 0.5)) {
        throw std::invalid_argument("percolab: epsilon must be in (0, 1/2)");
    }
    if (!(tolerance > 0.0)) throw std::invalid_argument("percolab: tolerance must be > 0");
    if (n < 1) throw std::invalid_argument("percolab: box size must be >= 1");

    const double target = 1.0 - epsilon;
    PnEstimate out;
    out.tolerance = tolerance;
    out.seed = seed;

    int probe_index = 0;
    auto probe_at = [&](double p) {
        const SeedSpec probe_seed =
            seed.with_purpose(seed.purpose + "/pn:n=" + std::to_string(n) +
                              ":probe=" + std::to_string(probe_index++));
        ProbeResult r = run_probe(n, p, target, probe_seed, workers, schedule);
        out.replicas_used += r.replicas_used;
        out.last_probe = r.estimate;
        return r;
    };

    // Degenerate clamp: if the crossing probability at p_c already reaches
    // the target, sup{p : L(p) > n} collapses to p_c.
    const ProbeResult at_pc = probe_at(kCriticalP);
    if (at_pc.verdict == ProbeVerdict::above) {
        out.p_hat = kCriticalP;
        out.lo = out.hi = kCriticalP;
        out.degenerate = true;
        return out;
    }
    if (at_pc.verdict == ProbeVerdict::unresolved) {
        // The target sits inside the CI at p_c itself; report the clamp but
        // flag it, since the sign of the excess is not established.
        out.p_hat = kCriticalP;
        out.lo = out.hi = kCriticalP;
        out.degenerate = true;
        out.unresolved = true;
        return out;
    }

    double lo = kCriticalP;  // crossing below target here
    double hi = 1.0;         // weights are < 1, so every edge is open: above target
    while ((hi - lo) / 2.0 > tolerance) {
        const double mid = (lo + hi) / 2.0;
        const ProbeResult r = probe_at(mid);
        if (r.verdict == ProbeVerdict::above) {
            hi = mid;
        } else if (r.verdict == ProbeVerdict::below) {
            lo = mid;
        } else {
            out.p_hat = mid;
            out.lo = lo;
            out.hi = hi;
            out.unresolved = true;
            return out;
        }
    }
    out.p_hat = (lo + hi) / 2.0;
    out.lo = lo;
    out.hi = hi;
    return out;
}

CorrelationTable divergence_table(std::span<const int> n_list, double epsilon,
                                  const SeedSpec& seed, double tolerance, int workers,
                                  const PnSchedule& schedule) {
    for (std::size_t i = 1; i < n_list.size(); ++i) {
        if (n_list[i] <= n_list[i - 1]) {
            throw std::invalid_argument("percolab: n list must be strictly increasing");
        }
    }
    CorrelationTable table;
    table.epsilon = epsilon;
    table.tolerance = tolerance;

    for (const int n : n_list) {
        const SeedSpec row_seed = seed.with_purpose(seed.purpose + "/corrlen:n=" + std::to_string(n));
        const PnEstimate pn = estimate_pn(n, epsilon, tolerance, row_seed, workers, schedule);
        if (pn.unresolved) {
            table.excluded.push_back(n);
            continue;
        }
        CorrelationRow row;
        row.n = n;
        row.epsilon = epsilon;
        row.p_hat = pn.p_hat;
        row.ci_lo = pn.lo;
        row.ci_hi = pn.hi;
        row.replicas = pn.replicas_used;
        row.divergence_stat = pn.divergence_stat(n);
        row.degenerate = pn.degenerate;
        row.seed = row_seed;
        row.crossing_at_phat =
            crossing_probability(pn.p_hat, n, 20000, row_seed.with_purpose(row_seed.purpose + "/at-phat"),
                                 workers)
                .point;
        table.rows.push_back(row);
    }

    table.divergence_increasing = table.rows.size() >= 2;
    for (std::size_t i = 1; i < table.rows.size(); ++i) {
        if (!(table.rows[i].divergence_stat > table.rows[i - 1].divergence_stat)) {
            table.divergence_increasing = false;
        }
    }
    return table;
}

}  // namespace percolab
