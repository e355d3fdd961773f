#include "percolab/domination.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include "percolab/connectivity.hpp"
#include "percolab/errors.hpp"
#include "percolab/iic.hpp"
#include "percolab/invasion.hpp"
#include "percolab/random_field.hpp"

namespace percolab {

Estimate disconnection_probability(double p, int n, std::int64_t replicas,
                                   const SeedSpec& seed, int workers, double confidence) {
    if (n < 1) throw std::invalid_argument("percolab: scale must be >= 1");
    if (!(p >= 0.0 && p <= 1.0)) throw std::invalid_argument("percolab: p must be in [0,1]");
    const ReplicaPlan plan = make_plan(replicas, seed, workers);
    return estimate_proportion(plan, confidence, [p, n](std::int64_t, const Stream& stream) {
        return !sample_shell_connection(2 * n, 4 * n, p, stream);
    });
}

bool certificate_supports_disjoint(int n) {
    // Factor (a): induced edges of Ann(n,2n). Factor (b): edges with at least
    // one endpoint of norm > 2n. Every annulus edge has both endpoints of
    // norm <= 2n, so the supports cannot meet; enumerate to make sure.
    const auto ann = annulus_edges(make_annulus(n, 2 * n));
    for (const Edge& e : ann) {
        if (linf_norm(e.a) > 2 * n || linf_norm(e.b) > 2 * n) return false;
    }
    return true;
}

CertificateCrossCheck certificate_cross_check(int n, double p, std::int64_t min_qualifying,
                                              const SeedSpec& seed, int workers,
                                              std::int64_t max_fields) {
    if (n < 1) throw std::invalid_argument("percolab: scale must be >= 1");
    if (!(p > 0.0 && p <= 1.0)) throw std::invalid_argument("percolab: p must be in (0,1]");
    if (max_fields <= 0) max_fields = min_qualifying * 200;

    const Annulus ann = make_annulus(n, 2 * n);
    std::vector<EdgeKey> ann_keys;
    for (const Edge& e : annulus_edges(ann)) ann_keys.push_back(edge_key(e));
    const BoxSpec horizon{4 * n};
    const StopRule rule = StopRule::annulus_covered(ann);

    CertificateCrossCheck total;
    std::int64_t examined = 0;
    const std::int64_t batch = std::max<std::int64_t>(256, min_qualifying / 4);
    while (total.qualifying < min_qualifying && examined < max_fields) {
        const std::int64_t this_batch = std::min(batch, max_fields - examined);
        const ReplicaPlan plan = make_plan(this_batch, seed, workers);
        const std::int64_t base = examined;
        const CertificateCrossCheck got = run_replicas<CertificateCrossCheck>(
            plan, [&, base](std::int64_t r, CertificateCrossCheck& t) {
                const SeedSpec replica_seed =
                    seed.with_replica(static_cast<std::uint64_t>(base + r));
                // Condition (a) is imposed exactly: annulus weights are drawn
                // from Uniform[0, p), the conditional law of a weight given
                // that its edge is p-open.
                const WeightField field =
                    sample_weights(horizon, replica_seed).conditioned_below(ann_keys, p);
                ++t.fields_examined;
                // Condition (b) lives on edges disjoint from the annulus, so
                // the raw stream and the conditioned field agree there.
                const bool disconnected =
                    !sample_shell_connection(2 * n, 4 * n, p, field.stream());
                if (!disconnected) return;
                ++t.qualifying;
                const InvasionState state = run_invasion(field, rule);
                switch (annulus_coverage_event(state, ann)) {
                    case CoverageOutcome::covered: ++t.covered; break;
                    case CoverageOutcome::indeterminate: ++t.censored_without_coverage; break;
                    case CoverageOutcome::not_covered: ++t.violations; break;
                }
            });
        total.merge(got);
        examined += this_batch;
    }
    return total;
}

CertificateOutcome ipc_certificate_bound(int n, double p, std::int64_t replicas,
                                         const SeedSpec& seed, int workers,
                                         std::int64_t cross_check_fields) {
    if (!(p > 0.0 && p < 1.0)) throw std::invalid_argument("percolab: certificate level must be in (0,1)");
    CertificateOutcome out;
    out.n = n;
    out.p = p;
    out.event_edges = make_annulus(n, 2 * n).edge_count;
    out.disconnection = disconnection_probability(
        p, n, replicas, seed.with_purpose(seed.purpose + "/cert:disc"), workers);
    out.log10_prefactor = static_cast<double>(out.event_edges) * std::log10(p);
    out.log10_bound = out.disconnection.point > 0.0
                          ? out.log10_prefactor + std::log10(out.disconnection.point)
                          : -std::numeric_limits<double>::infinity();
    if (cross_check_fields > 0) {
        const CertificateCrossCheck cross = certificate_cross_check(
            n, p, cross_check_fields, seed.with_purpose(seed.purpose + "/cert:cross"), workers);
        out.cross_check = cross;
        if (cross.violations > 0) {
            throw soundness_error(
                "certificate cross-check failed: " + std::to_string(cross.violations) +
                " uncensored invasion(s) missed the annulus at n=" + std::to_string(n) +
                ", p=" + std::to_string(p));
        }
    }
    return out;
}

CertificateOutcome optimize_certificate(int n, std::span<const double> p_grid,
                                        std::int64_t replicas, const SeedSpec& seed,
                                        int workers) {
    if (p_grid.empty()) throw std::invalid_argument("percolab: certificate grid is empty");
    for (const double p : p_grid) {
        if (!(p >= kCriticalP && p < 1.0)) {
            throw std::invalid_argument("percolab: certificate grid must lie in [p_c, 1)");
        }
    }
    CertificateOutcome best;
    bool have = false;
    int idx = 0;
    for (const double p : p_grid) {
        CertificateOutcome cand = ipc_certificate_bound(
            n, p, replicas,
            seed.with_purpose(seed.purpose + "/grid:" + std::to_string(idx++)), workers);
        if (!have || cand.log10_bound > best.log10_bound) {
            best = cand;
            have = true;
        }
    }
    return best;
}

namespace {

// Shared gap pipeline for the annulus events and their box variants. The box
// variant swaps the event edge set (all of B(n)), the disconnection shell
// (B(n) vs the boundary of B(3n)), and the IIC upper factor (the conditioned
// ratio at finite radius rather than the scale-free quasi-multiplicativity
// constant).
struct GapGeometry {
    bool box_variant = false;

    std::int64_t event_edges(int n) const {
        return box_variant ? box_edge_count(n) : make_annulus(n, 2 * n).edge_count;
    }
    int shell_inner(int n) const { return box_variant ? n : 2 * n; }
    int shell_outer(int n) const { return box_variant ? 3 * n : 4 * n; }
};

Estimate geometry_disconnection(const GapGeometry& geom, double p, int n,
                                std::int64_t replicas, const SeedSpec& seed, int workers) {
    const int inner = geom.shell_inner(n);
    const int outer = geom.shell_outer(n);
    const ReplicaPlan plan = make_plan(replicas, seed, workers);
    return estimate_proportion(plan, 0.99, [p, inner, outer](std::int64_t, const Stream& stream) {
        return !sample_shell_connection(inner, outer, p, stream);
    });
}

std::vector<double> build_grid(double pn_hat, std::span<const double> extra) {
    std::vector<double> grid{kCriticalP,        kCriticalP + 0.01, kCriticalP + 0.02,
                             kCriticalP + 0.04, kCriticalP + 0.08, kCriticalP + 0.16,
                             pn_hat};
    grid.insert(grid.end(), extra.begin(), extra.end());
    for (double& p : grid) p = std::clamp(p, kCriticalP, 0.995);
    std::sort(grid.begin(), grid.end());
    grid.erase(std::unique(grid.begin(), grid.end(),
                           [](double a, double b) { return std::abs(a - b) < 1e-12; }),
               grid.end());
    return grid;
}

double regression_slope(const std::vector<GapRow>& rows) {
    if (rows.size() < 2) return 0.0;
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    const auto n = static_cast<double>(rows.size());
    for (const GapRow& r : rows) {
        sx += r.divergence_stat;
        sy += r.log10_ratio;
        sxx += r.divergence_stat * r.divergence_stat;
        sxy += r.divergence_stat * r.log10_ratio;
    }
    const double denom = n * sxx - sx * sx;
    return denom == 0.0 ? 0.0 : (n * sxy - sx * sy) / denom;
}

GapReport run_gap(const GapGeometry& geom, std::span<const int> n_list, double epsilon,
                  const SeedSpec& seed, int workers, const GapParams& params) {
    for (std::size_t i = 1; i < n_list.size(); ++i) {
        if (n_list[i] <= n_list[i - 1]) {
            throw std::invalid_argument("percolab: n list must be strictly increasing");
        }
    }
    GapReport report;
    report.epsilon = epsilon;

    // IIC upper factor. For the annulus events a single constant works at
    // every scale; take the largest CI-upper over the desk-validated pairs.
    double annulus_chat = 0.0;
    if (!geom.box_variant) {
        for (const int cn : {1, 2}) {
            for (const int cN : {16, 32}) {
                const Estimate chat = quasi_mult_constant(
                    cn, cN, params.chat_replicas,
                    seed.with_purpose(seed.purpose + "/gap:chat:" + std::to_string(cn) + ":" +
                                      std::to_string(cN)),
                    workers);
                annulus_chat = std::max(annulus_chat, chat.hi);
            }
        }
        report.iic_factor = annulus_chat;
    }

    PnSchedule schedule;
    schedule.probe_budget = params.pn_budget_replicas;

    for (const int n : n_list) {
        const SeedSpec row_seed =
            seed.with_purpose(seed.purpose + "/gap:n=" + std::to_string(n));
        const PnEstimate pn =
            estimate_pn(n, epsilon, params.pn_tolerance, row_seed, workers, schedule);
        if (pn.unresolved) {
            report.skipped.push_back(n);
            continue;
        }

        const auto grid = build_grid(pn.p_hat, params.extra_grid);
        GapRow row;
        row.n = n;
        row.pn_hat = pn.p_hat;
        row.divergence_stat = pn.divergence_stat(n);
        row.event_edges = geom.event_edges(n);
        row.seed = row_seed;

        double best_log10 = -std::numeric_limits<double>::infinity();
        int idx = 0;
        for (const double p : grid) {
            const Estimate disc = geometry_disconnection(
                geom, p, n, params.disc_replicas,
                row_seed.with_purpose(row_seed.purpose + "/disc:" + std::to_string(idx++)),
                workers);
            if (disc.point <= 0.0) continue;
            const double log10_bound =
                static_cast<double>(row.event_edges) * std::log10(p) + std::log10(disc.point);
            if (log10_bound > best_log10) {
                best_log10 = log10_bound;
                row.p_star = p;
                row.disconnection_at_star = disc;
            }
        }
        row.log10_ipc_lower = best_log10;

        double factor = annulus_chat;
        if (geom.box_variant) {
            const int N = std::max(16, 4 * n);
            const Estimate rho = shell_connection_probability(
                n, N, params.chat_replicas,
                row_seed.with_purpose(row_seed.purpose + "/boxfactor:rho"), workers);
            const Estimate pi_N = one_arm_probability(
                N, params.chat_replicas,
                row_seed.with_purpose(row_seed.purpose + "/boxfactor:pi"), workers);
            const Estimate ratio = ratio_estimate(rho, pi_N);
            factor = ratio.hi;
            report.iic_factor = std::max(report.iic_factor, factor);
        }
        row.log10_iic_upper =
            std::log10(factor) + static_cast<double>(row.event_edges) * std::log10(kCriticalP);
        row.log10_ratio = row.log10_ipc_lower - row.log10_iic_upper;
        row.verdict_ratio_ge_2 = row.log10_ratio >= std::log10(2.0);
        report.rows.push_back(row);
    }

    report.ratio_increasing = report.rows.size() >= 2;
    for (std::size_t i = 1; i < report.rows.size(); ++i) {
        if (!(report.rows[i].log10_ratio > report.rows[i - 1].log10_ratio)) {
            report.ratio_increasing = false;
        }
    }
    report.regression_slope = regression_slope(report.rows);
    for (const GapRow& row : report.rows) {
        if (row.verdict_ratio_ge_2) {
            report.witness_n = row.n;
            break;
        }
    }
    return report;
}

}  // namespace

GapReport gap_test(std::span<const int> n_list, double epsilon, const SeedSpec& seed,
                   int workers, const GapParams& params) {
    return run_gap(GapGeometry{false}, n_list, epsilon, seed, workers, params);
}

GapReport box_variant_gap(std::span<const int> n_list, double epsilon, const SeedSpec& seed,
                          int workers, const GapParams& params) {
    return run_gap(GapGeometry{true}, n_list, epsilon, seed, workers, params);
}

namespace {

struct DsvTally {
    std::vector<std::int64_t> zero_disconnecting;
    std::int64_t effective = 0;
    std::int64_t censored = 0;

    void ensure(std::size_t windows) {
        if (zero_disconnecting.size() < windows) zero_disconnecting.resize(windows, 0);
    }
    void merge(const DsvTally& other) {
        ensure(other.zero_disconnecting.size());
        for (std::size_t i = 0; i < other.zero_disconnecting.size(); ++i) {
            zero_disconnecting[i] += other.zero_disconnecting[i];
        }
        effective += other.effective;
        censored += other.censored;
    }
};

}  // namespace

DsvReport dsv_event_counter(ClusterSource source, std::span<const Annulus> windows,
                            int horizon, std::int64_t replicas, const SeedSpec& seed,
                            int workers, std::int64_t ipc_step_budget,
                            std::int64_t iic_attempt_cap) {
    if (windows.empty()) throw std::invalid_argument("percolab: need at least one window");
    int max_outer = 0;
    for (const Annulus& w : windows) max_outer = std::max(max_outer, w.outer);
    if (horizon < 2 * max_outer) {
        throw std::invalid_argument("percolab: horizon must be >= twice the largest window");
    }
    if (ipc_step_budget <= 0) {
        ipc_step_budget = std::max<std::int64_t>(32, static_cast<std::int64_t>(horizon) * horizon / 4);
    }

    const BoxSpec horizon_box{horizon};
    const Vertex origin{0, 0};
    const std::size_t nw = windows.size();
    const ReplicaPlan plan = make_plan(replicas, seed, workers);

    const DsvTally tally = run_replicas<DsvTally>(plan, [&](std::int64_t r, DsvTally& t) {
        t.ensure(nw);
        const SeedSpec replica_seed = seed.with_replica(static_cast<std::uint64_t>(r));
        FiniteCluster cluster;
        if (source == ClusterSource::ipc) {
            const WeightField field = sample_weights(horizon_box, replica_seed);
            const InvasionState state = run_invasion(field, StopRule::steps(ipc_step_budget));
            if (state.censored()) {
                ++t.censored;
                return;
            }
            cluster = state.to_cluster();
        } else {
            const ConditionedSample sample =
                iic_rejection_sample(horizon, replica_seed, iic_attempt_cap);
            if (!sample.accepted) {
                ++t.censored;
                return;
            }
            cluster = cluster_of(sample.config, origin);
        }
        ++t.effective;
        for (std::size_t i = 0; i < nw; ++i) {
            if (disconnecting_edges(cluster, origin, windows[i], horizon_box).empty()) {
                ++t.zero_disconnecting[i];
            }
        }
    });

    DsvReport report;
    report.source = source;
    report.horizon = horizon;
    report.replicas = replicas;
    report.effective = tally.effective;
    report.censored = tally.censored;
    report.censoring_rate =
        replicas > 0 ? static_cast<double>(tally.censored) / static_cast<double>(replicas) : 0.0;
    report.horizon_too_small = report.censoring_rate > 0.20;
    report.ipc_step_budget = source == ClusterSource::ipc ? ipc_step_budget : 0;
    report.seed = seed;
    if (tally.effective == 0) {
        throw unresolved_error("percolab: every replica was censored; enlarge the horizon");
    }
    for (std::size_t i = 0; i < nw; ++i) {
        DsvWindowStat stat;
        stat.window = windows[i];
        stat.no_disconnecting_frequency =
            wilson_interval(tally.zero_disconnecting[i], tally.effective, 0.95);
        stat.no_disconnecting_frequency.seed = seed;
        report.windows.push_back(stat);
    }
    return report;
}

}  // namespace percolab
