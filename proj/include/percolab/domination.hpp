// The quantitative comparison between the invasion cluster and the IIC:
// a certified lower bound for P[all annulus edges invaded] built from
// (a) the annulus being p-open and (b) the surrounding shell being
// disconnected at level p, the matching conditioned upper bound for the IIC,
// the per-scale gap between the two, and the disconnecting-edge counters
// that probe the geometric difference directly.
#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "percolab/lattice.hpp"
#include "percolab/mc_stats.hpp"
#include "percolab/near_critical.hpp"
#include "percolab/rng.hpp"

namespace percolab {

// P[B(2n) not connected to the boundary of B(4n)] at level p, sampled on the
// shell's own support (edges with at least one endpoint outside B(2n)).
Estimate disconnection_probability(double p, int n, std::int64_t replicas,
                                   const SeedSpec& seed, int workers = 0,
                                   double confidence = 0.99);

// Invasion cross-check tallies for the certificate mechanism: among fields
// where (a) and (b) hold, the invasion must cover the event edges before
// touching the horizon — every uncensored miss falsifies the implementation.
struct CertificateCrossCheck {
    std::int64_t fields_examined = 0;
    std::int64_t qualifying = 0;               // (a) and (b) both hold
    std::int64_t covered = 0;
    std::int64_t censored_without_coverage = 0;
    std::int64_t violations = 0;               // uncensored and not covered

    void merge(const CertificateCrossCheck& other) {
        fields_examined += other.fields_examined;
        qualifying += other.qualifying;
        covered += other.covered;
        censored_without_coverage += other.censored_without_coverage;
        violations += other.violations;
    }
    friend bool operator==(const CertificateCrossCheck&, const CertificateCrossCheck&) = default;
};

struct CertificateOutcome {
    int n = 0;
    double p = 0.0;
    std::int64_t event_edges = 0;        // |Ann(n,2n)| (or |edges of B(n)| for the box variant)
    Estimate disconnection;
    double log10_prefactor = 0.0;        // event_edges * log10(p)
    double log10_bound = 0.0;            // log10_prefactor + log10(disconnection point); -inf if 0
    std::optional<CertificateCrossCheck> cross_check;
};

// Lower bound p^{|Ann(n,2n)|} * disconnection(p, n) on the probability that
// Ann(n,2n) is a subgraph of the invasion cluster. When cross_check_fields >
// 0, additionally samples conditioned fields until that many satisfy (a) and
// (b) and runs the invasion on each; any uncensored miss throws.
CertificateOutcome ipc_certificate_bound(int n, double p, std::int64_t replicas,
                                         const SeedSpec& seed, int workers = 0,
                                         std::int64_t cross_check_fields = 0);

// Standalone cross-check runner (annulus geometry): collects `min_qualifying`
// fields satisfying (a) and (b) at level p and tallies invasion coverage.
CertificateCrossCheck certificate_cross_check(int n, double p, std::int64_t min_qualifying,
                                              const SeedSpec& seed, int workers = 0,
                                              std::int64_t max_fields = 0);

// True iff the edge supports of factors (a) and (b) are disjoint (checked
// structurally by enumeration).
bool certificate_supports_disjoint(int n);

// Evaluates the certificate across the grid (always including p_hat when
// given) and returns the maximizer.
CertificateOutcome optimize_certificate(int n, std::span<const double> p_grid,
                                        std::int64_t replicas, const SeedSpec& seed,
                                        int workers = 0);

struct GapRow {
    int n = 0;
    double p_star = 0.0;
    double pn_hat = 0.0;
    double divergence_stat = 0.0;
    double log10_ipc_lower = 0.0;
    double log10_iic_upper = 0.0;
    double log10_ratio = 0.0;
    bool verdict_ratio_ge_2 = false;
    std::int64_t event_edges = 0;
    Estimate disconnection_at_star;
    SeedSpec seed;
};

struct GapReport {
    double epsilon = 0.0;
    double iic_factor = 0.0;  // the C-hat (annulus) or conditioned-ratio (box) upper factor
    std::vector<GapRow> rows;
    std::vector<int> skipped;         // n with unresolved p_hat
    bool ratio_increasing = false;    // log-ratio strictly increasing over rows
    double regression_slope = 0.0;    // slope of log10_ratio against (p_hat - p_c) n^2
    std::optional<int> witness_n;     // smallest n with ratio >= 2, if reached
};

struct GapParams {
    std::int64_t disc_replicas = 20000;
    std::int64_t pn_budget_replicas = 100000;
    double pn_tolerance = 2e-3;
    std::int64_t chat_replicas = 40000;
    std::vector<double> extra_grid;  // additional certificate levels to try
};

// Per-n ratio of the certified invasion lower bound to the IIC upper bound
// C_hat * p_c^{|Ann(n,2n)|}; bounds and ratios are carried in log10 because
// the probabilities underflow doubles from n = 8 on.
GapReport gap_test(std::span<const int> n_list, double epsilon, const SeedSpec& seed,
                   int workers = 0, const GapParams& params = {});

// The box variant: event "all edges of B(n) open/invaded", disconnection
// shell B(n) vs boundary of B(3n), exponent |edges of B(n)|, and the IIC
// factor estimated from the conditioned ratio at finite radius.
GapReport box_variant_gap(std::span<const int> n_list, double epsilon, const SeedSpec& seed,
                          int workers = 0, const GapParams& params = {});

enum class ClusterSource { ipc, iic };

struct DsvWindowStat {
    Annulus window;
    Estimate no_disconnecting_frequency;  // fraction of effective replicas with zero
                                          // disconnecting edges in the window
};

struct DsvReport {
    ClusterSource source = ClusterSource::ipc;
    int horizon = 0;
    std::int64_t replicas = 0;
    std::int64_t effective = 0;
    std::int64_t censored = 0;
    double censoring_rate = 0.0;
    bool horizon_too_small = false;  // censoring rate > 20%
    std::int64_t ipc_step_budget = 0;
    std::vector<DsvWindowStat> windows;
    SeedSpec seed;
};

// Samples clusters (invasion truncations or IIC conditioned samples) and
// counts, per window annulus, how often the cluster has no disconnecting
// edge there. Censored replicas (horizon touched before the step budget, or
// rejection failure) are excluded from the frequencies and reported.
DsvReport dsv_event_counter(ClusterSource source, std::span<const Annulus> windows,
                            int horizon, std::int64_t replicas, const SeedSpec& seed,
                            int workers = 0, std::int64_t ipc_step_budget = 0,
                            std::int64_t iic_attempt_cap = 100000);

}  // namespace percolab
