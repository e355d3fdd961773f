// Invasion percolation from the origin: repeatedly invade the minimum-weight
// edge adjacent to the invaded subgraph. The frontier contains every
// non-invaded edge with an invaded endpoint, including edges whose both
// endpoints are already invaded — those close cycles and are what makes
// "Ann(n,2n) is a subgraph of the invaded cluster" possible at all.
#pragma once

#include <cstdint>
#include <optional>
#include <queue>
#include <vector>

#include "percolab/connectivity.hpp"
#include "percolab/lattice.hpp"
#include "percolab/random_field.hpp"

namespace percolab {

struct TraceEntry {
    EdgeKey edge = 0;
    double weight = 0.0;
    friend bool operator==(const TraceEntry&, const TraceEntry&) = default;
};

// Stopping rules; at least one must be set. Touching the horizon boundary
// always force-stops the run with the censored flag, whatever the rule.
struct StopRule {
    std::optional<std::int64_t> max_steps;
    std::optional<int> exit_radius;      // stop once an invaded vertex reaches norm >= r
    std::optional<Annulus> cover_annulus;  // stop once all induced annulus edges are invaded

    static StopRule steps(std::int64_t k);
    static StopRule exit_box(int radius);
    static StopRule annulus_covered(const Annulus& ann);

    bool any() const { return max_steps || exit_radius || cover_annulus; }
};

class InvasionState {
public:
    explicit InvasionState(const WeightField& field);

    // Pops the minimum-(weight, key) frontier edge, invades it, and expands
    // newly invaded endpoints. Returns nothing when the frontier is empty
    // (the invasion is pinned inside the horizon).
    std::optional<TraceEntry> invade_step(const WeightField& field);

    const std::vector<TraceEntry>& trace() const { return trace_; }
    std::int64_t step_count() const { return static_cast<std::int64_t>(trace_.size()); }
    BoxSpec horizon() const { return BoxSpec{indexer_.radius()}; }

    bool censored() const { return censored_; }
    bool rule_fired() const { return rule_fired_; }
    bool horizon_touched() const { return horizon_touched_; }
    int max_invaded_norm() const { return max_invaded_norm_; }
    std::int64_t frontier_size() const { return static_cast<std::int64_t>(heap_.size()); }

    bool vertex_invaded(Vertex v) const;
    bool edge_invaded(EdgeKey key) const;

    // The invaded subgraph as a finite cluster (vertices induced by the
    // invaded edge set, plus the origin).
    FiniteCluster to_cluster() const;

private:
    friend InvasionState run_invasion(const WeightField& field, const StopRule& rule);

    struct HeapEntry {
        double weight;
        EdgeKey key;
        // Min-heap on (weight, canonical edge key); the key breaks the
        // probability-2^-53 weight ties deterministically.
        friend bool operator>(const HeapEntry& l, const HeapEntry& r) {
            if (l.weight != r.weight) return l.weight > r.weight;
            return l.key > r.key;
        }
    };

    void invade_vertex(Vertex v, const WeightField& field);
    void consider_edge(Vertex a, bool horizontal, const WeightField& field);

    BoxIndexer indexer_;
    std::vector<std::uint8_t> vertex_invaded_;
    std::vector<std::uint8_t> edge_seen_;
    std::vector<std::uint8_t> edge_invaded_;
    std::priority_queue<HeapEntry, std::vector<HeapEntry>, std::greater<>> heap_;
    std::vector<TraceEntry> trace_;

    bool censored_ = false;
    bool rule_fired_ = false;
    bool horizon_touched_ = false;
    int max_invaded_norm_ = 0;

    // Annulus-coverage countdown, armed by run_invasion when requested.
    std::vector<std::uint8_t> cover_flags_;
    std::int64_t cover_remaining_ = -1;
};

// Iterates invade_step until the rule fires, the horizon boundary is touched
// (censored), or the frontier empties.
InvasionState run_invasion(const WeightField& field, const StopRule& rule);

enum class CoverageOutcome { covered, not_covered, indeterminate };

// Whether every induced edge of the annulus was invaded. A censored run that
// did not reach coverage is indeterminate: the truncated invasion proves
// nothing either way.
CoverageOutcome annulus_coverage_event(const InvasionState& state, const Annulus& ann);

// Suffix maxima M_k = max{weight_j : j >= k} of the invaded-weight trace for
// k >= burn_in, computed backward in one pass.
std::vector<double> running_max_trace(const InvasionState& state, std::int64_t burn_in);
std::vector<double> suffix_max(std::span<const double> weights, std::int64_t burn_in);

}  // namespace percolab
