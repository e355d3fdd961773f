#include "percolab/invasion.hpp"

#include <algorithm>
#include <stdexcept>

namespace percolab {

StopRule StopRule::steps(std::int64_t k) {
    if (k < 0) throw std::invalid_argument("percolab: max_steps must be >= 0");
    StopRule r;
    r.max_steps = k;
    return r;
}

StopRule StopRule::exit_box(int radius) {
    if (radius < 1) throw std::invalid_argument("percolab: exit radius must be >= 1");
    StopRule r;
    r.exit_radius = radius;
    return r;
}

StopRule StopRule::annulus_covered(const Annulus& ann) {
    StopRule r;
    r.cover_annulus = ann;
    return r;
}

InvasionState::InvasionState(const WeightField& field)
    : indexer_(field.region().radius),
      vertex_invaded_(static_cast<std::size_t>(indexer_.vertex_count()), 0),
      edge_seen_(static_cast<std::size_t>(indexer_.edge_count()), 0),
      edge_invaded_(static_cast<std::size_t>(indexer_.edge_count()), 0) {
    invade_vertex(Vertex{0, 0}, field);
}

void InvasionState::consider_edge(Vertex a, bool horizontal, const WeightField& field) {
    const std::int64_t idx = indexer_.edge_index(a, horizontal);
    if (edge_seen_[static_cast<std::size_t>(idx)]) return;
    edge_seen_[static_cast<std::size_t>(idx)] = 1;
    const EdgeKey key = detail::ekey_unchecked(a.x, a.y, horizontal);
    heap_.push(HeapEntry{field.weight(key), key});
}

void InvasionState::invade_vertex(Vertex v, const WeightField& field) {
    vertex_invaded_[static_cast<std::size_t>(indexer_.vertex_index(v))] = 1;
    const int norm = linf_norm(v);
    max_invaded_norm_ = std::max(max_invaded_norm_, norm);
    if (norm >= indexer_.radius()) {
        // Pinned at the horizon: do not expand; the caller decides whether
        // this counts as censoring or as its exit rule firing.
        horizon_touched_ = true;
        return;
    }
    consider_edge(v, true, field);                        // (v, v + e_x)
    consider_edge(Vertex{v.x - 1, v.y}, true, field);     // (v - e_x, v)
    consider_edge(v, false, field);                       // (v, v + e_y)
    consider_edge(Vertex{v.x, v.y - 1}, false, field);    // (v - e_y, v)
}

std::optional<TraceEntry> InvasionState::invade_step(const WeightField& field) {
    if (heap_.empty()) return std::nullopt;
    const HeapEntry top = heap_.top();
    heap_.pop();

    const Edge e = edge_from_key(top.key);
    const std::int64_t idx = indexer_.edge_index(e);
    edge_invaded_[static_cast<std::size_t>(idx)] = 1;
    trace_.push_back(TraceEntry{top.key, top.weight});
    if (cover_remaining_ >= 0 && cover_flags_[static_cast<std::size_t>(idx)]) {
        --cover_remaining_;
    }

    if (!vertex_invaded_[static_cast<std::size_t>(indexer_.vertex_index(e.a))]) {
        invade_vertex(e.a, field);
    }
    if (!vertex_invaded_[static_cast<std::size_t>(indexer_.vertex_index(e.b))]) {
        invade_vertex(e.b, field);
    }
    return TraceEntry{top.key, top.weight};
}

bool InvasionState::vertex_invaded(Vertex v) const {
    if (!indexer_.contains(v)) return false;
    return vertex_invaded_[static_cast<std::size_t>(indexer_.vertex_index(v))] != 0;
}

bool InvasionState::edge_invaded(EdgeKey key) const {
    const Edge e = edge_from_key(key);
    if (!indexer_.contains(e.a) || !indexer_.contains(e.b)) return false;
    return edge_invaded_[static_cast<std::size_t>(indexer_.edge_index(e))] != 0;
}

FiniteCluster InvasionState::to_cluster() const {
    FiniteCluster cluster;
    cluster.vertices.push_back(Vertex{0, 0});
    for (const TraceEntry& entry : trace_) {
        const Edge e = edge_from_key(entry.edge);
        cluster.edges.push_back(e);
        cluster.vertices.push_back(e.a);
        cluster.vertices.push_back(e.b);
    }
    std::sort(cluster.vertices.begin(), cluster.vertices.end());
    cluster.vertices.erase(std::unique(cluster.vertices.begin(), cluster.vertices.end()),
                           cluster.vertices.end());
    std::sort(cluster.edges.begin(), cluster.edges.end(),
              [](const Edge& l, const Edge& r) { return edge_key(l) < edge_key(r); });
    cluster.contains_origin = true;
    cluster.bbox_lo = cluster.bbox_hi = cluster.vertices.front();
    for (const Vertex& u : cluster.vertices) {
        cluster.bbox_lo.x = std::min(cluster.bbox_lo.x, u.x);
        cluster.bbox_lo.y = std::min(cluster.bbox_lo.y, u.y);
        cluster.bbox_hi.x = std::max(cluster.bbox_hi.x, u.x);
        cluster.bbox_hi.y = std::max(cluster.bbox_hi.y, u.y);
    }
    return cluster;
}

InvasionState run_invasion(const WeightField& field, const StopRule& rule) {
    if (!rule.any()) {
        throw std::invalid_argument("percolab: stop rule must set at least one condition");
    }
    InvasionState state(field);

    if (rule.cover_annulus) {
        const Annulus& ann = *rule.cover_annulus;
        if (ann.outer > state.indexer_.radius()) {
            throw std::invalid_argument("percolab: coverage annulus exceeds the horizon");
        }
        state.cover_flags_ = annulus_edge_flags(ann, state.indexer_.radius());
        state.cover_remaining_ = ann.edge_count;
        for (std::size_t i = 0; i < state.cover_flags_.size(); ++i) {
            if (state.cover_flags_[i] && state.edge_invaded_[i]) --state.cover_remaining_;
        }
    }

    for (;;) {
        if (rule.max_steps && state.step_count() >= *rule.max_steps) {
            state.rule_fired_ = true;
            break;
        }
        if (rule.cover_annulus && state.cover_remaining_ == 0) {
            state.rule_fired_ = true;
            break;
        }
        if (rule.exit_radius && state.max_invaded_norm_ >= *rule.exit_radius) {
            state.rule_fired_ = true;
            break;
        }
        if (state.horizon_touched_) {
            state.censored_ = true;
            break;
        }
        if (!state.invade_step(field)) {
            // Frontier exhausted without the rule firing (possible only on
            // degenerate horizons); further inference is censored.
            state.censored_ = true;
            break;
        }
    }
    return state;
}

CoverageOutcome annulus_coverage_event(const InvasionState& state, const Annulus& ann) {
    bool all = true;
    for (const Edge& e : annulus_edges(ann)) {
        if (!state.edge_invaded(edge_key(e))) {
            all = false;
            break;
        }
    }
    if (all) return CoverageOutcome::covered;
    if (state.censored()) return CoverageOutcome::indeterminate;
    return CoverageOutcome::not_covered;
}

std::vector<double> suffix_max(std::span<const double> weights, std::int64_t burn_in) {
    if (burn_in < 0 || burn_in >= static_cast<std::int64_t>(weights.size())) {
        throw std::invalid_argument("percolab: burn-in must be < trace length");
    }
    std::vector<double> out(weights.size() - static_cast<std::size_t>(burn_in));
    double running = weights[weights.size() - 1];
    for (std::int64_t j = static_cast<std::int64_t>(weights.size()) - 1; j >= burn_in; --j) {
        running = std::max(running, weights[static_cast<std::size_t>(j)]);
        out[static_cast<std::size_t>(j - burn_in)] = running;
    }
    return out;
}

std::vector<double> running_max_trace(const InvasionState& state, std::int64_t burn_in) {
    std::vector<double> weights;
    weights.reserve(state.trace().size());
    for (const TraceEntry& t : state.trace()) weights.push_back(t.weight);
    return suffix_max(weights, burn_in);
}

}  // namespace percolab
