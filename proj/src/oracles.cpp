#include "percolab/oracles.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>
#include <stdexcept>

namespace percolab::oracle {

namespace {

// Crossing indicator for an explicit open-edge mask over `edges`.
bool mask_crosses(const std::vector<Edge>& edges, std::uint64_t mask, int w, int h) {
    // BFS over vertices of the rectangle from the left wall.
    std::map<Vertex, std::vector<Vertex>> adj;
    for (std::size_t i = 0; i < edges.size(); ++i) {
        if (!(mask >> i & 1)) continue;
        adj[edges[i].a].push_back(edges[i].b);
        adj[edges[i].b].push_back(edges[i].a);
    }
    std::set<Vertex> visited;
    std::vector<Vertex> queue;
    for (int y = 0; y <= h; ++y) {
        const Vertex v{0, y};
        visited.insert(v);
        queue.push_back(v);
    }
    while (!queue.empty()) {
        const Vertex v = queue.back();
        queue.pop_back();
        if (v.x == w) return true;
        const auto it = adj.find(v);
        if (it == adj.end()) continue;
        for (const Vertex& u : it->second) {
            if (visited.insert(u).second) queue.push_back(u);
        }
    }
    return false;
}

}  // namespace

std::vector<std::int64_t> crossing_popcount_histogram(int w, int h) {
    const auto edges = rect_edges(w, h);
    if (edges.size() > 24) {
        throw std::invalid_argument("percolab: enumeration limited to 24 edges");
    }
    std::vector<std::int64_t> hist(edges.size() + 1, 0);
    const std::uint64_t total = std::uint64_t{1} << edges.size();
    for (std::uint64_t mask = 0; mask < total; ++mask) {
        if (mask_crosses(edges, mask, w, h)) {
            ++hist[static_cast<std::size_t>(__builtin_popcountll(mask))];
        }
    }
    return hist;
}

double enumerate_crossing_probability(int w, int h, double p) {
    const auto hist = crossing_popcount_histogram(w, h);
    const auto m = static_cast<int>(hist.size()) - 1;
    double prob = 0.0;
    for (int k = 0; k <= m; ++k) {
        if (hist[static_cast<std::size_t>(k)] == 0) continue;
        prob += static_cast<double>(hist[static_cast<std::size_t>(k)]) *
                std::pow(p, k) * std::pow(1.0 - p, m - k);
    }
    return prob;
}

double enumerate_crossing_root(int n, double target) {
    const auto hist = crossing_popcount_histogram(n, n);
    const auto m = static_cast<int>(hist.size()) - 1;
    auto eval = [&](double p) {
        double prob = 0.0;
        for (int k = 0; k <= m; ++k) {
            if (hist[static_cast<std::size_t>(k)] == 0) continue;
            prob += static_cast<double>(hist[static_cast<std::size_t>(k)]) *
                    std::pow(p, k) * std::pow(1.0 - p, m - k);
        }
        return prob;
    };
    double lo = 0.0, hi = 1.0;
    for (int iter = 0; iter < 100; ++iter) {
        const double mid = (lo + hi) / 2.0;
        if (eval(mid) < target) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    return (lo + hi) / 2.0;
}

double enumerate_b1_conditional(std::span<const EdgeKey> target_edges) {
    const auto edges = box_edges(BoxSpec{1});  // 12 edges
    std::vector<std::size_t> target_idx;
    for (const EdgeKey key : target_edges) {
        const auto it = std::find_if(edges.begin(), edges.end(),
                                     [key](const Edge& e) { return edge_key(e) == key; });
        if (it == edges.end()) {
            throw std::invalid_argument("percolab: target edge is not an edge of B(1)");
        }
        target_idx.push_back(static_cast<std::size_t>(it - edges.begin()));
    }

    // At p = 1/2 all 2^12 configurations are equally likely, so the
    // conditional probability is a ratio of configuration counts.
    std::int64_t conditioning = 0;
    std::int64_t joint = 0;
    const std::uint64_t total = std::uint64_t{1} << edges.size();
    for (std::uint64_t mask = 0; mask < total; ++mask) {
        // Origin touches the boundary iff one of its four incident edges is
        // open; find them by endpoint inspection rather than position.
        bool arm = false;
        for (std::size_t i = 0; i < edges.size() && !arm; ++i) {
            if ((mask >> i & 1) && (edges[i].a == Vertex{0, 0} || edges[i].b == Vertex{0, 0})) {
                arm = true;
            }
        }
        if (!arm) continue;
        ++conditioning;
        bool all = true;
        for (const std::size_t t : target_idx) {
            if (!(mask >> t & 1)) {
                all = false;
                break;
            }
        }
        if (all) ++joint;
    }
    return static_cast<double>(joint) / static_cast<double>(conditioning);
}

bool bfs_connected(const Configuration& config, Vertex a, Vertex b) {
    const int radius = config.region.radius;
    std::set<Vertex> visited{a};
    std::vector<Vertex> queue{a};
    while (!queue.empty()) {
        const Vertex v = queue.back();
        queue.pop_back();
        if (v == b) return true;
        const Vertex nbrs[4] = {
            {v.x + 1, v.y}, {v.x - 1, v.y}, {v.x, v.y + 1}, {v.x, v.y - 1}};
        for (const Vertex& u : nbrs) {
            if (linf_norm(u) > radius) continue;
            if (!config.is_open(edge_key(v, u))) continue;
            if (visited.insert(u).second) queue.push_back(u);
        }
    }
    return false;
}

bool reference_lr_crossing(int w, int h, double p, const Stream& stream) {
    std::set<Vertex> visited;
    std::vector<Vertex> queue;
    for (int y = 0; y <= h; ++y) {
        visited.insert(Vertex{0, y});
        queue.push_back(Vertex{0, y});
    }
    auto open = [&](Vertex u, Vertex v) {
        if (v < u) std::swap(u, v);
        const bool horizontal = v.x != u.x;
        return stream.edge_open(detail::ekey_unchecked(u.x, u.y, horizontal), p);
    };
    while (!queue.empty()) {
        const Vertex v = queue.back();
        queue.pop_back();
        if (v.x == w) return true;
        const Vertex nbrs[4] = {
            {v.x + 1, v.y}, {v.x - 1, v.y}, {v.x, v.y + 1}, {v.x, v.y - 1}};
        for (const Vertex& u : nbrs) {
            if (u.x < 0 || u.x > w || u.y < 0 || u.y > h) continue;
            if (!open(v, u)) continue;
            if (visited.insert(u).second) queue.push_back(u);
        }
    }
    return false;
}

ScanInvasionResult scan_invasion(const WeightField& field, const StopRule& rule) {
    if (!rule.any()) {
        throw std::invalid_argument("percolab: stop rule must set at least one condition");
    }
    const int radius = field.region().radius;
    const auto all_edges = box_edges(field.region());

    std::set<Vertex> invaded_vertices{Vertex{0, 0}};
    std::set<EdgeKey> invaded_edges;
    ScanInvasionResult result;

    std::vector<EdgeKey> cover;
    if (rule.cover_annulus) {
        for (const Edge& e : annulus_edges(*rule.cover_annulus)) cover.push_back(edge_key(e));
    }

    auto covered = [&] {
        for (const EdgeKey key : cover) {
            if (!invaded_edges.count(key)) return false;
        }
        return true;
    };
    auto max_norm = [&] {
        int m = 0;
        for (const Vertex& v : invaded_vertices) m = std::max(m, linf_norm(v));
        return m;
    };

    bool horizon_touched = linf_norm(Vertex{0, 0}) >= radius;
    for (;;) {
        if (rule.max_steps && static_cast<std::int64_t>(result.trace.size()) >= *rule.max_steps) {
            result.rule_fired = true;
            break;
        }
        if (rule.cover_annulus && covered()) {
            result.rule_fired = true;
            break;
        }
        if (rule.exit_radius && max_norm() >= *rule.exit_radius) {
            result.rule_fired = true;
            break;
        }
        if (horizon_touched) {
            result.censored = true;
            break;
        }

        // Full scan: the minimum-(weight, key) non-invaded edge adjacent to
        // the invaded vertex set.
        bool found = false;
        TraceEntry best;
        for (const Edge& e : all_edges) {
            const EdgeKey key = edge_key(e);
            if (invaded_edges.count(key)) continue;
            if (!invaded_vertices.count(e.a) && !invaded_vertices.count(e.b)) continue;
            const double weight = field.weight(key);
            if (!found || weight < best.weight ||
                (weight == best.weight && key < best.edge)) {
                best = TraceEntry{key, weight};
                found = true;
            }
        }
        if (!found) {
            result.censored = true;
            break;
        }
        invaded_edges.insert(best.edge);
        result.trace.push_back(best);
        const Edge e = edge_from_key(best.edge);
        for (const Vertex v : {e.a, e.b}) {
            if (invaded_vertices.insert(v).second) {
                if (linf_norm(v) >= radius) horizon_touched = true;
            }
        }
    }
    return result;
}

std::vector<Edge> disconnecting_edges_by_deletion(const FiniteCluster& cluster, Vertex origin,
                                                  const Annulus& window, BoxSpec horizon) {
    if (!cluster.has_vertex(origin)) {
        throw std::invalid_argument("percolab: origin is not part of the cluster");
    }
    std::vector<Edge> out;
    for (const Edge& candidate : cluster.edges) {
        const int na = linf_norm(candidate.a);
        const int nb = linf_norm(candidate.b);
        if (!(na > window.inner && na <= window.outer && nb > window.inner && nb <= window.outer)) {
            continue;
        }
        // BFS from the origin with the candidate removed.
        std::set<Vertex> visited{origin};
        std::vector<Vertex> queue{origin};
        std::multimap<Vertex, Vertex> adj;
        for (const Edge& e : cluster.edges) {
            if (e == candidate) continue;
            adj.insert({e.a, e.b});
            adj.insert({e.b, e.a});
        }
        bool touches_boundary = linf_norm(origin) >= horizon.radius;
        while (!queue.empty() && !touches_boundary) {
            const Vertex v = queue.back();
            queue.pop_back();
            auto [lo, hi] = adj.equal_range(v);
            for (auto it = lo; it != hi; ++it) {
                if (visited.insert(it->second).second) {
                    if (linf_norm(it->second) >= horizon.radius) touches_boundary = true;
                    queue.push_back(it->second);
                }
            }
        }
        if (!touches_boundary) out.push_back(candidate);
    }
    return out;
}

}  // namespace percolab::oracle
