#include "percolab/connectivity.hpp"

#include <algorithm>
#include <stdexcept>
#include <unordered_set>

namespace percolab {

ClusterLabeling::ClusterLabeling(std::int64_t count) {
    reset(count);
}

void ClusterLabeling::reset(std::int64_t count) {
    if (count < 0 || count > (std::int64_t{1} << 31) - 2) {
        throw std::invalid_argument("percolab: union-find size out of range");
    }
    parent_.resize(static_cast<std::size_t>(count));
    size_.assign(static_cast<std::size_t>(count), 1);
    for (std::int64_t i = 0; i < count; ++i) parent_[static_cast<std::size_t>(i)] = static_cast<std::int32_t>(i);
    frozen_ = false;
}

std::int32_t ClusterLabeling::find(std::int32_t v) {
    // Path halving.
    while (parent_[static_cast<std::size_t>(v)] != v) {
        parent_[static_cast<std::size_t>(v)] = parent_[static_cast<std::size_t>(parent_[static_cast<std::size_t>(v)])];
        v = parent_[static_cast<std::size_t>(v)];
    }
    return v;
}

bool ClusterLabeling::unite(std::int32_t a, std::int32_t b) {
    if (frozen_) throw std::logic_error("percolab: unite() after freeze()");
    a = find(a);
    b = find(b);
    if (a == b) return false;
    if (size_[static_cast<std::size_t>(a)] < size_[static_cast<std::size_t>(b)]) std::swap(a, b);
    parent_[static_cast<std::size_t>(b)] = a;
    size_[static_cast<std::size_t>(a)] += size_[static_cast<std::size_t>(b)];
    return true;
}

std::int32_t ClusterLabeling::component_size(std::int32_t v) {
    return size_[static_cast<std::size_t>(find(v))];
}

void ClusterLabeling::freeze() {
    for (std::size_t i = 0; i < parent_.size(); ++i) {
        parent_[i] = find(static_cast<std::int32_t>(i));
    }
    frozen_ = true;
}

namespace {

void require_in_region(const Configuration& config, Vertex v, const char* what) {
    if (linf_norm(v) > config.region.radius) {
        throw std::invalid_argument(std::string("percolab: ") + what + " outside the region");
    }
}

// Thread-local scratch labeling reused across kernel calls.
ClusterLabeling& scratch_labeling(std::int64_t count) {
    thread_local ClusterLabeling uf(0);
    uf.reset(count);
    return uf;
}

}  // namespace

bool connected(const Configuration& config, std::span<const Vertex> s1,
               std::span<const Vertex> s2) {
    if (s1.empty() || s2.empty()) {
        throw std::invalid_argument("percolab: connected() requires nonempty vertex sets");
    }
    for (const Vertex& v : s1) require_in_region(config, v, "connection source");
    for (const Vertex& v : s2) require_in_region(config, v, "connection target");

    const BoxIndexer box(config.region.radius);
    const std::int64_t nv = box.vertex_count();
    ClusterLabeling uf(nv + 2);
    const auto kSrc = static_cast<std::int32_t>(nv);
    const auto kDst = static_cast<std::int32_t>(nv + 1);

    for (const Vertex& v : s1) uf.unite(kSrc, static_cast<std::int32_t>(box.vertex_index(v)));
    for (const Vertex& v : s2) uf.unite(kDst, static_cast<std::int32_t>(box.vertex_index(v)));
    for (const EdgeKey key : config.open_edges) {
        const Edge e = edge_from_key(key);
        uf.unite(static_cast<std::int32_t>(box.vertex_index(e.a)),
                 static_cast<std::int32_t>(box.vertex_index(e.b)));
    }
    return uf.find(kSrc) == uf.find(kDst);
}

bool has_lr_crossing(const Configuration& config, int w, int h) {
    if (w < 1 || h < 1) throw std::invalid_argument("percolab: rectangle sides must be >= 1");
    if (std::max(w, h) > config.region.radius) {
        throw std::invalid_argument("percolab: crossing rectangle exceeds the region");
    }
    const std::int64_t cols = w + 1;
    const std::int64_t rows = h + 1;
    const std::int64_t nv = cols * rows;
    ClusterLabeling uf(nv + 2);
    const auto kLeft = static_cast<std::int32_t>(nv);
    const auto kRight = static_cast<std::int32_t>(nv + 1);

    auto idx = [rows](int x, int y) { return static_cast<std::int32_t>(x * rows + y); };
    for (int y = 0; y <= h; ++y) {
        uf.unite(kLeft, idx(0, y));
        uf.unite(kRight, idx(w, y));
    }
    for (int x = 0; x <= w; ++x) {
        for (int y = 0; y <= h; ++y) {
            if (x < w && config.is_open(detail::ekey_unchecked(x, y, true))) {
                uf.unite(idx(x, y), idx(x + 1, y));
            }
            if (y < h && config.is_open(detail::ekey_unchecked(x, y, false))) {
                uf.unite(idx(x, y), idx(x, y + 1));
            }
        }
    }
    return uf.find(kLeft) == uf.find(kRight);
}

bool FiniteCluster::has_vertex(Vertex v) const {
    return std::binary_search(vertices.begin(), vertices.end(), v);
}

FiniteCluster cluster_of(const Configuration& config, Vertex v) {
    require_in_region(config, v, "cluster seed");
    const int radius = config.region.radius;

    std::unordered_set<VertexKey> seen{vertex_key(v)};
    std::vector<Vertex> visited{v};
    for (std::size_t head = 0; head < visited.size(); ++head) {
        const Vertex u = visited[head];
        const Vertex nbrs[4] = {
            {u.x + 1, u.y}, {u.x - 1, u.y}, {u.x, u.y + 1}, {u.x, u.y - 1}};
        for (const Vertex& w : nbrs) {
            if (linf_norm(w) > radius) continue;
            if (!config.is_open(edge_key(u, w))) continue;
            if (!seen.insert(vertex_key(w)).second) continue;
            visited.push_back(w);
        }
    }

    FiniteCluster cluster;
    std::sort(visited.begin(), visited.end());
    cluster.vertices = std::move(visited);
    cluster.contains_origin = cluster.has_vertex(Vertex{0, 0});
    cluster.bbox_lo = cluster.vertices.front();
    cluster.bbox_hi = cluster.vertices.front();
    for (const Vertex& u : cluster.vertices) {
        cluster.bbox_lo.x = std::min(cluster.bbox_lo.x, u.x);
        cluster.bbox_lo.y = std::min(cluster.bbox_lo.y, u.y);
        cluster.bbox_hi.x = std::max(cluster.bbox_hi.x, u.x);
        cluster.bbox_hi.y = std::max(cluster.bbox_hi.y, u.y);
    }
    // Edge set: every open edge with both endpoints in the cluster (this
    // includes cycle edges, not just the BFS tree).
    for (const Vertex& u : cluster.vertices) {
        const Vertex right{u.x + 1, u.y};
        const Vertex up{u.x, u.y + 1};
        if (linf_norm(right) <= radius && cluster.has_vertex(right) &&
            config.is_open(edge_key(u, right))) {
            cluster.edges.push_back(Edge{u, right});
        }
        if (linf_norm(up) <= radius && cluster.has_vertex(up) &&
            config.is_open(edge_key(u, up))) {
            cluster.edges.push_back(Edge{u, up});
        }
    }
    std::sort(cluster.edges.begin(), cluster.edges.end(),
              [](const Edge& l, const Edge& r) { return edge_key(l) < edge_key(r); });
    return cluster;
}

std::vector<Edge> disconnecting_edges(const FiniteCluster& cluster, Vertex origin,
                                      const Annulus& window, BoxSpec horizon) {
    if (!cluster.has_vertex(origin)) {
        throw std::invalid_argument("percolab: origin is not part of the cluster");
    }
    const auto n = static_cast<std::int32_t>(cluster.vertices.size());
    auto local = [&](Vertex v) {
        const auto it = std::lower_bound(cluster.vertices.begin(), cluster.vertices.end(), v);
        return static_cast<std::int32_t>(it - cluster.vertices.begin());
    };

    // Adjacency with edge ids so each undirected edge is traversed once.
    std::vector<std::vector<std::pair<std::int32_t, std::int32_t>>> adj(static_cast<std::size_t>(n));
    for (std::size_t ei = 0; ei < cluster.edges.size(); ++ei) {
        const auto a = local(cluster.edges[ei].a);
        const auto b = local(cluster.edges[ei].b);
        adj[static_cast<std::size_t>(a)].push_back({b, static_cast<std::int32_t>(ei)});
        adj[static_cast<std::size_t>(b)].push_back({a, static_cast<std::int32_t>(ei)});
    }

    const std::int32_t root = local(origin);
    constexpr std::int32_t kUnset = -1;

    // Iterative Tarjan bridge pass with subtree aggregation: for each vertex,
    // its DFS entry time, lowlink, and the number of horizon-boundary
    // vertices in its subtree. Subtree intervals [disc, exit) locate the
    // origin side of each bridge.
    std::vector<std::int32_t> disc(static_cast<std::size_t>(n), kUnset);
    std::vector<std::int32_t> low(static_cast<std::size_t>(n), 0);
    std::vector<std::int32_t> exit_time(static_cast<std::size_t>(n), 0);
    std::vector<std::int32_t> boundary_in_subtree(static_cast<std::size_t>(n), 0);
    std::vector<std::int32_t> parent_edge(static_cast<std::size_t>(n), kUnset);

    std::int32_t boundary_total = 0;
    for (const Vertex& v : cluster.vertices) {
        if (linf_norm(v) >= horizon.radius) ++boundary_total;
    }

    struct Frame {
        std::int32_t v;
        std::size_t next_child = 0;
    };
    std::vector<Frame> stack;
    std::int32_t clock = 0;

    auto is_boundary = [&](std::int32_t v) {
        return linf_norm(cluster.vertices[static_cast<std::size_t>(v)]) >= horizon.radius;
    };

    stack.push_back({root});
    disc[static_cast<std::size_t>(root)] = low[static_cast<std::size_t>(root)] = clock++;
    boundary_in_subtree[static_cast<std::size_t>(root)] = is_boundary(root) ? 1 : 0;

    std::vector<std::int32_t> bridges;
    while (!stack.empty()) {
        Frame& frame = stack.back();
        const auto v = frame.v;
        auto& children = adj[static_cast<std::size_t>(v)];
        if (frame.next_child < children.size()) {
            const auto [w, ei] = children[frame.next_child++];
            if (ei == parent_edge[static_cast<std::size_t>(v)]) continue;
            if (disc[static_cast<std::size_t>(w)] != kUnset) {
                low[static_cast<std::size_t>(v)] =
                    std::min(low[static_cast<std::size_t>(v)], disc[static_cast<std::size_t>(w)]);
                continue;
            }
            parent_edge[static_cast<std::size_t>(w)] = ei;
            disc[static_cast<std::size_t>(w)] = low[static_cast<std::size_t>(w)] = clock++;
            boundary_in_subtree[static_cast<std::size_t>(w)] = is_boundary(w) ? 1 : 0;
            stack.push_back({w});
        } else {
            exit_time[static_cast<std::size_t>(v)] = clock;
            stack.pop_back();
            if (!stack.empty()) {
                const auto u = stack.back().v;
                low[static_cast<std::size_t>(u)] =
                    std::min(low[static_cast<std::size_t>(u)], low[static_cast<std::size_t>(v)]);
                boundary_in_subtree[static_cast<std::size_t>(u)] +=
                    boundary_in_subtree[static_cast<std::size_t>(v)];
                if (low[static_cast<std::size_t>(v)] > disc[static_cast<std::size_t>(u)]) {
                    bridges.push_back(v);  // tree edge (u -> v) is a bridge
                }
            }
        }
    }

    const std::int32_t origin_disc = disc[static_cast<std::size_t>(root)];
    auto origin_in_subtree = [&](std::int32_t v) {
        return disc[static_cast<std::size_t>(v)] <= origin_disc &&
               origin_disc < exit_time[static_cast<std::size_t>(v)];
    };

    std::vector<Edge> out;
    for (const std::int32_t child : bridges) {
        const auto ei = parent_edge[static_cast<std::size_t>(child)];
        const Edge& e = cluster.edges[static_cast<std::size_t>(ei)];
        const int na = linf_norm(e.a);
        const int nb = linf_norm(e.b);
        const bool in_window = na > window.inner && na <= window.outer &&
                               nb > window.inner && nb <= window.outer;
        if (!in_window) continue;
        const std::int32_t sub_boundary = boundary_in_subtree[static_cast<std::size_t>(child)];
        const std::int32_t origin_side_boundary =
            origin_in_subtree(child) ? sub_boundary : boundary_total - sub_boundary;
        if (origin_side_boundary == 0) out.push_back(e);
    }
    std::sort(out.begin(), out.end(),
              [](const Edge& l, const Edge& r) { return edge_key(l) < edge_key(r); });
    return out;
}

bool sample_lr_crossing(int w, int h, double p, const Stream& stream) {
    const std::int32_t rows = h + 1;
    const std::int32_t nv = (w + 1) * rows;
    ClusterLabeling& uf = scratch_labeling(nv + 2);
    const std::int32_t kLeft = nv;
    const std::int32_t kRight = nv + 1;

    for (std::int32_t y = 0; y <= h; ++y) {
        uf.unite(kLeft, y);
        uf.unite(kRight, w * rows + y);
    }
    for (int x = 0; x <= w; ++x) {
        const std::int32_t col = x * rows;
        for (int y = 0; y <= h; ++y) {
            if (x < w && stream.edge_open(detail::ekey_unchecked(x, y, true), p)) {
                uf.unite(col + y, col + rows + y);
            }
            if (y < h && stream.edge_open(detail::ekey_unchecked(x, y, false), p)) {
                uf.unite(col + y, col + y + 1);
            }
        }
    }
    return uf.find(kLeft) == uf.find(kRight);
}

bool sample_origin_to_boundary(int n, double p, const Stream& stream,
                               const std::vector<std::uint8_t>* forced) {
    const BoxIndexer box(n);
    const std::int64_t nv = box.vertex_count();
    ClusterLabeling& uf = scratch_labeling(nv + 1);
    const auto kBoundary = static_cast<std::int32_t>(nv);
    const int side = box.side();

    for (int i = 0; i < side; ++i) {
        // The four sides of the boundary ring.
        uf.unite(kBoundary, static_cast<std::int32_t>(i));                       // x = -n
        uf.unite(kBoundary, static_cast<std::int32_t>((side - 1) * side + i));   // x = +n
        uf.unite(kBoundary, static_cast<std::int32_t>(i * side));                // y = -n
        uf.unite(kBoundary, static_cast<std::int32_t>(i * side + side - 1));     // y = +n
    }

    std::int64_t eidx = 0;
    for (int x = -n; x < n; ++x) {
        for (int y = -n; y <= n; ++y, ++eidx) {
            const bool open = (forced && (*forced)[static_cast<std::size_t>(eidx)]) ||
                              stream.edge_open(detail::ekey_unchecked(x, y, true), p);
            if (open) {
                const auto a = static_cast<std::int32_t>((x + n) * side + (y + n));
                uf.unite(a, a + side);
            }
        }
    }
    for (int x = -n; x <= n; ++x) {
        for (int y = -n; y < n; ++y, ++eidx) {
            const bool open = (forced && (*forced)[static_cast<std::size_t>(eidx)]) ||
                              stream.edge_open(detail::ekey_unchecked(x, y, false), p);
            if (open) {
                const auto a = static_cast<std::int32_t>((x + n) * side + (y + n));
                uf.unite(a, a + 1);
            }
        }
    }
    const auto origin = static_cast<std::int32_t>(box.vertex_index(Vertex{0, 0}));
    return uf.find(origin) == uf.find(kBoundary);
}

bool sample_shell_connection(int inner, int outer, double p, const Stream& stream) {
    if (inner == outer) return true;  // the source set already meets the target
    const BoxIndexer box(outer);
    const std::int64_t nv = box.vertex_count();
    ClusterLabeling& uf = scratch_labeling(nv + 2);
    const auto kSource = static_cast<std::int32_t>(nv);      // norm == inner ring
    const auto kTarget = static_cast<std::int32_t>(nv + 1);  // norm == outer ring
    const int side = box.side();

    for (int x = -outer; x <= outer; ++x) {
        for (int y = -outer; y <= outer; ++y) {
            const int norm = linf_norm(Vertex{x, y});
            if (norm == inner) {
                uf.unite(kSource, static_cast<std::int32_t>((x + outer) * side + (y + outer)));
            } else if (norm == outer) {
                uf.unite(kTarget, static_cast<std::int32_t>((x + outer) * side + (y + outer)));
            }
        }
    }
    // Only edges with at least one endpoint strictly outside B(inner); edges
    // inside the source set cannot create new connections anyway, and keeping
    // them out keeps this event's support disjoint from B(inner)'s edges.
    for (int x = -outer; x <= outer; ++x) {
        for (int y = -outer; y <= outer; ++y) {
            const int norm_a = linf_norm(Vertex{x, y});
            if (x < outer) {
                const int norm_b = linf_norm(Vertex{x + 1, y});
                if ((norm_a > inner || norm_b > inner) &&
                    stream.edge_open(detail::ekey_unchecked(x, y, true), p)) {
                    const auto a = static_cast<std::int32_t>((x + outer) * side + (y + outer));
                    uf.unite(a, a + side);
                }
            }
            if (y < outer) {
                const int norm_b = linf_norm(Vertex{x, y + 1});
                if ((norm_a > inner || norm_b > inner) &&
                    stream.edge_open(detail::ekey_unchecked(x, y, false), p)) {
                    const auto a = static_cast<std::int32_t>((x + outer) * side + (y + outer));
                    uf.unite(a, a + 1);
                }
            }
        }
    }
    return uf.find(kSource) == uf.find(kTarget);
}

std::vector<std::uint8_t> annulus_edge_flags(const Annulus& ann, int box_radius) {
    if (ann.outer > box_radius) {
        throw std::invalid_argument("percolab: annulus does not fit in the box");
    }
    const BoxIndexer box(box_radius);
    std::vector<std::uint8_t> flags(static_cast<std::size_t>(box.edge_count()), 0);
    for (const Edge& e : annulus_edges(ann)) {
        flags[static_cast<std::size_t>(box.edge_index(e))] = 1;
    }
    return flags;
}

}  // namespace percolab
