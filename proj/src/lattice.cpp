#include "percolab/lattice.hpp"

#include <algorithm>
#include <stdexcept>
#include <unordered_set>

namespace percolab {

namespace {

void check_coord(Vertex v) {
    if (v.x < -kMaxCoord || v.x > kMaxCoord || v.y < -kMaxCoord || v.y > kMaxCoord) {
        throw std::invalid_argument("percolab: vertex coordinate exceeds the configured maximum radius");
    }
}

}  // namespace

VertexKey vertex_key(Vertex v) {
    check_coord(v);
    return detail::vkey_unchecked(v.x, v.y);
}

Vertex vertex_from_key(VertexKey key) {
    const std::uint64_t mask = (std::uint64_t{1} << detail::kCoordBits) - 1;
    const auto px = static_cast<std::int64_t>(key >> detail::kCoordBits);
    const auto py = static_cast<std::int64_t>(key & mask);
    return Vertex{static_cast<int>(px - kMaxCoord), static_cast<int>(py - kMaxCoord)};
}

Edge make_edge(Vertex u, Vertex v) {
    const int dx = u.x - v.x;
    const int dy = u.y - v.y;
    const int l1 = (dx < 0 ? -dx : dx) + (dy < 0 ? -dy : dy);
    if (l1 != 1) {
        throw std::invalid_argument("percolab: edge endpoints must be nearest neighbors");
    }
    if (v < u) std::swap(u, v);
    return Edge{u, v};
}

EdgeKey edge_key(const Edge& e) {
    // Canonical endpoint plus orientation bit: 45 bits total.
    const bool horizontal = e.b.x != e.a.x;
    return (vertex_key(e.a) << 1) | (horizontal ? 1u : 0u);
}

EdgeKey edge_key(Vertex u, Vertex v) {
    return edge_key(make_edge(u, v));
}

Edge edge_from_key(EdgeKey key) {
    const Vertex a = vertex_from_key(key >> 1);
    const bool horizontal = (key & 1) != 0;
    const Vertex b = horizontal ? Vertex{a.x + 1, a.y} : Vertex{a.x, a.y + 1};
    return Edge{a, b};
}

Annulus make_annulus(int inner, int outer) {
    if (inner >= outer) {
        throw std::invalid_argument("percolab: annulus requires inner < outer");
    }
    if (inner < 0) {
        throw std::invalid_argument("percolab: annulus requires inner >= 0");
    }
    Annulus ann{inner, outer, 0};
    ann.edge_count = static_cast<std::int64_t>(annulus_edges(ann).size());
    return ann;
}

std::vector<Vertex> box_vertices(BoxSpec spec) {
    if (spec.radius < 0) {
        throw std::invalid_argument("percolab: box radius must be non-negative");
    }
    std::vector<Vertex> out;
    out.reserve(static_cast<std::size_t>(box_vertex_count(spec.radius)));
    for (int x = -spec.radius; x <= spec.radius; ++x) {
        for (int y = -spec.radius; y <= spec.radius; ++y) {
            out.push_back(Vertex{x, y});
        }
    }
    return out;
}

std::vector<Vertex> internal_boundary(BoxSpec spec) {
    if (spec.radius < 1) {
        throw std::invalid_argument("percolab: internal boundary is undefined for radius 0");
    }
    std::vector<Vertex> out;
    out.reserve(static_cast<std::size_t>(8) * spec.radius);
    const int n = spec.radius;
    for (int x = -n; x <= n; ++x) {
        for (int y = -n; y <= n; ++y) {
            if (linf_norm(Vertex{x, y}) == n) out.push_back(Vertex{x, y});
        }
    }
    return out;
}

std::vector<Vertex> annulus_vertices(const Annulus& ann) {
    std::vector<Vertex> out;
    for (int x = -ann.outer; x <= ann.outer; ++x) {
        for (int y = -ann.outer; y <= ann.outer; ++y) {
            const int norm = linf_norm(Vertex{x, y});
            if (norm > ann.inner && norm <= ann.outer) out.push_back(Vertex{x, y});
        }
    }
    return out;
}

std::vector<Edge> induced_edges(std::span<const Vertex> region) {
    std::unordered_set<VertexKey> keys;
    keys.reserve(region.size() * 2);
    for (const Vertex& v : region) keys.insert(vertex_key(v));

    std::vector<Edge> out;
    for (const Vertex& v : region) {
        // Only look right and up; canonical order makes each edge appear once.
        const Vertex right{v.x + 1, v.y};
        const Vertex up{v.x, v.y + 1};
        if (v.x + 1 <= kMaxCoord && keys.count(vertex_key(right))) out.push_back(Edge{v, right});
        if (v.y + 1 <= kMaxCoord && keys.count(vertex_key(up))) out.push_back(Edge{v, up});
    }
    std::sort(out.begin(), out.end(),
              [](const Edge& l, const Edge& r) { return edge_key(l) < edge_key(r); });
    return out;
}

std::vector<Edge> box_edges(BoxSpec spec) {
    const auto verts = box_vertices(spec);
    return induced_edges(verts);
}

std::vector<Edge> annulus_edges(const Annulus& ann) {
    const auto verts = annulus_vertices(ann);
    return induced_edges(verts);
}

std::vector<Edge> rect_edges(int w, int h) {
    if (w < 1 || h < 1) {
        throw std::invalid_argument("percolab: rectangle sides must be >= 1");
    }
    std::vector<Edge> out;
    out.reserve(static_cast<std::size_t>(rect_edge_count(w, h)));
    for (int x = 0; x <= w; ++x) {
        for (int y = 0; y <= h; ++y) {
            if (x < w) out.push_back(Edge{Vertex{x, y}, Vertex{x + 1, y}});
            if (y < h) out.push_back(Edge{Vertex{x, y}, Vertex{x, y + 1}});
        }
    }
    std::sort(out.begin(), out.end(),
              [](const Edge& l, const Edge& r) { return edge_key(l) < edge_key(r); });
    return out;
}

BoxIndexer::BoxIndexer(int radius) : radius_(radius), side_(2 * radius + 1) {
    if (radius < 0) throw std::invalid_argument("percolab: box radius must be non-negative");
    if (radius > kMaxCoord) {
        throw std::invalid_argument("percolab: box radius exceeds the configured maximum");
    }
}

Edge BoxIndexer::edge_at(std::int64_t idx) const {
    if (idx < horizontal_count()) {
        const int x = static_cast<int>(idx / side_) - radius_;
        const int y = static_cast<int>(idx % side_) - radius_;
        return Edge{Vertex{x, y}, Vertex{x + 1, y}};
    }
    idx -= horizontal_count();
    const int x = static_cast<int>(idx / (side_ - 1)) - radius_;
    const int y = static_cast<int>(idx % (side_ - 1)) - radius_;
    return Edge{Vertex{x, y}, Vertex{x, y + 1}};
}

}  // namespace percolab
