// Integer geometry of the square lattice: vertices, nearest-neighbor edges,
// l-infinity balls B(n), internal boundaries and annuli, and the edge sets
// they induce. Everything here is exact and deterministic.
#pragma once

#include <cstdint>
#include <span>
#include <vector>

namespace percolab {

// Coordinates are bounded so that a vertex packs into 44 bits and an edge
// into 45; exceeding the bound is a hard error, not undefined behavior.
inline constexpr int kMaxCoord = 1 << 20;

struct Vertex {
    int x = 0;
    int y = 0;
    friend constexpr bool operator==(const Vertex&, const Vertex&) = default;
    friend constexpr auto operator<=>(const Vertex&, const Vertex&) = default;
};

constexpr int linf_norm(Vertex v) {
    const int ax = v.x < 0 ? -v.x : v.x;
    const int ay = v.y < 0 ? -v.y : v.y;
    return ax > ay ? ax : ay;
}

using VertexKey = std::uint64_t;
using EdgeKey = std::uint64_t;

namespace detail {

inline constexpr int kCoordBits = 22;  // holds x + kMaxCoord in [0, 2^21]

// Unchecked packers for kernels whose coordinates are bounded by construction.
constexpr VertexKey vkey_unchecked(int x, int y) {
    return (static_cast<std::uint64_t>(x + kMaxCoord) << kCoordBits) |
           static_cast<std::uint64_t>(y + kMaxCoord);
}
constexpr EdgeKey ekey_unchecked(int x, int y, bool horizontal) {
    return (vkey_unchecked(x, y) << 1) | (horizontal ? 1u : 0u);
}

}  // namespace detail

VertexKey vertex_key(Vertex v);
Vertex vertex_from_key(VertexKey key);

// Nearest-neighbor edge stored with the lexicographically smaller endpoint
// first; the canonical form is unique per unordered pair.
struct Edge {
    Vertex a;
    Vertex b;
    friend constexpr bool operator==(const Edge&, const Edge&) = default;
    friend constexpr auto operator<=>(const Edge&, const Edge&) = default;
};

// Canonicalizes (u, v); rejects pairs that are not nearest neighbors.
Edge make_edge(Vertex u, Vertex v);

EdgeKey edge_key(const Edge& e);
EdgeKey edge_key(Vertex u, Vertex v);
Edge edge_from_key(EdgeKey key);

// B(n) = [-n, n]^2, the l-infinity ball of radius n.
struct BoxSpec {
    int radius = 0;
};

// Ann(m, n) = B(n) \ B(m) with the induced edge count cached at construction.
struct Annulus {
    int inner = 0;
    int outer = 0;
    std::int64_t edge_count = 0;
};

Annulus make_annulus(int inner, int outer);

std::vector<Vertex> box_vertices(BoxSpec spec);

// Vertices with l-infinity norm exactly n; size 8n. Rejects n = 0.
std::vector<Vertex> internal_boundary(BoxSpec spec);

std::vector<Vertex> annulus_vertices(const Annulus& ann);

// All nearest-neighbor edges with BOTH endpoints in the region, canonical
// order, sorted by key, no duplicates.
std::vector<Edge> induced_edges(std::span<const Vertex> region);

std::vector<Edge> box_edges(BoxSpec spec);
std::vector<Edge> annulus_edges(const Annulus& ann);

// Edges of the rectangle [0,w] x [0,h] (both endpoints inside the closed
// rectangle). Count is 2wh + w + h.
std::vector<Edge> rect_edges(int w, int h);

constexpr std::int64_t box_vertex_count(int n) {
    return (2 * static_cast<std::int64_t>(n) + 1) * (2 * static_cast<std::int64_t>(n) + 1);
}
constexpr std::int64_t box_edge_count(int n) {
    return 4 * static_cast<std::int64_t>(n) * (2 * static_cast<std::int64_t>(n) + 1);
}
constexpr std::int64_t rect_edge_count(int w, int h) {
    return 2 * static_cast<std::int64_t>(w) * h + w + h;
}

// Dense vertex/edge numbering for a box B(radius), used by the flat-array
// kernels. Edge indices enumerate horizontal edges first, then vertical.
class BoxIndexer {
public:
    explicit BoxIndexer(int radius);

    int radius() const { return radius_; }
    int side() const { return side_; }
    std::int64_t vertex_count() const { return static_cast<std::int64_t>(side_) * side_; }
    std::int64_t horizontal_count() const { return static_cast<std::int64_t>(side_ - 1) * side_; }
    std::int64_t edge_count() const { return 2 * horizontal_count(); }

    bool contains(Vertex v) const { return linf_norm(v) <= radius_; }

    std::int64_t vertex_index(Vertex v) const {
        return static_cast<std::int64_t>(v.x + radius_) * side_ + (v.y + radius_);
    }
    Vertex vertex_at(std::int64_t idx) const {
        return Vertex{static_cast<int>(idx / side_) - radius_,
                      static_cast<int>(idx % side_) - radius_};
    }

    // Edge from its lower-left endpoint and orientation (true = step in x).
    std::int64_t edge_index(Vertex a, bool horizontal) const {
        if (horizontal) {
            return static_cast<std::int64_t>(a.x + radius_) * side_ + (a.y + radius_);
        }
        return horizontal_count() +
               static_cast<std::int64_t>(a.x + radius_) * (side_ - 1) + (a.y + radius_);
    }
    std::int64_t edge_index(const Edge& e) const {
        return edge_index(e.a, e.b.x != e.a.x);
    }
    Edge edge_at(std::int64_t idx) const;

private:
    int radius_;
    int side_;
};

}  // namespace percolab
