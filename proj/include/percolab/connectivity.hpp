// Connectivity queries on configurations: union-find cluster labeling,
// set-to-set connection, rectangle crossings, cluster extraction, and
// disconnecting-edge (origin-separating bridge) detection.
#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "percolab/lattice.hpp"
#include "percolab/random_field.hpp"
#include "percolab/rng.hpp"

namespace percolab {

// Union-find forest with union by size and path halving. Indices are dense;
// callers map vertices to indices (BoxIndexer or ad hoc). After freeze() the
// forest is flattened and find() is const and safe for concurrent readers.
class ClusterLabeling {
public:
    explicit ClusterLabeling(std::int64_t count);

    std::int32_t find(std::int32_t v);
    std::int32_t find_frozen(std::int32_t v) const { return parent_[static_cast<std::size_t>(v)]; }
    bool unite(std::int32_t a, std::int32_t b);
    std::int32_t component_size(std::int32_t v);
    std::int64_t count() const { return static_cast<std::int64_t>(parent_.size()); }

    void freeze();
    bool frozen() const { return frozen_; }

    void reset(std::int64_t count);

private:
    std::vector<std::int32_t> parent_;
    std::vector<std::int32_t> size_;
    bool frozen_ = false;
};

// True iff some open path joins a vertex of s1 to a vertex of s2 (a shared
// vertex counts as a zero-length path). Rejects empty sets and vertices
// outside the configuration's region.
bool connected(const Configuration& config, std::span<const Vertex> s1,
               std::span<const Vertex> s2);

// Left-right crossing of [0,w] x [0,h] by open edges inside the closed
// rectangle. The rectangle must fit in the configuration's region.
bool has_lr_crossing(const Configuration& config, int w, int h);

struct FiniteCluster {
    std::vector<Vertex> vertices;  // sorted
    std::vector<Edge> edges;       // sorted by key
    bool contains_origin = false;
    Vertex bbox_lo;
    Vertex bbox_hi;

    bool has_vertex(Vertex v) const;
};

// Maximal connected open subgraph containing v (breadth-first exploration).
FiniteCluster cluster_of(const Configuration& config, Vertex v);

// All bridges of the cluster lying in the window annulus whose removal leaves
// the origin in a component that does not touch the horizon boundary
// ("finite component" proxied by "component not reaching the simulation
// boundary"). Rejects origins outside the cluster.
std::vector<Edge> disconnecting_edges(const FiniteCluster& cluster, Vertex origin,
                                      const Annulus& window, BoxSpec horizon);

// ---------------------------------------------------------------------------
// Flat-array sampling kernels. Each one realizes a Bernoulli(p) configuration
// from the stream on the fly (global edge keys, so the draw for an edge is
// the one every other code path sees) and answers a single connectivity
// question. These are the OpenMP-replicated inner loops; the serial reference
// implementations live in oracles.hpp and the tests pin them against each
// other.
// ---------------------------------------------------------------------------

// Left-right crossing of [0,w] x [0,h] at level p.
bool sample_lr_crossing(int w, int h, double p, const Stream& stream);

// Origin connected to the internal boundary of B(n) at level p. When `forced`
// is non-null it flags edge indices (BoxIndexer(n) numbering) that are open
// regardless of their weight.
bool sample_origin_to_boundary(int n, double p, const Stream& stream,
                               const std::vector<std::uint8_t>* forced = nullptr);

// B(inner) connected to the internal boundary of B(outer) at level p, using
// only edges with at least one endpoint of norm > inner (the event's
// measurable support, disjoint from the induced edges of B(inner)).
bool sample_shell_connection(int inner, int outer, double p, const Stream& stream);

// Flags (in BoxIndexer(box_radius) numbering) for the induced edges of the
// annulus, used to build forced-open masks for conditional estimates.
std::vector<std::uint8_t> annulus_edge_flags(const Annulus& ann, int box_radius);

}  // namespace percolab
