// Seeded edge-weight fields on finite boxes and their projection to p-open
// configurations. Weights are evaluated lazily from the counter stream, so a
// field on B(1500) costs nothing to "sample"; the same (seed, edge) pair
// always yields the same weight no matter which region it is read through.
#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "percolab/lattice.hpp"
#include "percolab/mc_stats.hpp"
#include "percolab/rng.hpp"

namespace percolab {

class WeightField {
public:
    WeightField(BoxSpec region, const SeedSpec& seed)
        : region_(region), seed_(seed), stream_(seed) {}

    const BoxSpec& region() const { return region_; }
    const SeedSpec& seed() const { return seed_; }
    const Stream& stream() const { return stream_; }

    // Weight of a (canonical) edge. Conditioned edges are rescaled into
    // [0, level), i.e. drawn from Uniform[0,1) conditioned on being < level.
    double weight(EdgeKey key) const {
        const double raw = stream_.edge_weight(key);
        if (!conditioned_.empty() && is_conditioned(key)) return raw * conditioned_level_;
        return raw;
    }
    double weight(const Edge& e) const { return weight(edge_key(e)); }

    bool open_at(EdgeKey key, double p) const { return weight(key) < p; }

    // A copy of the field in which every edge of `edges` is conditioned to be
    // p-open (its weight is forced below `level` while keeping its law
    // uniform on [0, level)).
    WeightField conditioned_below(std::vector<EdgeKey> edges, double level) const;

    bool is_conditioned(EdgeKey key) const;
    const std::vector<EdgeKey>& conditioned_edges() const { return conditioned_; }

    // Materializes (edge, weight) pairs for every induced edge of the region,
    // sorted by edge key. Intended for small boxes and tests.
    std::vector<std::pair<Edge, double>> materialize() const;

private:
    BoxSpec region_;
    SeedSpec seed_;
    Stream stream_;
    std::vector<EdgeKey> conditioned_;  // sorted
    double conditioned_level_ = 1.0;
};

WeightField sample_weights(BoxSpec region, const SeedSpec& seed);

enum class Provenance { thresholded_field, direct_bernoulli };

// A p-open/closed assignment on a finite box. forced_open is always a subset
// of open_edges.
struct Configuration {
    BoxSpec region;
    std::vector<EdgeKey> open_edges;   // sorted
    std::vector<EdgeKey> forced_open;  // sorted
    Provenance provenance = Provenance::direct_bernoulli;
    double level = 0.0;
    SeedSpec seed;

    bool is_open(EdgeKey key) const;
    bool is_open(const Edge& e) const { return is_open(edge_key(e)); }
};

// Projects the field to the configuration {e : weight(e) < p}; monotone in p
// on the same field.
Configuration threshold(const WeightField& field, double p);

// Edges in forced_open are open; every other induced edge of the region is
// open independently with probability p. Rejects forced edges outside the
// region's induced edge set.
Configuration bernoulli_config(BoxSpec region, double p, const SeedSpec& seed,
                               std::vector<EdgeKey> forced_open = {});

// Critical probability for bond percolation on the square lattice. Kept as a
// named configuration point rather than an estimated quantity.
inline constexpr double kCriticalP = 0.5;

}  // namespace percolab
