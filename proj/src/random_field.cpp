#include "percolab/random_field.hpp"

#include <algorithm>
#include <stdexcept>

namespace percolab {

bool WeightField::is_conditioned(EdgeKey key) const {
    return std::binary_search(conditioned_.begin(), conditioned_.end(), key);
}

WeightField WeightField::conditioned_below(std::vector<EdgeKey> edges, double level) const {
    if (!(level > 0.0 && level <= 1.0)) {
        throw std::invalid_argument("percolab: conditioning level must be in (0,1]");
    }
    WeightField out = *this;
    std::sort(edges.begin(), edges.end());
    edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
    out.conditioned_ = std::move(edges);
    out.conditioned_level_ = level;
    return out;
}

std::vector<std::pair<Edge, double>> WeightField::materialize() const {
    std::vector<std::pair<Edge, double>> out;
    for (const Edge& e : box_edges(region_)) {
        out.emplace_back(e, weight(e));
    }
    return out;
}

WeightField sample_weights(BoxSpec region, const SeedSpec& seed) {
    if (region.radius < 0 || region.radius > kMaxCoord) {
        throw std::invalid_argument("percolab: invalid field region");
    }
    return WeightField(region, seed);
}

bool Configuration::is_open(EdgeKey key) const {
    return std::binary_search(open_edges.begin(), open_edges.end(), key);
}

Configuration threshold(const WeightField& field, double p) {
    if (!(p >= 0.0 && p <= 1.0)) {
        throw std::invalid_argument("percolab: threshold level must be in [0,1]");
    }
    Configuration config;
    config.region = field.region();
    config.provenance = Provenance::thresholded_field;
    config.level = p;
    config.seed = field.seed();
    config.forced_open = field.conditioned_edges();
    for (const Edge& e : box_edges(field.region())) {
        const EdgeKey key = edge_key(e);
        if (field.weight(key) < p) config.open_edges.push_back(key);
    }
    // box_edges is sorted by key already; keep the invariant explicit.
    std::sort(config.open_edges.begin(), config.open_edges.end());
    return config;
}

Configuration bernoulli_config(BoxSpec region, double p, const SeedSpec& seed,
                               std::vector<EdgeKey> forced_open) {
    if (!(p >= 0.0 && p <= 1.0)) {
        throw std::invalid_argument("percolab: Bernoulli level must be in [0,1]");
    }
    std::sort(forced_open.begin(), forced_open.end());
    forced_open.erase(std::unique(forced_open.begin(), forced_open.end()), forced_open.end());

    const auto edges = box_edges(region);
    for (const EdgeKey key : forced_open) {
        const Edge e = edge_from_key(key);
        if (linf_norm(e.a) > region.radius || linf_norm(e.b) > region.radius) {
            throw std::invalid_argument("percolab: forced-open edge outside the region");
        }
    }

    const Stream stream(seed);
    Configuration config;
    config.region = region;
    config.provenance = Provenance::direct_bernoulli;
    config.level = p;
    config.seed = seed;
    config.forced_open = forced_open;
    for (const Edge& e : edges) {
        const EdgeKey key = edge_key(e);
        if (std::binary_search(forced_open.begin(), forced_open.end(), key) ||
            stream.edge_open(key, p)) {
            config.open_edges.push_back(key);
        }
    }
    std::sort(config.open_edges.begin(), config.open_edges.end());
    return config;
}

}  // namespace percolab
