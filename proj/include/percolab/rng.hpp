// Counter-based random streams. Every draw is a pure function of
// (master seed, purpose tag, replica index, counter), so results do not
// depend on iteration order, region size, or worker count.
#pragma once

#include <cstdint>
#include <string>
#include <string_view>

#include "percolab/lattice.hpp"

namespace percolab {

// Everything random in a run is reproducible from one of these triples.
struct SeedSpec {
    std::uint64_t master_seed = 0;
    std::uint64_t replica_index = 0;
    std::string purpose;

    SeedSpec with_replica(std::uint64_t r) const { return SeedSpec{master_seed, r, purpose}; }
    SeedSpec with_purpose(std::string p) const { return SeedSpec{master_seed, replica_index, std::move(p)}; }
};

namespace detail {

// splitmix64 finalizer (Stafford mix 13).
constexpr std::uint64_t mix64(std::uint64_t z) {
    z ^= z >> 30;
    z *= 0xbf58476d1ce4e5b9ULL;
    z ^= z >> 27;
    z *= 0x94d049bb133111ebULL;
    z ^= z >> 31;
    return z;
}

constexpr std::uint64_t kGolden = 0x9e3779b97f4a7c15ULL;

std::uint64_t fnv1a(std::string_view s);

}  // namespace detail

// A stateless stream: word(c) is the c-th sample of the stream identified by
// the seed triple. Distinct counters give independent-looking 64-bit words.
class Stream {
public:
    Stream() : base_(0) {}
    explicit Stream(const SeedSpec& seed);

    // Domain-separated substream (used for e.g. per-attempt resampling).
    Stream split(std::uint64_t lane) const;

    std::uint64_t word(std::uint64_t counter) const {
        return detail::mix64(base_ + detail::kGolden * (counter + 1));
    }
    // Uniform in [0,1) with 53-bit resolution.
    double unit(std::uint64_t counter) const {
        return static_cast<double>(word(counter) >> 11) * 0x1.0p-53;
    }

    // The weight of an edge under this stream; edge keys live in their own
    // counter domain so they never collide with plain index draws.
    double edge_weight(EdgeKey key) const { return unit(key | kEdgeDomain); }
    bool edge_open(EdgeKey key, double p) const { return edge_weight(key) < p; }

    std::uint64_t base() const { return base_; }

private:
    static constexpr std::uint64_t kEdgeDomain = std::uint64_t{1} << 62;
    explicit Stream(std::uint64_t raw_base) : base_(raw_base) {}

    std::uint64_t base_;
};

}  // namespace percolab
