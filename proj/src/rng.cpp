#include "percolab/rng.hpp"

namespace percolab {

namespace detail {

std::uint64_t fnv1a(std::string_view s) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (const char c : s) {
        h ^= static_cast<unsigned char>(c);
        h *= 0x100000001b3ULL;
    }
    return h;
}

}  // namespace detail

Stream::Stream(const SeedSpec& seed) {
    // Absorb the three key parts through the mixer; each step is a bijection
    // of the running state, so distinct triples give distinct bases.
    std::uint64_t b = detail::mix64(seed.master_seed ^ 0x7065726330313233ULL);
    b = detail::mix64(b ^ detail::fnv1a(seed.purpose));
    b = detail::mix64(b ^ (seed.replica_index * 0xff51afd7ed558ccdULL));
    base_ = b;
}

Stream Stream::split(std::uint64_t lane) const {
    return Stream(detail::mix64(base_ ^ ((lane + 1) * 0xc4ceb9fe1a85ec53ULL)));
}

}  // namespace percolab
