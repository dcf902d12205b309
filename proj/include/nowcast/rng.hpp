#pragma once

#include <cstdint>
#include <random>

namespace nowcast {

// splitmix64 finalizer; mixes a (seed, stream) pair into a well-spread value.
inline std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream) {
    std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (stream + 1);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

// Independent engine for stream `stream` of master seed `seed`. Substreams are
// the unit of the determinism contract: results indexed by stream id never
// depend on evaluation order.
inline std::mt19937_64 make_rng(std::uint64_t seed, std::uint64_t stream) {
    return std::mt19937_64(derive_seed(seed, stream));
}

} // namespace nowcast
