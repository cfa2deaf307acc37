#pragma once

#include <cstdint>
#include <random>

namespace hardrods {

/// splitmix64 round; used to derive independent streams from (seed, index).
inline std::uint64_t mix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

/// Counter-style stream: the generator for sample k depends only on
/// (seed, k), so partitioning the index space across workers cannot change
/// the draws.
inline std::mt19937_64 stream_rng(std::uint64_t seed, std::uint64_t index) {
    return std::mt19937_64(mix64(mix64(seed) ^ mix64(index + 0x51ed270b0a9fc484ULL)));
}

}  // namespace hardrods
