#pragma once

#include <cstdint>
#include <random>

namespace twd {

// SplitMix64 step; used to decorrelate user seeds and to derive
// independent per-replicate / per-grid-point streams from a master seed.
inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

// Counter-based derivation: stream `index` of `master`. Replicates seeded this
// way can run in any order or thread without changing results.
inline std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index) {
    return splitmix64(master ^ splitmix64(index + 0x0123456789ABCDEFULL));
}

inline std::mt19937_64 make_engine(std::uint64_t seed) {
    return std::mt19937_64(splitmix64(seed));
}

}  // namespace twd
