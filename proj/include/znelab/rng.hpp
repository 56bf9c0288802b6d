#pragma once

#include <cstdint>
#include <random>

namespace znelab {

// splitmix64; used to spread master seeds into independent substreams.
constexpr std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

// Deterministic substream seed for (master, domain, index). Domains keep the
// MLP init stream, the device sampling stream, and test streams apart.
constexpr std::uint64_t derive_seed(std::uint64_t master, std::uint64_t domain,
                                    std::uint64_t index = 0) {
    return splitmix64(splitmix64(master ^ (domain * 0xd1342543de82ef95ULL)) + index);
}

inline std::mt19937_64 make_rng(std::uint64_t seed) { return std::mt19937_64(seed); }

// Uniform double in [0, 1) from the top 53 bits. Unlike
// std::uniform_real_distribution this is identical across standard-library
// implementations, which the determinism contracts rely on.
inline double uniform_double(std::mt19937_64& rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

// Uniform double in [lo, hi).
inline double uniform_double(std::mt19937_64& rng, double lo, double hi) {
    return lo + (hi - lo) * uniform_double(rng);
}

} // namespace znelab
