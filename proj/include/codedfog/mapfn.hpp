#pragma once

#include <cstdint>
#include <stdexcept>
#include <vector>

namespace codedfog {

/// SplitMix64 step; the fixed-point substrate for every deterministic
/// byte stream and seed derivation in this project.
inline std::uint64_t splitmix64(std::uint64_t& state) {
    state += 0x9E3779B97F4A7C15ULL;
    std::uint64_t z = state;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D4A2CA9F1D3E2BULL;
    return z ^ (z >> 31);
}

/// Derive an independent stream seed from a base seed and a set of keys.
inline std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t a, std::uint64_t b = 0,
                                 std::uint64_t c = 0) {
    std::uint64_t s = seed;
    std::uint64_t h = splitmix64(s);
    s ^= a * 0x9E3779B97F4A7C15ULL;
    h ^= splitmix64(s);
    s ^= b * 0xC2B2AE3D27D4EB4FULL;
    h ^= splitmix64(s);
    s ^= c * 0x165667B19E3779F9ULL;
    h ^= splitmix64(s);
    return h;
}

/// Synthetic Map output: T/8 pseudo-random bytes keyed by
/// (functionId, fileId, seed). Identical across platforms.
inline std::vector<std::uint8_t> map_value(std::int64_t functionId, std::int64_t fileId,
                                           std::uint64_t seed, std::int64_t bits) {
    if (bits <= 0 || bits % 8 != 0) {
        throw std::invalid_argument("map_value: bit size must be a positive multiple of 8");
    }
    std::uint64_t state = derive_seed(seed, static_cast<std::uint64_t>(functionId),
                                      static_cast<std::uint64_t>(fileId));
    std::vector<std::uint8_t> payload(static_cast<std::size_t>(bits / 8));
    std::size_t i = 0;
    while (i < payload.size()) {
        std::uint64_t word = splitmix64(state);
        for (int b = 0; b < 8 && i < payload.size(); ++b, ++i) {
            payload[i] = static_cast<std::uint8_t>(word >> (8 * b));
        }
    }
    return payload;
}

}  // namespace codedfog
