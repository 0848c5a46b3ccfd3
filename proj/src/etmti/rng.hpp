#pragma once
#include <cstdint>

namespace etmti {

// splitmix64: cheap avalanche step used for hashing and seed derivation.
inline uint64_t splitmix64(uint64_t x) {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

// Deterministic two-input mixer. Child seeds for scenario/sweep/trial are
// chained through this so every trial gets an independent, reproducible stream.
inline uint64_t mix64(uint64_t a, uint64_t b) {
    return splitmix64(a ^ (splitmix64(b) + 0x9E3779B97F4A7C15ULL + (a << 6) + (a >> 2)));
}

} // namespace etmti
