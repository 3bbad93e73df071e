#pragma once

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <vector>

#include "mscache/errors.hpp"

namespace mscache {

// SplitMix64: tiny, fast, and fully reproducible across platforms.
struct Rng {
    std::uint64_t state;

    explicit Rng(std::uint64_t seed) : state(seed) {}

    std::uint64_t next() {
        state += 0x9E3779B97F4A7C15ULL;
        std::uint64_t z = state;
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        return z ^ (z >> 31);
    }

    // Unbiased integer in [0, n) via rejection sampling.
    std::uint64_t below(std::uint64_t n) {
        if (n == 0) throw BadRange("rng: below(0)");
        std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
        std::uint64_t v;
        do {
            v = next();
        } while (v >= limit);
        return v % n;
    }
};

// Counter-mode substream key: the idx-th output of a SplitMix64 stream seeded
// with key. Keys derived with distinct indices drive independent streams, so
// trials (and users within a trial) can be generated in any order.
inline std::uint64_t derive_key(std::uint64_t key, std::uint64_t idx) {
    std::uint64_t z = key + (idx + 1) * 0x9E3779B97F4A7C15ULL;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

// Uniform rho-subset of {1..P}, sorted ascending, via partial Fisher-Yates.
inline std::vector<int> sample_subset(int P, int rho, Rng& rng) {
    if (rho < 0 || rho > P) throw BadRange("sample_subset: need 0 <= rho <= P");
    std::vector<int> pool(static_cast<std::size_t>(P));
    std::iota(pool.begin(), pool.end(), 1);
    for (int i = 0; i < rho; ++i) {
        std::uint64_t j = i + rng.below(static_cast<std::uint64_t>(P - i));
        std::swap(pool[static_cast<std::size_t>(i)], pool[j]);
    }
    std::vector<int> out(pool.begin(), pool.begin() + rho);
    std::sort(out.begin(), out.end());
    return out;
}

} // namespace mscache
