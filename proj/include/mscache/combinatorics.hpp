#pragma once

#include <vector>

#include "mscache/errors.hpp"

namespace mscache {

// Largest n for which every C(n, r) fits in a signed 64-bit integer.
inline constexpr int kBinomMaxN = 66;

// Binomial coefficient with the convention C(n, r) = 0 for r < 0 or r > n,
// needed by the latency formulas where C(K - q_p, t + 1) can have r > n.
inline long long binom(int n, int r) {
    if (n < 0 || n > kBinomMaxN) throw BadRange("binom: n out of [0, 66]");
    if (r < 0 || r > n) return 0;
    static const std::vector<std::vector<long long>> table = [] {
        std::vector<std::vector<long long>> t(kBinomMaxN + 1);
        for (int i = 0; i <= kBinomMaxN; ++i) {
            t[i].assign(i + 1, 1);
            for (int j = 1; j < i; ++j) t[i][j] = t[i - 1][j - 1] + t[i - 1][j];
        }
        return t;
    }();
    return table[n][r];
}

// Colexicographic rank of a sorted r-subset of positive integers.
// rank = sum over positions i (1-based) of C(element_i - 1, i).
inline long long colex_rank(const std::vector<int>& subset) {
    long long rank = 0;
    for (std::size_t i = 0; i < subset.size(); ++i) {
        if (subset[i] < 1 || (i > 0 && subset[i] <= subset[i - 1]))
            throw BadRange("colex_rank: subset must be sorted, distinct, 1-based");
        rank += binom(subset[i] - 1, static_cast<int>(i) + 1);
    }
    return rank;
}

// Inverse of colex_rank for subsets of size r.
inline std::vector<int> colex_unrank(long long rank, int r) {
    if (r < 0 || rank < 0) throw BadRange("colex_unrank: negative input");
    std::vector<int> out(r);
    for (int i = r; i >= 1; --i) {
        int e = i; // smallest possible element at position i
        while (binom(e, i) <= rank) ++e;
        out[i - 1] = e;
        rank -= binom(e - 1, i);
    }
    return out;
}

// All r-subsets of {1..n} in colexicographic order.
inline std::vector<std::vector<int>> subsets_colex(int n, int r) {
    if (n < 0 || r < 0) throw BadRange("subsets_colex: negative input");
    std::vector<std::vector<int>> out;
    if (r > n) return out;
    long long total = binom(n, r);
    out.reserve(static_cast<std::size_t>(total));
    for (long long rank = 0; rank < total; ++rank) out.push_back(colex_unrank(rank, r));
    return out;
}

} // namespace mscache
