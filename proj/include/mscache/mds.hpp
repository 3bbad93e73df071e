#pragma once

#include <algorithm>
#include <cstdint>
#include <vector>

#include "mscache/errors.hpp"
#include "mscache/gf256.hpp"

namespace mscache {

// Vandermonde evaluation code over GF(2^8): column l is
// (1, x_l, x_l^2, ..., x_l^{k-1}) at distinct points x_l = l - 1, so every
// k x k column submatrix is invertible and the code is MDS.
struct GeneratorMatrix {
    int k = 0;
    int n = 0;
    std::vector<std::uint8_t> entries;           // row-major k x n
    std::vector<std::uint8_t> evaluation_points; // x_l per column

    std::uint8_t at(int row, int col) const {
        return entries[static_cast<std::size_t>(row) * n + col];
    }
};

inline GeneratorMatrix make_generator(int k, int n) {
    if (k < 1 || k > n || n > 255) throw BadRange("make_generator: need 1 <= k <= n <= 255");
    GeneratorMatrix g;
    g.k = k;
    g.n = n;
    g.entries.resize(static_cast<std::size_t>(k) * n);
    g.evaluation_points.resize(static_cast<std::size_t>(n));
    for (int l = 0; l < n; ++l) {
        std::uint8_t x = static_cast<std::uint8_t>(l);
        g.evaluation_points[static_cast<std::size_t>(l)] = x;
        std::uint8_t pw = 1; // x^0, with 0^0 = 1
        for (int m = 0; m < k; ++m) {
            g.entries[static_cast<std::size_t>(m) * n + l] = pw;
            pw = gf_mul(pw, x);
        }
    }
    return g;
}

// One coded share as stored at a server: index is the 1-based column l.
struct Share {
    int index = 0;
    std::vector<std::uint8_t> payload;
};

// Splits the segment into k equal subsegments and emits n coded payloads,
// payload l = sum over m of g[m][l] * subsegment_m, byte-wise.
inline std::vector<std::vector<std::uint8_t>> encode_segment(const std::vector<std::uint8_t>& segment,
                                                             const GeneratorMatrix& g) {
    if (g.k < 1) throw BadRange("encode_segment: empty generator");
    if (segment.size() % static_cast<std::size_t>(g.k) != 0)
        throw BadLength("encode_segment: segment length not divisible by k");
    std::size_t sub = segment.size() / static_cast<std::size_t>(g.k);
    std::vector<std::vector<std::uint8_t>> out(static_cast<std::size_t>(g.n),
                                               std::vector<std::uint8_t>(sub, 0));
    for (int l = 0; l < g.n; ++l) {
        auto& payload = out[static_cast<std::size_t>(l)];
        for (int m = 0; m < g.k; ++m) {
            std::uint8_t c = g.at(m, l);
            if (c == 0) continue;
            const std::uint8_t* src = segment.data() + static_cast<std::size_t>(m) * sub;
            for (std::size_t b = 0; b < sub; ++b) payload[b] ^= gf_mul(c, src[b]);
        }
    }
    return out;
}

// Recovers the original segment from any k shares with distinct indices by
// solving the k x k Vandermonde system with Gauss-Jordan elimination.
inline std::vector<std::uint8_t> decode_segment(const std::vector<Share>& shares,
                                                const GeneratorMatrix& g) {
    std::vector<const Share*> chosen;
    {
        std::vector<const Share*> sorted;
        sorted.reserve(shares.size());
        for (const Share& s : shares) {
            if (s.index < 1 || s.index > g.n) throw BadRange("decode_segment: share index out of [1, n]");
            sorted.push_back(&s);
        }
        std::sort(sorted.begin(), sorted.end(),
                  [](const Share* a, const Share* b) { return a->index < b->index; });
        for (const Share* s : sorted) {
            if (!chosen.empty() && chosen.back()->index == s->index) continue;
            chosen.push_back(s);
            if (static_cast<int>(chosen.size()) == g.k) break;
        }
    }
    if (static_cast<int>(chosen.size()) < g.k)
        throw NotEnoughShares("decode_segment: fewer than k distinct share indices");
    std::size_t sub = chosen[0]->payload.size();
    for (const Share* s : chosen)
        if (s->payload.size() != sub) throw BadLength("decode_segment: unequal share payloads");

    // Augmented system: row r is (g[0][l_r], ..., g[k-1][l_r] | payload_r),
    // unknowns are the k subsegments.
    int k = g.k;
    std::vector<std::uint8_t> a(static_cast<std::size_t>(k) * k);
    std::vector<std::vector<std::uint8_t>> rhs(static_cast<std::size_t>(k));
    for (int r = 0; r < k; ++r) {
        int col = chosen[static_cast<std::size_t>(r)]->index - 1;
        for (int m = 0; m < k; ++m) a[static_cast<std::size_t>(r) * k + m] = g.at(m, col);
        rhs[static_cast<std::size_t>(r)] = chosen[static_cast<std::size_t>(r)]->payload;
    }
    for (int col = 0; col < k; ++col) {
        int pivot = -1;
        for (int r = col; r < k; ++r)
            if (a[static_cast<std::size_t>(r) * k + col] != 0) {
                pivot = r;
                break;
            }
        if (pivot < 0) throw SingularSystem("decode_segment: singular system, codec bug");
        if (pivot != col) {
            for (int m = 0; m < k; ++m)
                std::swap(a[static_cast<std::size_t>(pivot) * k + m], a[static_cast<std::size_t>(col) * k + m]);
            std::swap(rhs[static_cast<std::size_t>(pivot)], rhs[static_cast<std::size_t>(col)]);
        }
        std::uint8_t inv = gf_inv(a[static_cast<std::size_t>(col) * k + col]);
        for (int m = 0; m < k; ++m)
            a[static_cast<std::size_t>(col) * k + m] = gf_mul(inv, a[static_cast<std::size_t>(col) * k + m]);
        for (std::uint8_t& b : rhs[static_cast<std::size_t>(col)]) b = gf_mul(inv, b);
        for (int r = 0; r < k; ++r) {
            if (r == col) continue;
            std::uint8_t f = a[static_cast<std::size_t>(r) * k + col];
            if (f == 0) continue;
            for (int m = 0; m < k; ++m)
                a[static_cast<std::size_t>(r) * k + m] =
                    static_cast<std::uint8_t>(a[static_cast<std::size_t>(r) * k + m] ^
                                              gf_mul(f, a[static_cast<std::size_t>(col) * k + m]));
            auto& row = rhs[static_cast<std::size_t>(r)];
            const auto& prow = rhs[static_cast<std::size_t>(col)];
            for (std::size_t b = 0; b < sub; ++b) row[b] = static_cast<std::uint8_t>(row[b] ^ gf_mul(f, prow[b]));
        }
    }
    std::vector<std::uint8_t> segment;
    segment.reserve(sub * static_cast<std::size_t>(k));
    for (int m = 0; m < k; ++m)
        segment.insert(segment.end(), rhs[static_cast<std::size_t>(m)].begin(), rhs[static_cast<std::size_t>(m)].end());
    return segment;
}

} // namespace mscache
