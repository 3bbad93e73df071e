#pragma once

#include <cstdint>
#include <fstream>
#include <string>
#include <vector>

#include "mscache/combinatorics.hpp"
#include "mscache/errors.hpp"
#include "mscache/mds.hpp"
#include "mscache/model.hpp"

namespace mscache {

// Every file cut into C(K, t) equal segments, indexed by the colex rank of
// the t-subset of users that will cache them.
struct SegmentLibrary {
    int K = 0;
    int t = 0;
    int per_file = 0;       // C(K, t)
    std::size_t seg_bytes = 0;
    std::vector<std::vector<std::vector<std::uint8_t>>> segs; // [file-1][rank]
};

inline SegmentLibrary segment_library(const FileLibrary& lib, int K, int t) {
    if (t < 0 || t > K) throw BadRange("segment_library: t outside [0, K]");
    SegmentLibrary out;
    out.K = K;
    out.t = t;
    out.per_file = static_cast<int>(binom(K, t));
    out.segs.reserve(lib.files.size());
    for (const auto& f : lib.files) {
        if (f.size() % static_cast<std::size_t>(out.per_file) != 0)
            throw BadLength("segment_library: file size not divisible by C(K, t)");
        out.seg_bytes = f.size() / static_cast<std::size_t>(out.per_file);
        std::vector<std::vector<std::uint8_t>> parts;
        parts.reserve(static_cast<std::size_t>(out.per_file));
        for (int r = 0; r < out.per_file; ++r)
            parts.emplace_back(f.begin() + static_cast<long>(r * out.seg_bytes),
                               f.begin() + static_cast<long>((r + 1) * out.seg_bytes));
        out.segs.push_back(std::move(parts));
    }
    return out;
}

// Server p holds exactly the column-p coded payload of every segment; total
// stored bytes are N * F / (rho - z), meeting M_S * F with equality.
struct ServerStorage {
    int server = 0;
    std::vector<std::vector<std::vector<std::uint8_t>>> shards; // [file-1][rank]
};

inline std::vector<ServerStorage> place_servers(const SegmentLibrary& segs,
                                                const GeneratorMatrix& g, int P) {
    if (g.n != P) throw BadRange("place_servers: generator length differs from P");
    std::vector<ServerStorage> servers(static_cast<std::size_t>(P));
    for (int p = 1; p <= P; ++p) {
        servers[static_cast<std::size_t>(p - 1)].server = p;
        servers[static_cast<std::size_t>(p - 1)].shards.assign(segs.segs.size(), {});
    }
    for (std::size_t j = 0; j < segs.segs.size(); ++j) {
        for (int p = 1; p <= P; ++p)
            servers[static_cast<std::size_t>(p - 1)].shards[j].reserve(segs.segs[j].size());
        for (const auto& segment : segs.segs[j]) {
            auto coded = encode_segment(segment, g);
            for (int p = 1; p <= P; ++p)
                servers[static_cast<std::size_t>(p - 1)].shards[j].push_back(std::move(coded[static_cast<std::size_t>(p - 1)]));
        }
    }
    return servers;
}

// User k caches segment (j, A) in plaintext iff k is in A.
struct UserCache {
    int user = 0;
    std::vector<std::vector<std::vector<std::uint8_t>>> segments; // [file-1][rank], empty when uncached
};

inline std::vector<UserCache> place_user_caches(const SegmentLibrary& segs) {
    std::vector<UserCache> caches(static_cast<std::size_t>(segs.K));
    auto subsets = subsets_colex(segs.K, segs.t);
    for (int k = 1; k <= segs.K; ++k) {
        auto& c = caches[static_cast<std::size_t>(k - 1)];
        c.user = k;
        c.segments.assign(segs.segs.size(), std::vector<std::vector<std::uint8_t>>(subsets.size()));
        for (std::size_t j = 0; j < segs.segs.size(); ++j)
            for (std::size_t r = 0; r < subsets.size(); ++r)
                if (std::binary_search(subsets[r].begin(), subsets[r].end(), k))
                    c.segments[j][r] = segs.segs[j][r];
    }
    return caches;
}

// Whole placement state for one coded scheme instance.
struct CodedPlacement {
    int K = 0, N = 0, P = 0, rho = 0, z = 0, t = 0;
    GeneratorMatrix g;
    SegmentLibrary segments;
    std::vector<ServerStorage> servers;
    std::vector<UserCache> caches;
};

inline CodedPlacement make_coded_placement(const FileLibrary& lib, int K, int P, int rho, int z, int t) {
    CodedPlacement c;
    c.K = K;
    c.N = static_cast<int>(lib.files.size());
    c.P = P;
    c.rho = rho;
    c.z = z;
    c.t = t;
    c.g = make_generator(rho - z, P);
    c.segments = segment_library(lib, K, t);
    c.servers = place_servers(c.segments, c.g, P);
    c.caches = place_user_caches(c.segments);
    return c;
}

namespace detail {

inline void put_u32(std::ostream& os, std::uint32_t v) {
    unsigned char b[4] = {static_cast<unsigned char>(v & 0xFF),
                          static_cast<unsigned char>((v >> 8) & 0xFF),
                          static_cast<unsigned char>((v >> 16) & 0xFF),
                          static_cast<unsigned char>((v >> 24) & 0xFF)};
    os.write(reinterpret_cast<const char*>(b), 4);
}

inline bool get_u32(std::istream& is, std::uint32_t& v) {
    unsigned char b[4];
    if (!is.read(reinterpret_cast<char*>(b), 4)) return false;
    v = static_cast<std::uint32_t>(b[0]) | (static_cast<std::uint32_t>(b[1]) << 8) |
        (static_cast<std::uint32_t>(b[2]) << 16) | (static_cast<std::uint32_t>(b[3]) << 24);
    return true;
}

} // namespace detail

// Binary snapshot: little-endian u32 header (K, N, P, k), then every shard
// payload length-prefixed in canonical (file, subset rank, server) order.
inline void save_placement(const std::string& path, const CodedPlacement& c) {
    std::ofstream os(path, std::ios::binary | std::ios::trunc);
    if (!os) throw BadRange("save_placement: cannot open " + path);
    detail::put_u32(os, static_cast<std::uint32_t>(c.K));
    detail::put_u32(os, static_cast<std::uint32_t>(c.N));
    detail::put_u32(os, static_cast<std::uint32_t>(c.P));
    detail::put_u32(os, static_cast<std::uint32_t>(c.g.k));
    for (int j = 0; j < c.N; ++j)
        for (int r = 0; r < c.segments.per_file; ++r)
            for (int p = 1; p <= c.P; ++p) {
                const auto& payload = c.servers[static_cast<std::size_t>(p - 1)].shards[static_cast<std::size_t>(j)][static_cast<std::size_t>(r)];
                detail::put_u32(os, static_cast<std::uint32_t>(payload.size()));
                os.write(reinterpret_cast<const char*>(payload.data()), static_cast<long>(payload.size()));
            }
    if (!os) throw BadRange("save_placement: write failed for " + path);
}

struct PlacementSnapshot {
    int K = 0, N = 0, P = 0, k = 0;
    int per_file = 0; // inferred segment count C(K, t)
    std::vector<ServerStorage> servers;
};

inline PlacementSnapshot load_placement(const std::string& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw BadRange("load_placement: cannot open " + path);
    PlacementSnapshot s;
    std::uint32_t v;
    for (int* field : {&s.K, &s.N, &s.P, &s.k}) {
        if (!detail::get_u32(is, v)) throw BadLength("load_placement: truncated header");
        *field = static_cast<int>(v);
    }
    std::vector<std::vector<std::uint8_t>> payloads;
    while (detail::get_u32(is, v)) {
        std::vector<std::uint8_t> payload(v);
        if (!is.read(reinterpret_cast<char*>(payload.data()), static_cast<long>(v)))
            throw BadLength("load_placement: truncated payload");
        payloads.push_back(std::move(payload));
    }
    std::size_t cell = static_cast<std::size_t>(s.N) * static_cast<std::size_t>(s.P);
    if (cell == 0 || payloads.size() % cell != 0)
        throw BadLength("load_placement: payload count inconsistent with header");
    s.per_file = static_cast<int>(payloads.size() / cell);
    s.servers.assign(static_cast<std::size_t>(s.P), {});
    for (int p = 1; p <= s.P; ++p) {
        s.servers[static_cast<std::size_t>(p - 1)].server = p;
        s.servers[static_cast<std::size_t>(p - 1)].shards.assign(static_cast<std::size_t>(s.N), {});
    }
    std::size_t i = 0;
    for (int j = 0; j < s.N; ++j)
        for (int r = 0; r < s.per_file; ++r)
            for (int p = 1; p <= s.P; ++p)
                s.servers[static_cast<std::size_t>(p - 1)].shards[static_cast<std::size_t>(j)].push_back(std::move(payloads[i++]));
    return s;
}

// Minimum-storage placement, M_S = (N - M_U) / rho: every user caches the
// identical per-file prefix, servers hold (P, rho) MDS shards of the rest.
struct MinStoragePlacement {
    std::size_t prefix_bytes = 0;
    GeneratorMatrix g;
    std::vector<std::vector<std::uint8_t>> prefix;              // [file-1]
    std::vector<std::vector<std::vector<std::uint8_t>>> shards; // [server-1][file-1]
};

inline MinStoragePlacement place_min_storage(const FileLibrary& lib, const SystemParams& sp) {
    if (!sp.validated) throw BadRange("place_min_storage: params not validated");
    MinStoragePlacement m;
    std::size_t bytes = lib.files.empty() ? 0 : lib.files[0].size();
    Rational pb = Rational(static_cast<long long>(bytes)) * sp.user_cache_files / Rational(sp.N);
    if (!pb.is_integer()) throw BadLength("place_min_storage: prefix not byte-aligned");
    m.prefix_bytes = static_cast<std::size_t>(pb.num);
    std::size_t rem = bytes - m.prefix_bytes;
    if (rem % static_cast<std::size_t>(sp.rho) != 0)
        throw BadLength("place_min_storage: remainder not divisible by rho");
    m.g = make_generator(sp.rho, sp.P);
    m.prefix.reserve(lib.files.size());
    m.shards.assign(static_cast<std::size_t>(sp.P), {});
    for (auto& sv : m.shards) sv.reserve(lib.files.size());
    for (const auto& f : lib.files) {
        m.prefix.emplace_back(f.begin(), f.begin() + static_cast<long>(m.prefix_bytes));
        std::vector<std::uint8_t> remainder(f.begin() + static_cast<long>(m.prefix_bytes), f.end());
        auto coded = encode_segment(remainder, m.g);
        for (int p = 1; p <= sp.P; ++p)
            m.shards[static_cast<std::size_t>(p - 1)].push_back(std::move(coded[static_cast<std::size_t>(p - 1)]));
    }
    return m;
}

} // namespace mscache
