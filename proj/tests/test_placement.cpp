#include <catch2/catch_amalgamated.hpp>

#include <cstdio>
#include <fstream>

#include "mscache/placement.hpp"
#include "mscache/rng.hpp"

using mscache::BadLength;
using mscache::BadRange;
using mscache::decode_segment;
using mscache::FileLibrary;
using mscache::make_coded_placement;
using mscache::make_library;
using mscache::Rational;
using mscache::Rng;
using mscache::sample_subset;
using mscache::segment_library;
using mscache::Share;
using mscache::SystemParams;
using mscache::validate_params;

namespace {

FileLibrary library(int N, std::size_t unit, std::size_t units_per_file) {
    std::vector<std::vector<std::uint8_t>> raw(static_cast<std::size_t>(N));
    for (int j = 0; j < N; ++j) {
        raw[static_cast<std::size_t>(j)].resize(unit * units_per_file);
        for (std::size_t i = 0; i < raw[static_cast<std::size_t>(j)].size(); ++i)
            raw[static_cast<std::size_t>(j)][i] =
                static_cast<std::uint8_t>((j * 131 + static_cast<int>(i)) & 0xFF);
    }
    return make_library(std::move(raw), unit);
}

SystemParams params(int K, int N, int P, int rho, int z, Rational mu) {
    SystemParams p;
    p.K = K;
    p.N = N;
    p.P = P;
    p.rho = rho;
    p.z = z;
    p.user_cache_files = mu;
    return validate_params(p);
}

std::size_t total_bytes(const std::vector<std::vector<std::vector<std::uint8_t>>>& v) {
    std::size_t n = 0;
    for (auto& a : v)
        for (auto& b : a) n += b.size();
    return n;
}

}  // namespace

TEST_CASE("segment_library slices files into C(K, t) equal segments") {
    auto lib = library(2, 8, 1);
    auto segs = segment_library(lib, 4, 1);
    REQUIRE(segs.per_file == 4);
    REQUIRE(segs.seg_bytes == 2);
    REQUIRE(segs.segs.size() == 2);
    // segment r of file j is the r-th contiguous slice
    REQUIRE(segs.segs[0][1] ==
            std::vector<std::uint8_t>(lib.files[0].begin() + 2,
                                      lib.files[0].begin() + 4));
    REQUIRE_THROWS_AS(segment_library(lib, 4, 5), BadRange);
    auto odd = make_library({{1, 2, 3}}, 3);
    REQUIRE_THROWS_AS(segment_library(odd, 4, 1), BadLength);
}

TEST_CASE("coded placement meets the storage budgets exactly") {
    // K=4, N=5, P=3, rho=2, z=0, mu=5/4, t=1
    auto lib = library(5, 8, 2);
    auto c = make_coded_placement(lib, 4, 3, 2, 0, 1);
    REQUIRE(c.g.k == 2);
    REQUIRE(c.g.n == 3);
    std::size_t F = lib.files[0].size();

    // each server: N * F / (rho - z) bytes
    for (auto& sv : c.servers)
        REQUIRE(total_bytes(sv.shards) == 5 * F / 2);

    // each user cache: (t / K) * N * F bytes = mu * F
    for (auto& uc : c.caches) {
        std::size_t cached = 0;
        for (auto& file : uc.segments)
            for (auto& seg : file) cached += seg.size();
        REQUIRE(cached == 5 * F / 4);
    }

    // user k caches exactly the segments whose subset contains k
    auto subsets = mscache::subsets_colex(4, 1);
    for (int k = 1; k <= 4; ++k)
        for (std::size_t r = 0; r < subsets.size(); ++r) {
            bool has = !c.caches[static_cast<std::size_t>(k - 1)].segments[0][r].empty();
            REQUIRE(has == (subsets[r][0] == k));
        }
}

TEST_CASE("every segment decodes from any rho - z server shards") {
    // 18 bytes per file: C(3,2) = 3 segments of 6, divisible by code dimension 3
    auto lib = library(3, 18, 1);
    // K=3, P=5, rho=4, z=1 -> code dimension 3
    auto c = make_coded_placement(lib, 3, 5, 4, 1, 2);
    REQUIRE(c.g.k == 3);
    Rng r(5);
    for (int j = 0; j < 3; ++j)
        for (int rank = 0; rank < c.segments.per_file; ++rank) {
            auto pick = sample_subset(5, 3, r);
            std::vector<Share> shares;
            for (int p : pick)
                shares.push_back(Share{
                    p, c.servers[static_cast<std::size_t>(p - 1)]
                           .shards[static_cast<std::size_t>(j)][static_cast<std::size_t>(rank)]});
            REQUIRE(decode_segment(shares, c.g) ==
                    c.segments.segs[static_cast<std::size_t>(j)][static_cast<std::size_t>(rank)]);
        }
}

TEST_CASE("placement snapshot round trip preserves every shard") {
    auto lib = library(2, 8, 1);
    auto c = make_coded_placement(lib, 4, 3, 2, 0, 1);
    std::string path = "placement_roundtrip.bin";
    mscache::save_placement(path, c);
    auto s = mscache::load_placement(path);
    REQUIRE(s.K == 4);
    REQUIRE(s.N == 2);
    REQUIRE(s.P == 3);
    REQUIRE(s.k == 2);
    REQUIRE(s.per_file == 4);
    for (std::size_t p = 0; p < 3; ++p)
        REQUIRE(s.servers[p].shards == c.servers[p].shards);

    // truncated header and truncated payload both fail loudly
    {
        std::ofstream os("placement_trunc.bin", std::ios::binary);
        os.write("\x04\x00\x00\x00\x02", 5);
    }
    REQUIRE_THROWS_AS(mscache::load_placement("placement_trunc.bin"), BadLength);
    {
        std::ifstream is(path, std::ios::binary);
        std::vector<char> all((std::istreambuf_iterator<char>(is)),
                              std::istreambuf_iterator<char>());
        std::ofstream os("placement_trunc.bin", std::ios::binary);
        os.write(all.data(), static_cast<long>(all.size() - 3));
    }
    REQUIRE_THROWS_AS(mscache::load_placement("placement_trunc.bin"), BadLength);
    REQUIRE_THROWS_AS(mscache::load_placement("no_such_file.bin"), BadRange);
    std::remove(path.c_str());
    std::remove("placement_trunc.bin");
}

TEST_CASE("min-storage placement splits prefix and coded remainder") {
    auto sp = params(4, 5, 3, 2, 0, Rational(5, 4));
    auto lib = library(5, mscache::padding_unit_bytes(sp), 2);
    std::size_t F = lib.files[0].size();
    auto m = mscache::place_min_storage(lib, sp);
    REQUIRE(m.prefix_bytes == F / 4);  // mu / N = 1/4 of each file
    REQUIRE(m.g.k == 2);
    REQUIRE(m.g.n == 3);
    for (auto& sv : m.shards) {
        REQUIRE(sv.size() == 5);
        for (auto& shard : sv) REQUIRE(shard.size() == (F - F / 4) / 2);
    }
    // remainder decodes from any rho shards
    for (int j = 0; j < 5; ++j) {
        std::vector<Share> shares = {
            Share{2, m.shards[1][static_cast<std::size_t>(j)]},
            Share{3, m.shards[2][static_cast<std::size_t>(j)]}};
        std::vector<std::uint8_t> expect(
            lib.files[static_cast<std::size_t>(j)].begin() +
                static_cast<long>(m.prefix_bytes),
            lib.files[static_cast<std::size_t>(j)].end());
        REQUIRE(decode_segment(shares, m.g) == expect);
        REQUIRE(m.prefix[static_cast<std::size_t>(j)] ==
                std::vector<std::uint8_t>(
                    lib.files[static_cast<std::size_t>(j)].begin(),
                    lib.files[static_cast<std::size_t>(j)].begin() +
                        static_cast<long>(m.prefix_bytes)));
    }

    // misaligned library: prefix would not be whole bytes
    auto bad = make_library({std::vector<std::uint8_t>(6, 1)}, 6);
    REQUIRE_THROWS_AS(mscache::place_min_storage(bad, sp), BadLength);
    SystemParams raw;
    raw.K = 4;
    REQUIRE_THROWS_AS(mscache::place_min_storage(lib, raw), BadRange);
}
