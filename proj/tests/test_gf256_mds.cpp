#include <catch2/catch_amalgamated.hpp>

#include <cstdint>
#include <numeric>
#include <set>

#include "mscache/combinatorics.hpp"
#include "mscache/mds.hpp"

using mscache::BadLength;
using mscache::BadRange;
using mscache::decode_segment;
using mscache::encode_segment;
using mscache::gf_inv;
using mscache::gf_mul;
using mscache::gf_pow;
using mscache::make_generator;
using mscache::NotEnoughShares;
using mscache::Share;

namespace {

// Independent oracle: carry-less multiply reduced mod x^8+x^4+x^3+x+1.
uint8_t slow_mul(uint8_t a, uint8_t b) {
    uint16_t acc = 0, aa = a;
    for (int i = 0; i < 8; ++i) {
        if (b & (1 << i)) acc ^= static_cast<uint16_t>(aa << i);
    }
    for (int bit = 15; bit >= 8; --bit) {
        if (acc & (1 << bit)) acc ^= static_cast<uint16_t>(0x11B << (bit - 8));
    }
    return static_cast<uint8_t>(acc);
}

}  // namespace

TEST_CASE("gf_mul known products") {
    REQUIRE(gf_mul(0x57, 0x83) == 0xC1);
    REQUIRE(gf_mul(0x80, 0x02) == 0x1B);
    REQUIRE(gf_mul(0x00, 0xFF) == 0x00);
    REQUIRE(gf_mul(0x01, 0xAB) == 0xAB);
}

TEST_CASE("gf_mul agrees with polynomial oracle on all pairs") {
    for (int a = 0; a < 256; ++a)
        for (int b = 0; b < 256; ++b)
            REQUIRE(gf_mul(static_cast<uint8_t>(a), static_cast<uint8_t>(b)) ==
                    slow_mul(static_cast<uint8_t>(a), static_cast<uint8_t>(b)));
}

TEST_CASE("gf_inv inverts every nonzero element") {
    for (int a = 1; a < 256; ++a)
        REQUIRE(gf_mul(static_cast<uint8_t>(a), gf_inv(static_cast<uint8_t>(a))) == 1);
    REQUIRE_THROWS_AS(gf_inv(0), BadRange);
}

TEST_CASE("gf_pow and generator order") {
    REQUIRE(gf_pow(0x03, 0) == 1);
    REQUIRE(gf_pow(0x03, 1) == 3);
    REQUIRE(gf_pow(0x03, 255) == 1);
    // 0x03 generates the full multiplicative group
    std::set<uint8_t> seen;
    for (int e = 0; e < 255; ++e) seen.insert(gf_pow(0x03, e));
    REQUIRE(seen.size() == 255);
}

TEST_CASE("make_generator shape and evaluation points") {
    auto g = make_generator(3, 7);
    REQUIRE(g.k == 3);
    REQUIRE(g.n == 7);
    REQUIRE(g.evaluation_points.size() == 7);
    for (int l = 1; l <= 7; ++l) {
        REQUIRE(g.evaluation_points[l - 1] == static_cast<uint8_t>(l - 1));
        // column l is (1, x_l, x_l^2)
        uint8_t x = static_cast<uint8_t>(l - 1);
        REQUIRE(g.at(0, l - 1) == 1);
        REQUIRE(g.at(1, l - 1) == x);
        REQUIRE(g.at(2, l - 1) == gf_mul(x, x));
    }
    REQUIRE_THROWS_AS(make_generator(0, 5), BadRange);
    REQUIRE_THROWS_AS(make_generator(6, 5), BadRange);
    REQUIRE_THROWS_AS(make_generator(1, 256), BadRange);
}

TEST_CASE("payload at evaluation point zero carries the first subsegment") {
    auto g = make_generator(4, 6);
    std::vector<uint8_t> seg(4 * 5);
    std::iota(seg.begin(), seg.end(), 17);
    auto payloads = encode_segment(seg, g);
    REQUIRE(payloads.size() == 6);
    REQUIRE(payloads[0] == std::vector<uint8_t>(seg.begin(), seg.begin() + 5));
}

TEST_CASE("encode then decode from every k-subset of shares, n up to 12") {
    for (int n = 1; n <= 12; ++n) {
        for (int k = 1; k <= n; ++k) {
            auto g = make_generator(k, n);
            std::vector<uint8_t> seg(static_cast<size_t>(k) * 3);
            for (size_t i = 0; i < seg.size(); ++i)
                seg[i] = static_cast<uint8_t>((i * 37 + n * 11 + k) & 0xFF);
            auto payloads = encode_segment(seg, g);
            for (auto& pick : mscache::subsets_colex(n, k)) {
                std::vector<Share> sub;
                for (int idx : pick) sub.push_back(Share{idx, payloads[static_cast<size_t>(idx) - 1]});
                REQUIRE(decode_segment(sub, g) == seg);
            }
        }
    }
}

TEST_CASE("decode error handling") {
    auto g = make_generator(3, 5);
    std::vector<uint8_t> seg(3 * 4, 0x42);
    auto payloads = encode_segment(seg, g);
    auto share = [&](int idx) { return Share{idx, payloads[static_cast<size_t>(idx) - 1]}; };

    std::vector<Share> few = {share(1), share(2)};
    REQUIRE_THROWS_AS(decode_segment(few, g), NotEnoughShares);

    // duplicates collapse to one distinct index
    std::vector<Share> dup = {share(1), share(1), share(1)};
    REQUIRE_THROWS_AS(decode_segment(dup, g), NotEnoughShares);

    std::vector<Share> bad = {share(1), share(2), Share{9, payloads[2]}};
    REQUIRE_THROWS_AS(decode_segment(bad, g), BadRange);

    std::vector<Share> uneven = {share(1), share(2), Share{3, {0x01}}};
    REQUIRE_THROWS_AS(decode_segment(uneven, g), BadLength);

    // extra shares beyond k are fine
    std::vector<Share> all = {share(1), share(2), share(3), share(4), share(5)};
    REQUIRE(decode_segment(all, g) == seg);
}

TEST_CASE("encode rejects segments not divisible by k") {
    auto g = make_generator(3, 5);
    std::vector<uint8_t> seg(7, 0);
    REQUIRE_THROWS_AS(encode_segment(seg, g), BadLength);
}
