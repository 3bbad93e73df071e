#include <catch2/catch_amalgamated.hpp>

#include <map>

#include "mscache/rng.hpp"

using mscache::BadRange;
using mscache::derive_key;
using mscache::Rng;
using mscache::sample_subset;

TEST_CASE("splitmix64 matches the reference stream for seed 0") {
    Rng r(0);
    REQUIRE(r.next() == 0xE220A8397B1DCDAFull);
    REQUIRE(r.next() == 0x6E789E6AA1B965F4ull);
    REQUIRE(r.next() == 0x06C45D188009454Full);
    REQUIRE(r.next() == 0xF88BB8A8724C81ECull);
    REQUIRE(r.next() == 0x1B39896A51A8749Bull);
}

TEST_CASE("splitmix64 matches the reference stream for seed 0x123456789abcdef") {
    Rng r(0x123456789ABCDEFull);
    REQUIRE(r.next() == 0x157A3807A48FAA9Dull);
    REQUIRE(r.next() == 0xD573529B34A1D093ull);
    REQUIRE(r.next() == 0x2F90B72E996DCCBEull);
}

TEST_CASE("derive_key(key, i) equals the (i+1)-th output of Rng(key)") {
    for (uint64_t key : {0ull, 42ull, 0xDEADBEEFull}) {
        Rng r(key);
        for (uint64_t i = 0; i < 10; ++i) {
            uint64_t expect = r.next();
            REQUIRE(derive_key(key, i) == expect);
        }
    }
    REQUIRE(derive_key(42, 3) == 0x581CE1FF0E4AE394ull);
}

TEST_CASE("below returns values in range and is deterministic") {
    Rng a(7), b(7);
    for (int i = 0; i < 1000; ++i) {
        uint64_t va = a.below(13);
        REQUIRE(va < 13);
        REQUIRE(va == b.below(13));
    }
    Rng c(7);
    REQUIRE_THROWS_AS(c.below(0), BadRange);
}

TEST_CASE("sample_subset yields sorted distinct elements in range") {
    for (uint64_t seed = 0; seed < 50; ++seed) {
        Rng r(seed);
        auto s = sample_subset(9, 4, r);
        REQUIRE(s.size() == 4);
        for (size_t i = 0; i < s.size(); ++i) {
            REQUIRE(s[i] >= 1);
            REQUIRE(s[i] <= 9);
            if (i > 0) REQUIRE(s[i] > s[i - 1]);
        }
        Rng r2(seed);
        REQUIRE(s == sample_subset(9, 4, r2));
    }
    Rng full(1);
    REQUIRE(sample_subset(5, 5, full) == std::vector<int>{1, 2, 3, 4, 5});
    Rng none(1);
    REQUIRE(sample_subset(3, 0, none).empty());
    Rng bad(0);
    REQUIRE_THROWS_AS(sample_subset(3, 4, bad), BadRange);
}

TEST_CASE("sample_subset covers all subsets roughly uniformly") {
    // P=5, rho=2: 10 possible subsets, 10000 draws, expect ~1000 each.
    std::map<std::vector<int>, int> counts;
    for (uint64_t i = 0; i < 10000; ++i) {
        Rng r(derive_key(99, i));
        counts[sample_subset(5, 2, r)]++;
    }
    REQUIRE(counts.size() == 10);
    for (auto& [sub, c] : counts) {
        REQUIRE(c > 800);
        REQUIRE(c < 1200);
    }
}
