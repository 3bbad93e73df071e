#include <catch2/catch_amalgamated.hpp>

#include "mscache/combinatorics.hpp"

using mscache::BadRange;
using mscache::binom;
using mscache::colex_rank;
using mscache::colex_unrank;
using mscache::subsets_colex;

TEST_CASE("binom basic values") {
    REQUIRE(binom(5, 2) == 10);
    REQUIRE(binom(0, 0) == 1);
    REQUIRE(binom(7, 0) == 1);
    REQUIRE(binom(7, 7) == 1);
    REQUIRE(binom(10, 3) == 120);
    // largest central coefficient inside the supported range
    REQUIRE(binom(66, 33) == 7219428434016265740LL);
}

TEST_CASE("binom out-of-range r returns zero, bad n throws") {
    REQUIRE(binom(5, -1) == 0);
    REQUIRE(binom(5, 6) == 0);
    REQUIRE_THROWS_AS(binom(67, 1), BadRange);
    REQUIRE_THROWS_AS(binom(-1, 0), BadRange);
}

TEST_CASE("binom satisfies Pascal recurrence") {
    for (int n = 1; n <= 20; ++n)
        for (int r = 1; r < n; ++r)
            REQUIRE(binom(n, r) == binom(n - 1, r - 1) + binom(n - 1, r));
}

TEST_CASE("subsets_colex enumerates in colexicographic order") {
    auto subs = subsets_colex(4, 2);
    std::vector<std::vector<int>> expect = {
        {1, 2}, {1, 3}, {2, 3}, {1, 4}, {2, 4}, {3, 4}};
    REQUIRE(subs == expect);
    REQUIRE(subsets_colex(3, 0) == std::vector<std::vector<int>>{{}});
    REQUIRE(subsets_colex(3, 4).empty());
    REQUIRE(subsets_colex(5, 5) == std::vector<std::vector<int>>{{1, 2, 3, 4, 5}});
}

TEST_CASE("colex rank and unrank are inverse bijections") {
    for (int r = 0; r <= 7; ++r) {
        auto subs = subsets_colex(7, r);
        REQUIRE(static_cast<long long>(subs.size()) == binom(7, r));
        for (long long i = 0; i < static_cast<long long>(subs.size()); ++i) {
            REQUIRE(colex_rank(subs[i]) == i);
            REQUIRE(colex_unrank(i, r) == subs[i]);
        }
    }
}

TEST_CASE("colex_rank rejects malformed subsets") {
    REQUIRE_THROWS_AS(colex_rank({2, 1}), BadRange);
    REQUIRE_THROWS_AS(colex_rank({1, 1}), BadRange);
    REQUIRE_THROWS_AS(colex_rank({0, 1}), BadRange);
}

TEST_CASE("colex_unrank rejects bad arguments") {
    REQUIRE_THROWS_AS(colex_unrank(-1, 2), BadRange);
    REQUIRE_THROWS_AS(colex_unrank(0, -1), BadRange);
}
