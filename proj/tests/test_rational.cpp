#include <catch2/catch_amalgamated.hpp>

#include "mscache/rational.hpp"

using mscache::BadRange;
using mscache::Overflow;
using mscache::Rational;

TEST_CASE("rational reduces to lowest terms with positive denominator") {
    REQUIRE(Rational(6, 4) == Rational(3, 2));
    REQUIRE(Rational(6, 4).num == 3);
    REQUIRE(Rational(6, 4).den == 2);
    REQUIRE(Rational(1, -2).num == -1);
    REQUIRE(Rational(1, -2).den == 2);
    REQUIRE(Rational(-3, -6) == Rational(1, 2));
    REQUIRE(Rational(0, 7).num == 0);
    REQUIRE(Rational(0, 7).den == 1);
    REQUIRE(Rational(5).is_integer());
    REQUIRE_THROWS_AS(Rational(1, 0), BadRange);
}

TEST_CASE("rational arithmetic is exact") {
    REQUIRE(Rational(1, 3) + Rational(1, 6) == Rational(1, 2));
    REQUIRE(Rational(1, 3) - Rational(1, 2) == Rational(-1, 6));
    REQUIRE(Rational(2, 3) * Rational(3, 4) == Rational(1, 2));
    REQUIRE(Rational(5, 6) / Rational(5, 6) == Rational(1));
    REQUIRE(-Rational(2, 5) == Rational(-2, 5));
    Rational acc(0);
    for (int i = 0; i < 7; ++i) acc += Rational(1, 7);
    REQUIRE(acc == Rational(1));
    REQUIRE_THROWS_AS(Rational(1) / Rational(0), BadRange);
}

TEST_CASE("rational comparisons") {
    REQUIRE(Rational(1, 3) < Rational(1, 2));
    REQUIRE(Rational(2, 6) == Rational(1, 3));
    REQUIRE(Rational(-1, 2) < Rational(1, 3));
    REQUIRE(Rational(7, 2) > Rational(3));
    REQUIRE(Rational(1, 2) <= Rational(1, 2));
    REQUIRE(Rational(1, 2) >= Rational(1, 3));
}

TEST_CASE("floor, ceil, to_double, str") {
    REQUIRE(Rational(7, 2).floor() == 3);
    REQUIRE(Rational(7, 2).ceil() == 4);
    REQUIRE(Rational(-7, 2).floor() == -4);
    REQUIRE(Rational(-7, 2).ceil() == -3);
    REQUIRE(Rational(5).floor() == 5);
    REQUIRE(Rational(5).ceil() == 5);
    REQUIRE(Rational(1, 2).to_double() == 0.5);
    REQUIRE(Rational(3, 2).str() == "3/2");
    REQUIRE(Rational(5).str() == "5");
    REQUIRE(Rational(-1, 2).str() == "-1/2");
}

TEST_CASE("rational_pow") {
    REQUIRE(mscache::rational_pow(Rational(2, 3), 3) == Rational(8, 27));
    REQUIRE(mscache::rational_pow(Rational(2, 3), 0) == Rational(1));
    REQUIRE(mscache::rational_pow(Rational(2, 3), -2) == Rational(9, 4));
    REQUIRE(mscache::rational_pow(Rational(-1, 2), 2) == Rational(1, 4));
    REQUIRE_THROWS_AS(mscache::rational_pow(Rational(0), -1), BadRange);
}

TEST_CASE("parse_rational accepts integers, fractions, and decimals") {
    REQUIRE(mscache::parse_rational("5") == Rational(5));
    REQUIRE(mscache::parse_rational("-5") == Rational(-5));
    REQUIRE(mscache::parse_rational("5/4") == Rational(5, 4));
    REQUIRE(mscache::parse_rational("-3/6") == Rational(-1, 2));
    REQUIRE(mscache::parse_rational("1.25") == Rational(5, 4));
    REQUIRE(mscache::parse_rational("0.1") == Rational(1, 10));
    REQUIRE(mscache::parse_rational(" 2/3 ") == Rational(2, 3));
    REQUIRE_THROWS_AS(mscache::parse_rational(""), BadRange);
    REQUIRE_THROWS_AS(mscache::parse_rational("abc"), BadRange);
    REQUIRE_THROWS_AS(mscache::parse_rational("1/0"), BadRange);
    REQUIRE_THROWS_AS(mscache::parse_rational("1/2/3"), BadRange);
}

TEST_CASE("overflow detection") {
    Rational big(1, 3000000000000000000LL);
    REQUIRE_THROWS_AS(big * big, Overflow);
    Rational huge(9223372036854775807LL);
    REQUIRE_THROWS_AS(huge * Rational(2), Overflow);
    // products whose reduced form fits do not throw
    REQUIRE(Rational(1, 1LL << 40) * Rational(1LL << 40) == Rational(1));
}
