#include <catch2/catch_amalgamated.hpp>

#include "mscache/model.hpp"

using mscache::BadRange;
using mscache::InfeasibleStorage;
using mscache::make_library;
using mscache::memory_share_split;
using mscache::padding_unit_bytes;
using mscache::Rational;
using mscache::SystemParams;
using mscache::validate_params;
using mscache::worst_case_demands;

namespace {

SystemParams base() {
    SystemParams p;
    p.K = 4;
    p.N = 5;
    p.P = 3;
    p.rho = 2;
    p.z = 0;
    p.user_cache_files = Rational(5, 4);
    return p;
}

}  // namespace

TEST_CASE("validate_params derives t, alpha, alpha_hat, default M_S") {
    auto p = validate_params(base());
    REQUIRE(p.validated);
    REQUIRE(p.t == Rational(1));
    REQUIRE(p.alpha == Rational(2, 3));
    REQUIRE(p.alpha_hat == Rational(2, 3));
    REQUIRE_FALSE(p.server_storage_given);
    REQUIRE(p.server_storage_files == Rational(5, 2));
    // idempotent on already-validated params
    auto q = validate_params(p);
    REQUIRE(q.t == p.t);

    auto r = base();
    r.z = 1;
    r = validate_params(r);
    REQUIRE(r.alpha_hat == Rational(1, 3));
    REQUIRE(r.server_storage_files == Rational(5));
}

TEST_CASE("validate_params rejects out-of-range parameters") {
    auto p = base();
    p.rho = 4;
    REQUIRE_THROWS_AS(validate_params(p), BadRange);

    p = base();
    p.z = 2;
    REQUIRE_THROWS_AS(validate_params(p), BadRange);

    p = base();
    p.user_cache_files = Rational(6);
    REQUIRE_THROWS_AS(validate_params(p), BadRange);

    p = base();
    p.K = 0;
    REQUIRE_THROWS_AS(validate_params(p), BadRange);

    p = base();
    p.N = 3;  // K > N breaks worst-case demands
    REQUIRE_THROWS_AS(validate_params(p), BadRange);
    REQUIRE_NOTHROW(validate_params(p, false));
}

TEST_CASE("validate_params rejects storage that cannot hold the library") {
    auto p = base();
    p.server_storage_files = Rational(1);
    p.server_storage_given = true;
    // M_U + rho * M_S = 5/4 + 2 = 13/4 < 5
    REQUIRE_THROWS_AS(validate_params(p), InfeasibleStorage);

    p.server_storage_files = Rational(15, 8);  // 5/4 + 15/4 = 5 exactly
    REQUIRE_NOTHROW(validate_params(p));
}

TEST_CASE("memory_share_split brackets fractional t") {
    auto s = memory_share_split(Rational(4, 5), 4);
    REQUIRE(s.t_lo == 0);
    REQUIRE(s.t_hi == 1);
    REQUIRE(s.lambda == Rational(1, 5));

    auto i = memory_share_split(Rational(2), 4);
    REQUIRE(i.t_lo == 2);
    REQUIRE(i.t_hi == 2);
    REQUIRE(i.lambda == Rational(1));

    REQUIRE_THROWS_AS(memory_share_split(Rational(-1, 2), 4), BadRange);
    REQUIRE_THROWS_AS(memory_share_split(Rational(5), 4), BadRange);
}

TEST_CASE("padding unit divides all slicing denominators") {
    auto p = validate_params(base());
    // lcm of C(4,1)*2 = 8, den(1/4) = 4, den(3/8) = 8
    REQUIRE(padding_unit_bytes(p) == 8);

    SystemParams raw = base();
    REQUIRE_THROWS_AS(padding_unit_bytes(raw), BadRange);
}

TEST_CASE("make_library pads every file to a common multiple of the unit") {
    std::vector<std::vector<std::uint8_t>> raw = {
        {1, 2, 3}, {4, 5, 6, 7, 8, 9, 10, 11, 12}, {}};
    auto lib = make_library(raw, 8);
    REQUIRE(lib.files.size() == 3);
    for (auto& f : lib.files) REQUIRE(f.size() == 16);
    REQUIRE(lib.original_bytes == std::vector<std::size_t>{3, 9, 0});
    REQUIRE(lib.files[0][0] == 1);
    REQUIRE(lib.files[0][3] == 0);  // padding is zero
    REQUIRE(lib.file_size_bits() == 128);

    auto empty = make_library({{}, {}}, 8);
    REQUIRE(empty.files[0].size() == 8);  // at least one unit

    REQUIRE_THROWS_AS(make_library(raw, 0), BadRange);
}

TEST_CASE("worst_case_demands assigns distinct files to the first K users") {
    auto d = worst_case_demands(4);
    REQUIRE(d.d == std::vector<int>{1, 2, 3, 4});
}
