#pragma once

#include <array>
#include <cstdint>

#include "mscache/errors.hpp"

namespace mscache {

// GF(2^8) with reduction polynomial x^8 + x^4 + x^3 + x + 1 (0x11B).
// Addition is XOR; multiplication via log/antilog tables on generator 0x03.
namespace detail {

struct Gf256Tables {
    std::array<std::uint8_t, 512> exp{};
    std::array<int, 256> log{};

    Gf256Tables() {
        std::uint8_t v = 1;
        for (int i = 0; i < 255; ++i) {
            exp[static_cast<std::size_t>(i)] = v;
            log[v] = i;
            // multiply v by the generator 0x03: v*2 xor v, reduced mod 0x11B
            std::uint8_t twice = static_cast<std::uint8_t>((v << 1) ^ ((v & 0x80) ? 0x1B : 0x00));
            v = static_cast<std::uint8_t>(twice ^ v);
        }
        for (int i = 255; i < 512; ++i) exp[static_cast<std::size_t>(i)] = exp[static_cast<std::size_t>(i - 255)];
        log[0] = -1;
    }
};

inline const Gf256Tables& gf_tables() {
    static const Gf256Tables t;
    return t;
}

} // namespace detail

inline std::uint8_t gf_mul(std::uint8_t a, std::uint8_t b) {
    if (a == 0 || b == 0) return 0;
    const auto& t = detail::gf_tables();
    return t.exp[static_cast<std::size_t>(t.log[a] + t.log[b])];
}

inline std::uint8_t gf_inv(std::uint8_t a) {
    if (a == 0) throw BadRange("gf256: zero has no inverse");
    const auto& t = detail::gf_tables();
    return t.exp[static_cast<std::size_t>(255 - t.log[a])];
}

inline std::uint8_t gf_pow(std::uint8_t a, int e) {
    if (e == 0) return 1;
    if (a == 0) return 0;
    const auto& t = detail::gf_tables();
    long long le = (static_cast<long long>(t.log[a]) * e) % 255;
    if (le < 0) le += 255;
    return t.exp[static_cast<std::size_t>(le)];
}

} // namespace mscache
