#pragma once

#include <cstdint>
#include <string>

#include "mscache/errors.hpp"

namespace mscache {

// Exact rational number on 64-bit numerator/denominator, always reduced,
// denominator positive. Intermediates use 128-bit arithmetic; a result whose
// reduced form does not fit in 64 bits raises Overflow.
struct Rational {
    long long num = 0;
    long long den = 1;

    Rational() = default;
    Rational(long long n) : num(n), den(1) {} // NOLINT: implicit by design
    Rational(long long n, long long d) { *this = reduced(n, d); }

    static Rational reduced(__int128 n, __int128 d) {
        if (d == 0) throw BadRange("rational: zero denominator");
        if (d < 0) {
            n = -n;
            d = -d;
        }
        __int128 a = n < 0 ? -n : n;
        __int128 b = d;
        while (b != 0) {
            __int128 r = a % b;
            a = b;
            b = r;
        }
        if (a > 1) {
            n /= a;
            d /= a;
        }
        constexpr __int128 lo = static_cast<__int128>(INT64_MIN);
        constexpr __int128 hi = static_cast<__int128>(INT64_MAX);
        if (n < lo || n > hi || d > hi) throw Overflow("rational: value exceeds 64-bit range");
        Rational r;
        r.num = static_cast<long long>(n);
        r.den = static_cast<long long>(d);
        return r;
    }

    bool is_integer() const { return den == 1; }
    bool is_zero() const { return num == 0; }

    // Floor division, exact for negatives as well.
    long long floor() const {
        long long q = num / den;
        if (num % den != 0 && num < 0) --q;
        return q;
    }
    long long ceil() const {
        long long q = num / den;
        if (num % den != 0 && num > 0) ++q;
        return q;
    }

    double to_double() const { return static_cast<double>(num) / static_cast<double>(den); }

    std::string str() const {
        if (den == 1) return std::to_string(num);
        return std::to_string(num) + "/" + std::to_string(den);
    }

    friend Rational operator+(const Rational& a, const Rational& b) {
        return reduced(static_cast<__int128>(a.num) * b.den + static_cast<__int128>(b.num) * a.den,
                       static_cast<__int128>(a.den) * b.den);
    }
    friend Rational operator-(const Rational& a, const Rational& b) {
        return reduced(static_cast<__int128>(a.num) * b.den - static_cast<__int128>(b.num) * a.den,
                       static_cast<__int128>(a.den) * b.den);
    }
    friend Rational operator*(const Rational& a, const Rational& b) {
        return reduced(static_cast<__int128>(a.num) * b.num, static_cast<__int128>(a.den) * b.den);
    }
    friend Rational operator/(const Rational& a, const Rational& b) {
        if (b.num == 0) throw BadRange("rational: division by zero");
        return reduced(static_cast<__int128>(a.num) * b.den, static_cast<__int128>(a.den) * b.num);
    }
    Rational operator-() const {
        Rational r;
        r.num = -num;
        r.den = den;
        return r;
    }
    Rational& operator+=(const Rational& b) { return *this = *this + b; }
    Rational& operator-=(const Rational& b) { return *this = *this - b; }
    Rational& operator*=(const Rational& b) { return *this = *this * b; }
    Rational& operator/=(const Rational& b) { return *this = *this / b; }

    friend bool operator==(const Rational& a, const Rational& b) {
        return a.num == b.num && a.den == b.den;
    }
    friend bool operator!=(const Rational& a, const Rational& b) { return !(a == b); }
    friend bool operator<(const Rational& a, const Rational& b) {
        return static_cast<__int128>(a.num) * b.den < static_cast<__int128>(b.num) * a.den;
    }
    friend bool operator>(const Rational& a, const Rational& b) { return b < a; }
    friend bool operator<=(const Rational& a, const Rational& b) { return !(b < a); }
    friend bool operator>=(const Rational& a, const Rational& b) { return !(a < b); }
};

// Nonnegative-exponent power with exact reduction at each step.
inline Rational rational_pow(Rational base, int exp) {
    if (exp < 0) {
        if (base.num == 0) throw BadRange("rational_pow: zero to negative power");
        return rational_pow(Rational(base.den, base.num), -exp);
    }
    Rational out(1);
    while (exp > 0) {
        if (exp & 1) out *= base;
        base = (exp > 1) ? base * base : base;
        exp >>= 1;
    }
    return out;
}

// Parses "a", "a/b", or a terminating decimal such as "1.25" into an exact
// rational. Raises BadRange on malformed input, Overflow when out of range.
inline Rational parse_rational(const std::string& text) {
    auto fail = [&]() -> Rational { throw BadRange("rational: cannot parse '" + text + "'"); };
    std::size_t start = text.find_first_not_of(" \t");
    std::size_t stop = text.find_last_not_of(" \t");
    if (start == std::string::npos) return fail();
    std::string s = text.substr(start, stop - start + 1);

    bool neg = false;
    std::size_t i = 0;
    if (s[i] == '+' || s[i] == '-') {
        neg = (s[i] == '-');
        ++i;
    }
    auto digits = [&](std::size_t& pos) -> __int128 {
        if (pos >= s.size() || s[pos] < '0' || s[pos] > '9') fail();
        __int128 v = 0;
        while (pos < s.size() && s[pos] >= '0' && s[pos] <= '9') {
            v = v * 10 + (s[pos] - '0');
            if (v > static_cast<__int128>(INT64_MAX)) throw Overflow("rational: literal too large");
            ++pos;
        }
        return v;
    };
    __int128 whole = digits(i);
    __int128 n = whole;
    __int128 d = 1;
    if (i < s.size() && s[i] == '/') {
        ++i;
        d = digits(i);
    } else if (i < s.size() && s[i] == '.') {
        ++i;
        std::size_t before = i;
        __int128 frac = digits(i);
        for (std::size_t k = 0; k < i - before; ++k) {
            d *= 10;
            if (d > static_cast<__int128>(INT64_MAX)) throw Overflow("rational: literal too large");
        }
        n = whole * d + frac;
    }
    if (i != s.size()) fail();
    return Rational::reduced(neg ? -n : n, d);
}

} // namespace mscache
