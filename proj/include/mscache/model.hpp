#pragma once

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <vector>

#include "mscache/combinatorics.hpp"
#include "mscache/errors.hpp"
#include "mscache/rational.hpp"

namespace mscache {

// All scalar problem parameters plus derived quantities. Immutable once
// validated; validate_params returns a populated copy.
struct SystemParams {
    int K = 0;    // users
    int N = 0;    // files
    int P = 0;    // servers
    int rho = 0;  // servers per user
    int z = 0;    // storage redundancy level, 0 <= z <= rho - 1

    long long file_size_bits = 0;    // F, set once a library is built

    Rational user_cache_files;       // M_U in files
    Rational server_storage_files;   // M_S in files
    bool server_storage_given = false;

    // Derived by validate_params.
    Rational t;         // K * M_U / N
    Rational alpha;     // rho / P
    Rational alpha_hat; // (rho - z) / P
    bool validated = false;
};

// Checks feasibility and fills the derived fields. M_S defaults to
// N / (rho - z), the coded-placement value that meets server capacity with
// equality. Idempotent on already-validated values. worst_case demands need
// K distinct files, hence K <= N in that mode.
[[nodiscard]] inline SystemParams validate_params(SystemParams p, bool worst_case = true) {
    if (p.validated) return p;
    if (p.K < 1 || p.N < 1 || p.P < 1) throw BadRange("params: K, N, P must be positive");
    if (p.rho < 1 || p.rho > p.P) throw BadRange("params: need 1 <= rho <= P");
    if (p.z < 0 || p.z >= p.rho) throw BadRange("params: need 0 <= z <= rho - 1");
    if (p.user_cache_files < Rational(0) || p.user_cache_files > Rational(p.N))
        throw BadRange("params: need 0 <= M_U <= N");
    if (worst_case && p.K > p.N) throw BadRange("params: worst-case demands need K <= N");

    p.t = Rational(p.K) * p.user_cache_files / Rational(p.N);
    p.alpha = Rational(p.rho, p.P);
    p.alpha_hat = Rational(p.rho - p.z, p.P);
    if (!p.server_storage_given) p.server_storage_files = Rational(p.N, p.rho - p.z);
    if (p.user_cache_files + Rational(p.rho) * p.server_storage_files < Rational(p.N))
        throw InfeasibleStorage("params: M_U + rho * M_S < N cannot hold the library");
    p.validated = true;
    return p;
}

// Memory sharing for a fractional caching parameter: lambda weights the
// floor(t) scheme, 1 - lambda the ceil(t) scheme, and every latency combines
// with the same weights.
struct MemorySplit {
    int t_lo = 0;
    int t_hi = 0;
    Rational lambda; // weight of the t_lo scheme
};

inline MemorySplit memory_share_split(const Rational& t_real, int K) {
    if (t_real < Rational(0) || t_real > Rational(K))
        throw BadRange("memory_share_split: t outside [0, K]");
    MemorySplit s;
    s.t_lo = static_cast<int>(t_real.floor());
    if (t_real.is_integer()) {
        s.t_hi = s.t_lo;
        s.lambda = Rational(1);
    } else {
        s.t_hi = s.t_lo + 1;
        s.lambda = Rational(s.t_hi) - t_real;
    }
    return s;
}

// Library of N equal-length padded files; original lengths kept for
// unpadding after reconstruction.
struct FileLibrary {
    std::vector<std::vector<std::uint8_t>> files;
    std::vector<std::size_t> original_bytes;

    long long file_size_bits() const {
        return files.empty() ? 0 : static_cast<long long>(files[0].size()) * 8;
    }
};

// Byte granularity that makes every scheme for these parameters slice files
// evenly: both bracketing coded schemes (segment count times code dimension)
// and the minimum-storage split (cached prefix, rho-way coded remainder).
inline std::size_t padding_unit_bytes(const SystemParams& p) {
    if (!p.validated) throw BadRange("padding_unit_bytes: params not validated");
    auto lcm_ll = [](long long a, long long b) { return std::lcm(a, b); };
    MemorySplit split = memory_share_split(p.t, p.K);
    long long unit = 1;
    for (int ti : {split.t_lo, split.t_hi})
        unit = lcm_ll(unit, binom(p.K, ti) * (p.rho - p.z));
    Rational prefix = p.user_cache_files / Rational(p.N);
    unit = lcm_ll(unit, prefix.den);
    Rational rem_piece = (Rational(p.N) - p.user_cache_files) / Rational(static_cast<long long>(p.N) * p.rho);
    unit = lcm_ll(unit, rem_piece.den);
    return static_cast<std::size_t>(unit);
}

// Zero-pads all files to a common multiple of unit_bytes.
inline FileLibrary make_library(std::vector<std::vector<std::uint8_t>> raw, std::size_t unit_bytes) {
    if (unit_bytes == 0) throw BadRange("make_library: zero padding unit");
    FileLibrary lib;
    std::size_t longest = 0;
    for (const auto& f : raw) longest = std::max(longest, f.size());
    std::size_t padded = ((longest + unit_bytes - 1) / unit_bytes) * unit_bytes;
    if (padded == 0) padded = unit_bytes;
    lib.original_bytes.reserve(raw.size());
    for (auto& f : raw) {
        lib.original_bytes.push_back(f.size());
        f.resize(padded, 0);
        lib.files.push_back(std::move(f));
    }
    return lib;
}

struct DemandVector {
    std::vector<int> d; // d[k-1] is the file requested by user k
};

// Worst case: all users request distinct files.
inline DemandVector worst_case_demands(int K) {
    DemandVector d;
    d.d.resize(static_cast<std::size_t>(K));
    std::iota(d.d.begin(), d.d.end(), 1);
    return d;
}

// Identifies segment W_{file, subset}: the part of a file cached exactly by
// the users in subset (|subset| = t).
struct SegmentId {
    int file = 0;
    std::vector<int> subset;
};

} // namespace mscache
