#pragma once

#include <algorithm>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "json.hpp"

#include "mscache/combinatorics.hpp"
#include "mscache/errors.hpp"
#include "mscache/model.hpp"
#include "mscache/rng.hpp"

namespace mscache {

// User-server association for one delivery round: Z_k per user, plus the
// derived incidence view, load vector q and type vector g.
struct Topology {
    int P = 0;
    int K = 0;
    int rho = 0;
    std::vector<std::vector<int>> server_sets; // Z_k, sorted, 1-based servers
    std::vector<std::vector<int>> users_of;    // K_p per server, sorted users

    bool connected(int p, int k) const {
        const auto& z = server_sets[static_cast<std::size_t>(k - 1)];
        return std::binary_search(z.begin(), z.end(), p);
    }

    std::vector<int> loads() const {
        std::vector<int> q(static_cast<std::size_t>(P), 0);
        for (int p = 1; p <= P; ++p) q[static_cast<std::size_t>(p - 1)] = static_cast<int>(users_of[static_cast<std::size_t>(p - 1)].size());
        return q;
    }

    // g_i = number of servers with load i, i = 0..K.
    std::vector<int> type_vector() const {
        std::vector<int> g(static_cast<std::size_t>(K + 1), 0);
        for (int v : loads()) ++g[static_cast<std::size_t>(v)];
        return g;
    }
};

inline Topology make_topology(int P, std::vector<std::vector<int>> server_sets) {
    Topology t;
    t.P = P;
    t.K = static_cast<int>(server_sets.size());
    if (t.K < 1) throw BadRange("topology: no users");
    t.rho = static_cast<int>(server_sets[0].size());
    for (auto& z : server_sets) {
        std::sort(z.begin(), z.end());
        if (static_cast<int>(z.size()) != t.rho) throw BadRange("topology: unequal set sizes");
        for (std::size_t i = 0; i < z.size(); ++i) {
            if (z[i] < 1 || z[i] > P) throw BadRange("topology: server index out of [1, P]");
            if (i > 0 && z[i] == z[i - 1]) throw BadRange("topology: duplicate server in Z_k");
        }
    }
    t.server_sets = std::move(server_sets);
    t.users_of.assign(static_cast<std::size_t>(P), {});
    for (int k = 1; k <= t.K; ++k)
        for (int p : t.server_sets[static_cast<std::size_t>(k - 1)])
            t.users_of[static_cast<std::size_t>(p - 1)].push_back(k);
    return t;
}

// Each Z_k uniform over all C(P, rho) subsets, independent across users.
// trial_key identifies the trial substream; user k draws from its own
// derived substream, so sampling is order-independent.
inline Topology sample_topology(const SystemParams& params, std::uint64_t trial_key) {
    std::vector<std::vector<int>> sets;
    sets.reserve(static_cast<std::size_t>(params.K));
    for (int k = 1; k <= params.K; ++k) {
        Rng r(derive_key(trial_key, static_cast<std::uint64_t>(k)));
        sets.push_back(sample_subset(params.P, params.rho, r));
    }
    return make_topology(params.P, std::move(sets));
}

// Exhaustive iteration over all C(P, rho)^K associations in canonical order:
// an odometer over per-user colex subset ranks with user 1 most significant.
class TopologyEnumerator {
  public:
    TopologyEnumerator(int P, int rho, int K) : P_(P), K_(K) {
        subsets_ = subsets_colex(P, rho);
        long long per = static_cast<long long>(subsets_.size());
        if (per == 0) throw BadRange("enumerate: rho > P");
        count_ = 1;
        for (int k = 0; k < K; ++k) {
            if (count_ > 10000000 / per) {
                count_ = -1;
                break;
            }
            count_ *= per;
        }
        if (count_ < 0 || count_ > 10000000)
            throw TooLarge("enumerate: C(P, rho)^K exceeds the 10^7 guard");
        odo_.assign(static_cast<std::size_t>(K), 0);
    }

    long long count() const { return count_; }

    bool next(Topology& out) {
        if (done_) return false;
        std::vector<std::vector<int>> sets;
        sets.reserve(static_cast<std::size_t>(K_));
        for (int idx : odo_) sets.push_back(subsets_[static_cast<std::size_t>(idx)]);
        out = make_topology(P_, std::move(sets));
        // increment, last user fastest
        int pos = K_ - 1;
        while (pos >= 0) {
            if (++odo_[static_cast<std::size_t>(pos)] < static_cast<int>(subsets_.size())) break;
            odo_[static_cast<std::size_t>(pos)] = 0;
            --pos;
        }
        if (pos < 0) done_ = true;
        return true;
    }

  private:
    int P_;
    int K_;
    std::vector<std::vector<int>> subsets_;
    std::vector<int> odo_;
    long long count_ = 0;
    bool done_ = false;
};

namespace detail {

// Existence of a 0/1 matrix with m rows summing to rho and column sums d
// (Gale-Ryser with equal row sums): every d_p <= m, sum d = m * rho, and
// sum_p min(d_p, s) >= s * rho for every s in [1, m].
inline bool degree_sequence_feasible(const std::vector<int>& d, int m, int rho) {
    long long total = 0;
    for (int v : d) {
        if (v < 0 || v > m) return false;
        total += v;
    }
    if (total != static_cast<long long>(m) * rho) return false;
    for (int s = 1; s <= m; ++s) {
        long long acc = 0;
        for (int v : d) acc += std::min(v, s);
        if (acc < static_cast<long long>(s) * rho) return false;
    }
    return true;
}

// Can partial loads c (after some users assigned) still finish at the most
// balanced load multiset with m users left?
inline bool balanced_completion_feasible(const std::vector<int>& c, int m, int K, int rho, int P) {
    int lo = (K * rho) / P;
    int hi = (K * rho + P - 1) / P;
    int f_hi = K * rho - lo * P; // servers ending at hi (0 when P divides)
    int forced = 0;              // loads above lo can only end at hi
    for (int p = 0; p < P; ++p) {
        if (c[static_cast<std::size_t>(p)] > hi) return false;
        if (c[static_cast<std::size_t>(p)] > lo) ++forced;
    }
    if (forced > f_hi) return false;
    // Assign the remaining hi targets to the largest loads not above lo;
    // that choice spreads deficits most evenly.
    std::vector<int> sorted(c);
    std::sort(sorted.begin(), sorted.end(), std::greater<int>());
    std::vector<int> deficit;
    deficit.reserve(static_cast<std::size_t>(P));
    int hi_left = f_hi;
    for (int v : sorted) {
        int target;
        if (v > lo) {
            target = hi;
            --hi_left;
        } else if (hi_left > 0) {
            target = hi;
            --hi_left;
        } else {
            target = lo;
        }
        deficit.push_back(target - v);
    }
    return degree_sequence_feasible(deficit, m, rho);
}

} // namespace detail

// All users on servers {1..rho}: the best successive topology and at the
// same time the worst parallel one.
inline Topology fixed_topology_best_successive(const SystemParams& params) {
    std::vector<int> z(static_cast<std::size_t>(params.rho));
    std::iota(z.begin(), z.end(), 1);
    return make_topology(params.P, std::vector<std::vector<int>>(static_cast<std::size_t>(params.K), z));
}

inline Topology fixed_topology_worst_parallel(const SystemParams& params) {
    return fixed_topology_best_successive(params);
}

// Lexicographically least topology whose loads are as balanced as possible:
// greedy per user over subsets in lexicographic order, keeping completion
// feasible. Worst for successive delivery, best for parallel.
inline Topology fixed_topology_worst_successive(const SystemParams& params) {
    int P = params.P;
    int K = params.K;
    int rho = params.rho;
    std::vector<int> loads(static_cast<std::size_t>(P), 0);
    std::vector<std::vector<int>> sets;
    auto lex_subsets = [&]() {
        auto all = subsets_colex(P, rho);
        std::sort(all.begin(), all.end()); // lexicographic on sorted lists
        return all;
    }();
    for (int k = 1; k <= K; ++k) {
        bool placed = false;
        for (const auto& cand : lex_subsets) {
            for (int p : cand) ++loads[static_cast<std::size_t>(p - 1)];
            if (detail::balanced_completion_feasible(loads, K - k, K, rho, P)) {
                sets.push_back(cand);
                placed = true;
                break;
            }
            for (int p : cand) --loads[static_cast<std::size_t>(p - 1)];
        }
        if (!placed) throw Uncoverable("balanced topology: greedy completion failed");
    }
    return make_topology(P, std::move(sets));
}

inline Topology fixed_topology_best_parallel(const SystemParams& params) {
    return fixed_topology_worst_successive(params);
}

inline nlohmann::json topology_to_json(const Topology& t) {
    nlohmann::json j;
    j["server_sets"] = t.server_sets;
    return j;
}

inline Topology topology_from_json(const nlohmann::json& j, int P) {
    if (!j.contains("server_sets") || !j["server_sets"].is_array())
        throw BadRange("topology json: missing server_sets array");
    std::vector<std::vector<int>> sets;
    for (const auto& row : j["server_sets"]) sets.push_back(row.get<std::vector<int>>());
    return make_topology(P, std::move(sets));
}

} // namespace mscache
