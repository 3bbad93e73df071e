#pragma once

#include <algorithm>
#include <cstdint>
#include <cstdio>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "mscache/combinatorics.hpp"
#include "mscache/errors.hpp"
#include "mscache/model.hpp"
#include "mscache/placement.hpp"
#include "mscache/rational.hpp"
#include "mscache/topology.hpp"

namespace mscache {

enum class PlannerKind { successive_z0, successive_redundant, parallel, min_storage };
enum class CoverMode { exact, greedy };

inline const char* planner_name(PlannerKind k) {
    switch (k) {
        case PlannerKind::successive_z0: return "successive_z0";
        case PlannerKind::successive_redundant: return "successive_redundant";
        case PlannerKind::parallel: return "parallel";
        case PlannerKind::min_storage: return "min_storage";
    }
    return "?";
}

inline const char* cover_mode_name(CoverMode m) {
    return m == CoverMode::exact ? "exact" : "greedy";
}

// One multicast transmission: server XORs, over every user in served, that
// user's missing coded subsegment for this group. The payload is filled only
// when a plan is executed against placement state; planning is metadata-only.
struct Message {
    int server = 0;
    std::vector<int> group;
    std::vector<int> served;
    std::vector<std::uint8_t> payload;
};

struct TransmissionPlan {
    PlannerKind kind = PlannerKind::successive_z0;
    CoverMode cover_mode = CoverMode::exact; // greedy when any group fell back
    int K = 0, P = 0, t = 0, z = 0, code_dim = 0;
    Topology topology;
    std::vector<int> demands;
    std::vector<Message> messages; // groups in colex order, selection order inside
    std::vector<int> counts;       // messages per server
    Rational message_size_files;   // one message as a fraction of F
    bool stamped = false;          // closed-form latencies recorded at planning time
    Rational stamped_t_sd;
    Rational stamped_t_pd;
};

struct LatencyReport {
    std::vector<Rational> rates; // R_p, exact
    Rational t_sd;
    Rational t_pd;
    std::vector<int> message_counts;
};

namespace detail {

inline std::vector<int> cover_candidates(const Topology& top, const std::vector<int>& group) {
    std::vector<int> cands;
    for (int k : group) {
        const auto& z = top.server_sets[static_cast<std::size_t>(k - 1)];
        cands.insert(cands.end(), z.begin(), z.end());
    }
    std::sort(cands.begin(), cands.end());
    cands.erase(std::unique(cands.begin(), cands.end()), cands.end());
    return cands;
}

// Lex-least minimum cover for a single member: its first `need` servers.
inline std::vector<int> cover_single(const Topology& top, int k, int need) {
    const auto& z = top.server_sets[static_cast<std::size_t>(k - 1)];
    if (static_cast<int>(z.size()) < need) throw Uncoverable("min_cover: member lacks servers");
    return {z.begin(), z.begin() + need};
}

// Lex-least minimum cover for a pair. With c shared servers the minimum size
// is 2*need - min(c, need); a minimum cover is forced to take shared servers
// first, then the smallest exclusives on each side.
inline std::vector<int> cover_pair(const Topology& top, int a, int b, int need) {
    const auto& za = top.server_sets[static_cast<std::size_t>(a - 1)];
    const auto& zb = top.server_sets[static_cast<std::size_t>(b - 1)];
    std::vector<int> shared, only_a, only_b;
    std::set_intersection(za.begin(), za.end(), zb.begin(), zb.end(), std::back_inserter(shared));
    std::set_difference(za.begin(), za.end(), zb.begin(), zb.end(), std::back_inserter(only_a));
    std::set_difference(zb.begin(), zb.end(), za.begin(), za.end(), std::back_inserter(only_b));
    std::vector<int> out;
    if (static_cast<int>(shared.size()) >= need) {
        out.assign(shared.begin(), shared.begin() + need);
        return out;
    }
    int extra = need - static_cast<int>(shared.size());
    if (static_cast<int>(only_a.size()) < extra || static_cast<int>(only_b.size()) < extra)
        throw Uncoverable("min_cover: member lacks servers");
    out = shared;
    out.insert(out.end(), only_a.begin(), only_a.begin() + extra);
    out.insert(out.end(), only_b.begin(), only_b.begin() + extra);
    std::sort(out.begin(), out.end());
    return out;
}

struct CoverSearch {
    int need = 0;
    std::vector<int> cands;
    std::vector<unsigned> masks;           // member bitmask per candidate
    std::vector<std::vector<int>> suffix;  // suffix[i][m]: candidates at >= i serving m
    std::vector<int> deficit;
    std::vector<int> chosen;

    bool dfs(std::size_t idx, int slots) {
        bool done = true;
        for (std::size_t m = 0; m < deficit.size(); ++m) {
            if (deficit[m] > 0) {
                done = false;
                if (deficit[m] > slots || deficit[m] > suffix[idx][m]) return false;
            }
        }
        if (done) return true;
        if (slots == 0 || idx == cands.size()) return false;
        // include cands[idx] first: finds the lexicographically least cover
        std::vector<std::size_t> hit;
        for (std::size_t m = 0; m < deficit.size(); ++m)
            if ((masks[idx] >> m) & 1u) {
                if (deficit[m] > 0) {
                    --deficit[m];
                    hit.push_back(m);
                }
            }
        chosen.push_back(cands[idx]);
        if (dfs(idx + 1, slots - 1)) return true;
        chosen.pop_back();
        for (std::size_t m : hit) ++deficit[m];
        return dfs(idx + 1, slots);
    }
};

inline std::vector<int> cover_exact(const Topology& top, const std::vector<int>& group, int need,
                                    const std::vector<int>& cands) {
    if (group.size() == 1) return cover_single(top, group[0], need);
    if (group.size() == 2) return cover_pair(top, group[0], group[1], need);
    CoverSearch s;
    s.need = need;
    s.cands = cands;
    s.masks.resize(cands.size(), 0);
    for (std::size_t i = 0; i < cands.size(); ++i)
        for (std::size_t m = 0; m < group.size(); ++m)
            if (top.connected(cands[i], group[m])) s.masks[i] |= (1u << m);
    s.suffix.assign(cands.size() + 1, std::vector<int>(group.size(), 0));
    for (std::size_t i = cands.size(); i-- > 0;)
        for (std::size_t m = 0; m < group.size(); ++m)
            s.suffix[i][m] = s.suffix[i + 1][m] + (((s.masks[i] >> m) & 1u) ? 1 : 0);
    for (int size = need; size <= static_cast<int>(cands.size()); ++size) {
        s.deficit.assign(group.size(), need);
        s.chosen.clear();
        if (s.dfs(0, size)) {
            std::sort(s.chosen.begin(), s.chosen.end());
            return s.chosen;
        }
    }
    throw Uncoverable("min_cover: no exact cover exists");
}

inline std::vector<int> cover_greedy(const Topology& top, const std::vector<int>& group, int need,
                                     const std::vector<int>& cands) {
    std::vector<int> deficit(group.size(), need);
    std::vector<char> used(cands.size(), 0);
    std::vector<int> chosen;
    for (;;) {
        bool done = true;
        for (int d : deficit)
            if (d > 0) done = false;
        if (done) break;
        int best = -1;
        int best_cov = 0;
        for (std::size_t i = 0; i < cands.size(); ++i) {
            if (used[i]) continue;
            int cov = 0;
            for (std::size_t m = 0; m < group.size(); ++m)
                if (deficit[m] > 0 && top.connected(cands[i], group[m])) ++cov;
            if (cov > best_cov) { // strict: ties keep the lowest index
                best_cov = cov;
                best = static_cast<int>(i);
            }
        }
        if (best < 0) throw Uncoverable("min_cover: greedy exhausted candidates");
        used[static_cast<std::size_t>(best)] = 1;
        chosen.push_back(cands[static_cast<std::size_t>(best)]);
        for (std::size_t m = 0; m < group.size(); ++m)
            if (deficit[m] > 0 && top.connected(cands[static_cast<std::size_t>(best)], group[m])) --deficit[m];
    }
    std::sort(chosen.begin(), chosen.end());
    return chosen;
}

} // namespace detail

// Minimum server set giving every group member at least `need` selected
// servers it connects to. Exact mode returns the lexicographically least
// minimum cover; greedy picks max coverage with lowest-index ties.
inline std::vector<int> min_cover(const Topology& top, const std::vector<int>& group, int need,
                                  CoverMode mode) {
    if (need < 1) throw BadRange("min_cover: need must be positive");
    auto cands = detail::cover_candidates(top, group);
    for (int k : group)
        if (static_cast<int>(top.server_sets[static_cast<std::size_t>(k - 1)].size()) < need)
            throw Uncoverable("min_cover: member connected to fewer than need servers");
    return mode == CoverMode::exact ? detail::cover_exact(top, group, need, cands)
                                    : detail::cover_greedy(top, group, need, cands);
}

struct CoverSelection {
    std::vector<int> servers;
    CoverMode mode = CoverMode::exact;
};

// Exact search below the size guard (group size <= 6 and at most 20
// candidate servers), greedy above it.
inline CoverSelection min_cover_auto(const Topology& top, const std::vector<int>& group, int need) {
    auto cands = detail::cover_candidates(top, group);
    CoverSelection sel;
    if (group.size() <= 6 && cands.size() <= 20) {
        sel.mode = CoverMode::exact;
        sel.servers = min_cover(top, group, need, CoverMode::exact);
    } else {
        sel.mode = CoverMode::greedy;
        sel.servers = min_cover(top, group, need, CoverMode::greedy);
    }
    return sel;
}

namespace detail {

inline std::vector<int> intersect_sorted(const std::vector<int>& a, const std::vector<int>& b) {
    std::vector<int> out;
    std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
    return out;
}

inline void base_plan(TransmissionPlan& plan, const Topology& top, const DemandVector& d, int t, int z) {
    if (static_cast<int>(d.d.size()) != top.K) throw BadRange("plan: demand length differs from K");
    if (t < 0 || t > top.K) throw BadRange("plan: t outside [0, K]");
    if (z < 0 || z >= top.rho) throw BadRange("plan: z outside [0, rho - 1]");
    plan.K = top.K;
    plan.P = top.P;
    plan.t = t;
    plan.z = z;
    plan.code_dim = top.rho - z;
    plan.topology = top;
    plan.demands = d.d;
    plan.counts.assign(static_cast<std::size_t>(top.P), 0);
    plan.message_size_files = Rational(1, static_cast<long long>(top.rho - z) * binom(top.K, t));
}

} // namespace detail

// z = 0 successive delivery: for every (t+1)-group, every connected server
// transmits one XOR message over the whole intersection.
inline TransmissionPlan plan_successive_z0(const Topology& top, const DemandVector& d, int t) {
    TransmissionPlan plan;
    plan.kind = PlannerKind::successive_z0;
    detail::base_plan(plan, top, d, t, 0);
    for (const auto& group : subsets_colex(top.K, t + 1)) {
        for (int p = 1; p <= top.P; ++p) {
            auto served = detail::intersect_sorted(group, top.users_of[static_cast<std::size_t>(p - 1)]);
            if (served.empty()) continue;
            plan.messages.push_back({p, group, std::move(served), {}});
            ++plan.counts[static_cast<std::size_t>(p - 1)];
        }
    }
    return plan;
}

// z >= 1 successive delivery: only the servers of a minimum cover transmit,
// giving each member at least rho - z distinct coded subsegments.
inline TransmissionPlan plan_successive_redundant(const Topology& top, const DemandVector& d, int t,
                                                  int z, std::optional<CoverMode> force_mode = std::nullopt) {
    TransmissionPlan plan;
    plan.kind = PlannerKind::successive_redundant;
    detail::base_plan(plan, top, d, t, z);
    int need = top.rho - z;
    for (const auto& group : subsets_colex(top.K, t + 1)) {
        std::vector<int> cover;
        CoverMode used;
        if (force_mode) {
            used = *force_mode;
            cover = min_cover(top, group, need, used);
        } else {
            auto sel = min_cover_auto(top, group, need);
            used = sel.mode;
            cover = std::move(sel.servers);
        }
        if (used == CoverMode::greedy) plan.cover_mode = CoverMode::greedy;
        for (int p : cover) {
            auto served = detail::intersect_sorted(group, top.users_of[static_cast<std::size_t>(p - 1)]);
            plan.messages.push_back({p, group, std::move(served), {}});
            ++plan.counts[static_cast<std::size_t>(p - 1)];
        }
    }
    return plan;
}

// Parallel delivery: greedy balanced selection. Per group, servers are
// added one at a time; a server at the current global maximum message count
// is excluded while the counts are not flat, unless no alternative serves an
// unsatisfied member. Among the eligible, max unsatisfied coverage wins,
// ties to the lowest index. Latency is the maximum per-server rate.
inline TransmissionPlan plan_parallel(const Topology& top, const DemandVector& d, int t, int z) {
    TransmissionPlan plan;
    plan.kind = PlannerKind::parallel;
    detail::base_plan(plan, top, d, t, z);
    int need = top.rho - z;
    for (const auto& group : subsets_colex(top.K, t + 1)) {
        std::vector<int> deficit(group.size(), need);
        std::vector<char> used(static_cast<std::size_t>(top.P), 0);
        for (;;) {
            bool done = true;
            for (int v : deficit)
                if (v > 0) done = false;
            if (done) break;
            int mx = *std::max_element(plan.counts.begin(), plan.counts.end());
            int mn = *std::min_element(plan.counts.begin(), plan.counts.end());
            int best = -1, best_cov = 0;
            int fallback = -1, fallback_cov = 0;
            for (int p = 1; p <= top.P; ++p) {
                if (used[static_cast<std::size_t>(p - 1)]) continue;
                int cov = 0;
                for (std::size_t m = 0; m < group.size(); ++m)
                    if (deficit[m] > 0 && top.connected(p, group[m])) ++cov;
                if (cov == 0) continue;
                if (cov > fallback_cov) {
                    fallback_cov = cov;
                    fallback = p;
                }
                bool at_max = plan.counts[static_cast<std::size_t>(p - 1)] == mx && mn != mx;
                if (at_max) continue;
                if (cov > best_cov) {
                    best_cov = cov;
                    best = p;
                }
            }
            if (best < 0) best = fallback; // only at-max servers still serve the group
            if (best < 0) throw Uncoverable("plan_parallel: no server serves an unsatisfied member");
            used[static_cast<std::size_t>(best - 1)] = 1;
            auto served = detail::intersect_sorted(group, top.users_of[static_cast<std::size_t>(best - 1)]);
            for (std::size_t m = 0; m < group.size(); ++m)
                if (deficit[m] > 0 && top.connected(best, group[m])) --deficit[m];
            plan.messages.push_back({best, group, std::move(served), {}});
            ++plan.counts[static_cast<std::size_t>(best - 1)];
        }
    }
    return plan;
}

// Minimum-storage delivery, M_S = (N - M_U) / rho: servers unicast MDS
// shards of the uncached remainder, one per connected user. Latencies are
// stamped with the closed forms T_sd = K - t and T_pd = (K / rho)(1 - M_U/N).
inline TransmissionPlan plan_min_storage(const Topology& top, const DemandVector& d,
                                         const SystemParams& sp) {
    if (!sp.validated) throw BadRange("plan_min_storage: params not validated");
    TransmissionPlan plan;
    plan.kind = PlannerKind::min_storage;
    detail::base_plan(plan, top, d, plan.t, 0);
    plan.code_dim = top.rho;
    Rational miss = Rational(1) - sp.user_cache_files / Rational(sp.N); // 1 - M_U/N
    plan.message_size_files = miss / Rational(top.rho);
    for (int k = 1; k <= top.K; ++k)
        for (int p : top.server_sets[static_cast<std::size_t>(k - 1)]) {
            plan.messages.push_back({p, {k}, {k}, {}});
            ++plan.counts[static_cast<std::size_t>(p - 1)];
        }
    plan.stamped = true;
    plan.stamped_t_sd = Rational(top.K) * miss;
    plan.stamped_t_pd = Rational(top.K, top.rho) * miss;
    return plan;
}

inline LatencyReport latency_of(const TransmissionPlan& plan) {
    LatencyReport r;
    r.message_counts = plan.counts;
    r.rates.reserve(plan.counts.size());
    r.t_sd = Rational(0);
    r.t_pd = Rational(0);
    for (int c : plan.counts) {
        Rational rate = Rational(c) * plan.message_size_files;
        r.t_sd += rate;
        if (rate > r.t_pd) r.t_pd = rate;
        r.rates.push_back(rate);
    }
    if (plan.stamped) {
        r.t_sd = plan.stamped_t_sd;
        r.t_pd = plan.stamped_t_pd;
    }
    return r;
}

struct UserVerdict {
    int user = 0;
    bool ok = true;
    std::string detail;
};

namespace detail {

inline std::string subset_str(const std::vector<int>& s) {
    std::string out = "{";
    for (std::size_t i = 0; i < s.size(); ++i) {
        if (i) out += ",";
        out += std::to_string(s[i]);
    }
    return out + "}";
}

// Single generator column applied to a segment: the coded subsegment C^l.
inline std::vector<std::uint8_t> encode_column(const std::vector<std::uint8_t>& segment,
                                               const GeneratorMatrix& g, int col) {
    if (segment.size() % static_cast<std::size_t>(g.k) != 0)
        throw BadLength("encode_column: segment length not divisible by k");
    std::size_t sub = segment.size() / static_cast<std::size_t>(g.k);
    std::vector<std::uint8_t> out(sub, 0);
    for (int m = 0; m < g.k; ++m) {
        std::uint8_t c = g.at(m, col);
        if (c == 0) continue;
        const std::uint8_t* src = segment.data() + static_cast<std::size_t>(m) * sub;
        for (std::size_t b = 0; b < sub; ++b) out[b] ^= gf_mul(c, src[b]);
    }
    return out;
}

// Broadcast payload of one coded-scheme message.
inline std::vector<std::uint8_t> coded_message_payload(const Message& msg, const CodedPlacement& pl,
                                                       const std::vector<int>& demands) {
    std::vector<std::uint8_t> payload;
    for (int k : msg.served) {
        std::vector<int> rest;
        for (int j : msg.group)
            if (j != k) rest.push_back(j);
        long long rank = colex_rank(rest);
        const auto& shard = pl.servers[static_cast<std::size_t>(msg.server - 1)]
                                .shards[static_cast<std::size_t>(demands[static_cast<std::size_t>(k - 1)] - 1)]
                                       [static_cast<std::size_t>(rank)];
        if (payload.empty()) payload = shard;
        else
            for (std::size_t b = 0; b < payload.size(); ++b) payload[b] ^= shard[b];
    }
    return payload;
}

} // namespace detail

// Runs the delivery phase of a coded-scheme plan and checks that every user
// reconstructs its file bit-exactly: strip known subsegments from each
// relevant message (recomputing coded shares from cached plaintext), collect
// distinct shares, MDS-decode, assemble, compare. corrupt_message_index >= 0
// flips one byte of that message for fault-injection tests.
inline std::vector<UserVerdict> execute_and_verify(const TransmissionPlan& plan,
                                                   const CodedPlacement& pl, const FileLibrary& lib,
                                                   int corrupt_message_index = -1) {
    std::vector<std::vector<std::uint8_t>> payloads;
    payloads.reserve(plan.messages.size());
    for (const auto& m : plan.messages) payloads.push_back(detail::coded_message_payload(m, pl, plan.demands));
    if (corrupt_message_index >= 0 && corrupt_message_index < static_cast<int>(payloads.size()) &&
        !payloads[static_cast<std::size_t>(corrupt_message_index)].empty())
        payloads[static_cast<std::size_t>(corrupt_message_index)][0] ^= 0x01;

    // group rank -> message indices
    std::map<long long, std::vector<std::size_t>> by_group;
    for (std::size_t i = 0; i < plan.messages.size(); ++i)
        by_group[colex_rank(plan.messages[i].group)].push_back(i);

    auto subsets = subsets_colex(plan.K, plan.t);
    std::vector<UserVerdict> verdicts;
    for (int k = 1; k <= plan.K; ++k) {
        UserVerdict v;
        v.user = k;
        int f = plan.demands[static_cast<std::size_t>(k - 1)];
        std::vector<std::uint8_t> assembled;
        for (std::size_t r = 0; r < subsets.size() && v.ok; ++r) {
            const auto& A = subsets[r];
            if (std::binary_search(A.begin(), A.end(), k)) {
                const auto& seg = pl.caches[static_cast<std::size_t>(k - 1)].segments[static_cast<std::size_t>(f - 1)][r];
                assembled.insert(assembled.end(), seg.begin(), seg.end());
                continue;
            }
            std::vector<int> H = A;
            H.push_back(k);
            std::sort(H.begin(), H.end());
            std::vector<Share> shares;
            auto it = by_group.find(colex_rank(H));
            if (it != by_group.end()) {
                for (std::size_t mi : it->second) {
                    const Message& msg = plan.messages[mi];
                    if (!std::binary_search(msg.served.begin(), msg.served.end(), k)) continue;
                    std::vector<std::uint8_t> share = payloads[mi];
                    for (int j : msg.served) {
                        if (j == k) continue;
                        std::vector<int> rest;
                        for (int u : msg.group)
                            if (u != j) rest.push_back(u);
                        const auto& known = pl.caches[static_cast<std::size_t>(k - 1)]
                                                .segments[static_cast<std::size_t>(plan.demands[static_cast<std::size_t>(j - 1)] - 1)]
                                                         [static_cast<std::size_t>(colex_rank(rest))];
                        auto coded = detail::encode_column(known, pl.g, msg.server - 1);
                        for (std::size_t b = 0; b < share.size(); ++b) share[b] ^= coded[b];
                    }
                    shares.push_back({msg.server, std::move(share)});
                }
            }
            std::vector<Share> distinct;
            for (auto& s : shares) {
                bool dup = false;
                for (const auto& d : distinct) dup = dup || d.index == s.index;
                if (!dup) distinct.push_back(std::move(s));
            }
            if (static_cast<int>(distinct.size()) < pl.g.k) {
                v.ok = false;
                v.detail = "user " + std::to_string(k) + ": segment (file " + std::to_string(f) +
                           ", subset " + detail::subset_str(A) + "): " + std::to_string(distinct.size()) +
                           " of " + std::to_string(pl.g.k) + " shares";
                break;
            }
            auto seg = decode_segment(distinct, pl.g);
            assembled.insert(assembled.end(), seg.begin(), seg.end());
        }
        if (v.ok && assembled != lib.files[static_cast<std::size_t>(f - 1)]) {
            v.ok = false;
            std::size_t seg_bytes = pl.segments.seg_bytes;
            std::size_t bad = 0;
            while (bad < assembled.size() && assembled[bad] == lib.files[static_cast<std::size_t>(f - 1)][bad]) ++bad;
            std::size_t rank = seg_bytes ? bad / seg_bytes : 0;
            v.detail = "user " + std::to_string(k) + ": segment (file " + std::to_string(f) + ", subset " +
                       detail::subset_str(subsets[rank]) + "): decoded bytes differ";
        }
        verdicts.push_back(std::move(v));
    }
    return verdicts;
}

// Minimum-storage counterpart: each user decodes the remainder of its file
// from the rho unicast shards of its connected servers.
inline std::vector<UserVerdict> execute_and_verify(const TransmissionPlan& plan,
                                                   const MinStoragePlacement& pl, const FileLibrary& lib,
                                                   int corrupt_message_index = -1) {
    std::vector<UserVerdict> verdicts;
    for (int k = 1; k <= plan.K; ++k) {
        UserVerdict v;
        v.user = k;
        int f = plan.demands[static_cast<std::size_t>(k - 1)];
        std::vector<Share> shares;
        for (std::size_t i = 0; i < plan.messages.size(); ++i) {
            const Message& msg = plan.messages[i];
            if (msg.group.size() != 1 || msg.group[0] != k) continue;
            std::vector<std::uint8_t> payload =
                pl.shards[static_cast<std::size_t>(msg.server - 1)][static_cast<std::size_t>(f - 1)];
            if (static_cast<int>(i) == corrupt_message_index && !payload.empty()) payload[0] ^= 0x01;
            shares.push_back({msg.server, std::move(payload)});
        }
        std::vector<std::uint8_t> assembled = pl.prefix[static_cast<std::size_t>(f - 1)];
        try {
            auto rest = decode_segment(shares, pl.g);
            assembled.insert(assembled.end(), rest.begin(), rest.end());
        } catch (const Error& e) {
            v.ok = false;
            v.detail = "user " + std::to_string(k) + ": file " + std::to_string(f) + ": " + e.what();
        }
        if (v.ok && assembled != lib.files[static_cast<std::size_t>(f - 1)]) {
            v.ok = false;
            v.detail = "user " + std::to_string(k) + ": file " + std::to_string(f) + ": remainder bytes differ";
        }
        verdicts.push_back(std::move(v));
    }
    return verdicts;
}

// Raises DecodeMismatch naming (user, segment) for the first failing verdict.
inline void require_all_pass(const std::vector<UserVerdict>& verdicts) {
    for (const auto& v : verdicts)
        if (!v.ok) throw DecodeMismatch(v.detail);
}

namespace detail {

inline std::uint64_t fnv1a64(const std::vector<std::uint8_t>& bytes) {
    std::uint64_t h = 1469598103934665603ULL;
    for (std::uint8_t b : bytes) {
        h ^= b;
        h *= 1099511628211ULL;
    }
    return h;
}

inline std::string hex64(std::uint64_t v) {
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
    return buf;
}

} // namespace detail

// Metadata export for golden-file tests. Payload bytes are summarized by a
// 64-bit FNV-1a hash when placement state is supplied.
inline nlohmann::json plan_to_json(const TransmissionPlan& plan, const CodedPlacement* pl = nullptr) {
    nlohmann::json j;
    j["planner"] = planner_name(plan.kind);
    j["cover_mode"] = cover_mode_name(plan.cover_mode);
    j["K"] = plan.K;
    j["P"] = plan.P;
    j["t"] = plan.t;
    j["z"] = plan.z;
    j["code_dim"] = plan.code_dim;
    j["message_size_files"] = plan.message_size_files.str();
    j["demands"] = plan.demands;
    j["topology"] = topology_to_json(plan.topology);
    nlohmann::json msgs = nlohmann::json::array();
    for (const auto& m : plan.messages) {
        nlohmann::json e;
        e["server"] = m.server;
        e["group"] = m.group;
        e["served"] = m.served;
        if (pl) e["payload_hash"] = detail::hex64(detail::fnv1a64(detail::coded_message_payload(m, *pl, plan.demands)));
        msgs.push_back(std::move(e));
    }
    j["messages"] = std::move(msgs);
    return j;
}

} // namespace mscache
