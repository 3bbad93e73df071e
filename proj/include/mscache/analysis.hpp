#pragma once

#include <cmath>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "mscache/combinatorics.hpp"
#include "mscache/errors.hpp"
#include "mscache/rational.hpp"

namespace mscache {

// R_p for a server connected to q_p users under an effective code rate
// rho_eff = rho - z: [C(K,t+1) - C(K-q_p,t+1)] / (rho_eff * C(K,t)).
inline Rational rate_per_server(int q_p, int K, int t, int rho_eff) {
    if (q_p < 0 || q_p > K) throw BadRange("rate_per_server: q_p outside [0, K]");
    if (rho_eff < 1) throw BadRange("rate_per_server: rho_eff must be positive");
    if (t < 0 || t > K) throw BadRange("rate_per_server: t outside [0, K]");
    long long count = binom(K, t + 1) - binom(K - q_p, t + 1);
    return Rational(count, static_cast<long long>(rho_eff) * binom(K, t));
}

// Total successive latency from a type vector g (g[i] = servers with load i):
// (1/alpha)(K-t)/(t+1) - (1/(rho_eff*C(K,t))) * sum_i g_i*C(K-i,t+1).
inline Rational successive_latency_closed_form(const std::vector<long long>& g, int K, int t,
                                               int rho_eff, const Rational& alpha) {
    if (t < 0 || t > K) throw BadRange("successive_latency_closed_form: t outside [0, K]");
    if (static_cast<int>(g.size()) != K + 1)
        throw InconsistentType("type vector must have K+1 entries");
    long long servers = 0, endpoints = 0;
    for (int i = 0; i <= K; ++i) {
        if (g[static_cast<std::size_t>(i)] < 0) throw InconsistentType("negative type count");
        servers += g[static_cast<std::size_t>(i)];
        endpoints += static_cast<long long>(i) * g[static_cast<std::size_t>(i)];
    }
    Rational p_implied = Rational(rho_eff) / alpha; // alpha = rho/P
    if (!p_implied.is_integer() || p_implied != Rational(servers))
        throw InconsistentType("sum of type counts differs from P");
    if (endpoints != static_cast<long long>(K) * rho_eff)
        throw InconsistentType("sum of i*g_i differs from K*rho");
    Rational total = (Rational(1) / alpha) * Rational(K - t, t + 1);
    Rational correction(0);
    for (int i = 0; i <= K; ++i)
        correction += Rational(g[static_cast<std::size_t>(i)]) * Rational(binom(K - i, t + 1));
    return total - correction / Rational(static_cast<long long>(rho_eff) * binom(K, t));
}

// P(server connects to exactly i of K users) under i.i.d. links: binomial.
inline Rational connection_prob(int i, int K, const Rational& alpha) {
    if (i < 0 || i > K) return Rational(0);
    return Rational(binom(K, i)) * rational_pow(alpha, i) * rational_pow(Rational(1) - alpha, K - i);
}

// E[T_sd] for an arbitrary load distribution w_0..w_K:
// (1/alpha)(K-t)/(t+1) - (1/(alpha*C(K,t))) * sum_i w_i*C(K-i,t+1).
inline Rational expected_latency_theorem1(const std::vector<Rational>& w, int K, int t,
                                          const Rational& alpha) {
    if (t < 0 || t > K) throw BadRange("expected_latency_theorem1: t outside [0, K]");
    if (static_cast<int>(w.size()) != K + 1)
        throw BadDistribution("weight vector must have K+1 entries");
    Rational sum(0);
    for (const auto& wi : w) {
        if (wi < Rational(0)) throw BadDistribution("weights must be nonnegative");
        sum += wi;
    }
    if (sum != Rational(1)) throw BadDistribution("weights must sum to 1");
    Rational total = (Rational(1) / alpha) * Rational(K - t, t + 1);
    Rational correction(0);
    for (int i = 0; i <= K; ++i)
        correction += w[static_cast<std::size_t>(i)] * Rational(binom(K - i, t + 1));
    return total - correction / (alpha * Rational(binom(K, t)));
}

// E[T_sd] under uniform random connectivity:
// ((K-t)/(t+1)) * (1-(1-alpha)^(t+1)) / alpha.
inline Rational expected_latency_corollary1(int K, int t, const Rational& alpha) {
    if (t < 0 || t > K) throw BadRange("expected_latency_corollary1: t outside [0, K]");
    Rational miss = Rational(1) - rational_pow(Rational(1) - alpha, t + 1);
    return Rational(K - t, t + 1) * miss / alpha;
}

// Moving one endpoint from the larger to the smaller load never decreases
// the binomial correction: C(n1,r)+C(n2,r) >= C(n1+1,r)+C(n2-1,r).
inline bool lemma1_check(int n1, int n2, int r) {
    if (r > n1 || n1 + 2 > n2) throw BadRange("lemma1_check: needs r <= n1 and n1+2 <= n2");
    return binom(n1, r) + binom(n2, r) >= binom(n1 + 1, r) + binom(n2 - 1, r);
}

struct AsymptoticState {
    int u = 0;
    double delta_prime = 0.0;
    double delta = 0.0;
    std::vector<double> beta; // beta[i], i = 0..t+1
    double l = 0.0;
};

// Large-P estimate of E[T_sd] with redundancy. beta_i is the fraction of
// servers covering i members of a group; the scan finds the tier u at which
// the per-group demand of (t+1)*alpha_hat*P transmissions is exhausted, a
// fractional delta of tier-(t+1-u) servers tops it up, and the estimated
// minimum cover size l yields (1/(rho-z)) * (K-t)/(t+1) * l.
inline std::pair<double, AsymptoticState> asymptotic_estimate(int K, int t, const Rational& alpha,
                                                              const Rational& alpha_hat, int P) {
    if (t < 0 || t > K) throw BadRange("asymptotic_estimate: t outside [0, K]");
    if (P < 1) throw BadRange("asymptotic_estimate: P must be positive");
    if (!(Rational(0) < alpha_hat && alpha_hat <= alpha && alpha <= Rational(1)))
        throw BadRange("asymptotic_estimate: needs 0 < alpha_hat <= alpha <= 1");
    const double a = alpha.to_double();
    const double ah = alpha_hat.to_double();
    const double slop = 1e-12;
    AsymptoticState st;
    st.beta.resize(static_cast<std::size_t>(t) + 2, 0.0);
    for (int i = 0; i <= t + 1; ++i)
        st.beta[static_cast<std::size_t>(i)] =
            static_cast<double>(binom(t + 1, i)) * std::pow(a, i) * std::pow(1.0 - a, t + 1 - i);
    int u = -1;
    double lhs = 0.0;
    std::string scan;
    for (int cand = 0; cand <= t; ++cand) {
        double v = (t + 1) * ah;
        for (int j = 0; j < cand; ++j) v -= (t + 1 - j) * st.beta[static_cast<std::size_t>(t + 1 - j)];
        double bound = (t + 1 - cand) * st.beta[static_cast<std::size_t>(t + 1 - cand)];
        scan += (cand ? "; " : "") + std::string("u=") + std::to_string(cand) + ": lhs=" +
                std::to_string(v) + ", bound=" + std::to_string(bound);
        if (v >= -slop && v <= bound + slop) {
            u = cand;
            lhs = v;
            break;
        }
    }
    if (u < 0) throw NoBracket("asymptotic_estimate: no u in [0, t] brackets (" + scan + ")");
    st.u = u;
    int m = (t + 1 + (t - u)) / (t + 1 - u); // ceil((t+1)/(t+1-u))
    st.delta_prime = static_cast<double>(P) * lhs / m;
    st.delta = st.delta_prime / (t + 1 - u);
    double covered = 0.0;
    for (int j = 0; j < u; ++j) covered += st.beta[static_cast<std::size_t>(t + 1 - j)];
    st.l = static_cast<double>(P) * covered + st.delta * m;
    double estimate = (1.0 / (ah * P)) * (static_cast<double>(K - t) / (t + 1)) * st.l;
    return {estimate, st};
}

// z = 0 converse: T_sd >= sum_p [C(K,t+1)-C(K-q_p,t+1)] / (rho*C(K,t)).
inline Rational lower_bound_z0(const std::vector<int>& q, int K, int t, int rho) {
    Rational total(0);
    for (int qp : q) total += rate_per_server(qp, K, t, rho);
    return total;
}

// Closed forms for the minimum-storage scheme, M_S = (N - M_U)/rho.
inline std::pair<Rational, Rational> min_storage_latencies(int K, int rho, const Rational& mu, int N) {
    Rational miss = Rational(1) - mu / Rational(N);
    return {Rational(K) * miss, Rational(K, rho) * miss};
}

// Balanced loads maximize T_sd at fixed total degree (Lemma 1), so the
// worst successive topology has every load at floor or ceil of K*rho/P.
inline Rational worst_successive_t_sd(int K, int t, int rho, int P) {
    long long total = static_cast<long long>(K) * rho;
    long long lo = total / P;
    long long hi_count = total - lo * P;
    std::vector<long long> g(static_cast<std::size_t>(K) + 1, 0);
    g[static_cast<std::size_t>(lo)] += P - hi_count;
    if (hi_count > 0) g[static_cast<std::size_t>(lo + 1)] += hi_count;
    return successive_latency_closed_form(g, K, t, rho, Rational(rho, P));
}

inline Rational best_successive_t_sd(int K, int t) { return Rational(K - t, t + 1); }

// Best parallel topology: loads as even as possible, T_pd set by the
// busiest server at q = ceil(K*rho/P).
inline Rational best_parallel_t_pd(int K, int t, int rho, int P) {
    long long total = static_cast<long long>(K) * rho;
    int q = static_cast<int>((total + P - 1) / P);
    return rate_per_server(q, K, t, rho);
}

// Worst parallel topology: the full group burden on one server's rate,
// (K-t)/((t+1)*rho).
inline Rational worst_parallel_t_pd(int K, int t, int rho) {
    return Rational(K - t, (t + 1)) / Rational(rho);
}

} // namespace mscache
