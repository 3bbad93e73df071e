#pragma once

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <optional>
#include <ostream>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"

#include "mscache/analysis.hpp"
#include "mscache/delivery.hpp"
#include "mscache/errors.hpp"
#include "mscache/model.hpp"
#include "mscache/rng.hpp"
#include "mscache/topology.hpp"

namespace mscache {

enum class SweepParam { none, mu, ms };

struct SweepAxis {
    SweepParam what = SweepParam::none;
    std::vector<Rational> values;
};

struct ExperimentSpec {
    SystemParams params;
    PlannerKind planner = PlannerKind::successive_z0;
    long long trials = 1;
    std::uint64_t seed = 0;
    SweepAxis sweep;
    std::optional<Topology> fixed_topology; // pinned draw for exactness tests
};

// One integer-parameter scheme inside a memory-sharing mix.
struct SchemeInstance {
    PlannerKind kind = PlannerKind::successive_z0;
    int t = 0;
    int z = 0;
    Rational weight = Rational(1);
};

namespace detail {

// Bracketing z values with M_S-interpolation weights for a fractional
// server storage ms >= N/rho on the grid M_S(z) = N/(rho - z).
inline std::vector<std::pair<int, Rational>> z_bracket(const Rational& ms, int N, int rho) {
    Rational zr = Rational(rho) - Rational(N) / ms;
    if (zr.is_integer() && zr >= Rational(0) && zr <= Rational(rho - 1))
        return {{static_cast<int>(zr.num), Rational(1)}};
    if (zr >= Rational(rho - 1)) return {{rho - 1, Rational(1)}}; // ms >= N: cap
    long long z_lo = zr.floor();
    if (z_lo < 0) z_lo = 0;
    int lo = static_cast<int>(z_lo), hi = lo + 1;
    Rational m_lo = Rational(N, rho - lo), m_hi = Rational(N, rho - hi);
    Rational u_lo = (m_hi - ms) / (m_hi - m_lo);
    return {{lo, u_lo}, {hi, Rational(1) - u_lo}};
}

inline std::vector<std::pair<int, Rational>> t_parts(const SystemParams& sp) {
    MemorySplit split = memory_share_split(sp.t, sp.K);
    if (split.t_lo == split.t_hi || split.lambda == Rational(1)) return {{split.t_lo, Rational(1)}};
    if (split.lambda == Rational(0)) return {{split.t_hi, Rational(1)}};
    return {{split.t_lo, split.lambda}, {split.t_hi, Rational(1) - split.lambda}};
}

} // namespace detail

// Expands a parameter point into the integer-parameter schemes realizing it:
// fractional t splits by memory sharing; a given M_S off the coded grid
// either interpolates two redundancy levels (M_S >= N/rho) or mixes the
// minimum-storage scheme with coded z=0 (M_S < N/rho).
inline std::vector<SchemeInstance> resolve_schemes(const SystemParams& sp, PlannerKind planner) {
    if (!sp.validated) throw BadRange("resolve_schemes: params not validated");
    if (planner == PlannerKind::min_storage) return {{PlannerKind::min_storage, 0, 0, Rational(1)}};
    auto tps = detail::t_parts(sp);
    std::vector<std::pair<int, Rational>> zps;          // coded components
    Rational w_min(0);                                  // minimum-storage component
    if (!sp.server_storage_given) {
        zps = {{sp.z, Rational(1)}};
    } else {
        Rational grid_floor = Rational(sp.N, sp.rho);
        if (sp.server_storage_files < grid_floor) {
            // validate_params guarantees mu + rho*ms >= N, so mu > 0 here
            w_min = (Rational(sp.N) - Rational(sp.rho) * sp.server_storage_files) / sp.user_cache_files;
            zps = {{0, Rational(1) - w_min}};
        } else {
            zps = detail::z_bracket(sp.server_storage_files, sp.N, sp.rho);
        }
    }
    std::vector<SchemeInstance> out;
    if (w_min > Rational(0)) out.push_back({PlannerKind::min_storage, 0, 0, w_min});
    for (const auto& [z, wz] : zps) {
        if (wz == Rational(0)) continue;
        if (planner == PlannerKind::successive_z0 && z != 0)
            throw BadRange("resolve_schemes: successive_z0 requires z = 0");
        for (const auto& [t, wt] : tps) out.push_back({planner, t, z, wz * wt});
    }
    return out;
}

namespace detail {

inline std::pair<Rational, Rational> instance_latency(const SchemeInstance& inst, const Topology& top,
                                                      const DemandVector& d, const SystemParams& sp) {
    TransmissionPlan plan;
    switch (inst.kind) {
        case PlannerKind::min_storage:
            plan = plan_min_storage(top, d, sp);
            break;
        case PlannerKind::parallel:
            plan = plan_parallel(top, d, inst.t, inst.z);
            break;
        case PlannerKind::successive_z0:
        case PlannerKind::successive_redundant:
            plan = inst.z == 0 ? plan_successive_z0(top, d, inst.t)
                               : plan_successive_redundant(top, d, inst.t, inst.z);
            break;
    }
    LatencyReport lat = latency_of(plan);
    return {lat.t_sd, lat.t_pd};
}

} // namespace detail

struct ResultRow {
    std::string sweep_param = "none";
    std::string sweep_value; // empty when not sweeping
    std::string planner;
    long long trials = 0;
    std::uint64_t seed = 0;
    double mean_t_sd = 0.0;
    double stderr_t_sd = 0.0;
    double mean_t_pd = 0.0;
    double stderr_t_pd = 0.0;
    std::optional<double> analytic_corollary1;
    std::optional<double> analytic_asymptotic;
    std::optional<double> best_bound;  // T_sd bounds for successive, T_pd for parallel
    std::optional<double> worst_bound;
};

struct MonteCarloResult {
    std::vector<ResultRow> rows;
};

namespace detail {

inline std::pair<double, double> mean_stderr(const std::vector<double>& xs) {
    double mean = 0.0;
    for (double x : xs) mean += x;
    mean /= static_cast<double>(xs.size());
    if (xs.size() < 2) return {mean, 0.0};
    double ss = 0.0;
    for (double x : xs) ss += (x - mean) * (x - mean);
    double var = ss / static_cast<double>(xs.size() - 1);
    return {mean, std::sqrt(var / static_cast<double>(xs.size()))};
}

inline void fill_analytics(ResultRow& row, const SystemParams& sp, PlannerKind planner,
                           const std::vector<SchemeInstance>& instances) {
    if (planner == PlannerKind::min_storage) return;
    bool any_redundant = false, any_min = false;
    for (const auto& inst : instances) {
        if (inst.kind == PlannerKind::min_storage) any_min = true;
        else if (inst.z > 0) any_redundant = true;
    }
    bool successive = planner != PlannerKind::parallel;
    if (successive && !any_redundant) {
        Rational c1(0);
        for (const auto& inst : instances)
            c1 += inst.weight * (inst.kind == PlannerKind::min_storage
                                     ? Rational(sp.K) * (Rational(1) - sp.user_cache_files / Rational(sp.N))
                                     : expected_latency_corollary1(sp.K, inst.t, sp.alpha));
        row.analytic_corollary1 = c1.to_double();
    }
    if (successive && !any_min) {
        try {
            double est = 0.0;
            for (const auto& inst : instances) {
                Rational ah(sp.rho - inst.z, sp.P);
                est += inst.weight.to_double() * asymptotic_estimate(sp.K, inst.t, sp.alpha, ah, sp.P).first;
            }
            row.analytic_asymptotic = est;
        } catch (const Error&) {
            // the estimate is a companion column; leave it empty if the
            // pipeline has no bracketing tier here
        }
    }
    if (!any_min && !any_redundant) {
        Rational best(0), worst(0);
        for (const auto& inst : instances) {
            if (successive) {
                best += inst.weight * best_successive_t_sd(sp.K, inst.t);
                worst += inst.weight * worst_successive_t_sd(sp.K, inst.t, sp.rho, sp.P);
            } else {
                best += inst.weight * best_parallel_t_pd(sp.K, inst.t, sp.rho, sp.P);
                worst += inst.weight * worst_parallel_t_pd(sp.K, inst.t, sp.rho);
            }
        }
        row.best_bound = best.to_double();
        row.worst_bound = worst.to_double();
    }
}

inline std::string format_g10(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.10g", v);
    return buf;
}

inline ResultRow run_point(const ExperimentSpec& spec, const SystemParams& point,
                           const std::string& sweep_param, const std::string& sweep_value) {
    auto instances = resolve_schemes(point, spec.planner);
    DemandVector demands = worst_case_demands(point.K);
    std::vector<double> t_sds, t_pds;
    t_sds.reserve(static_cast<std::size_t>(spec.trials));
    t_pds.reserve(static_cast<std::size_t>(spec.trials));
    for (long long trial = 0; trial < spec.trials; ++trial) {
        Topology top = spec.fixed_topology
                           ? *spec.fixed_topology
                           : sample_topology(point, derive_key(spec.seed, static_cast<std::uint64_t>(trial)));
        try {
            Rational t_sd(0), t_pd(0);
            for (const auto& inst : instances) {
                auto [sd, pd] = detail::instance_latency(inst, top, demands, point);
                t_sd += inst.weight * sd;
                t_pd += inst.weight * pd;
            }
            t_sds.push_back(t_sd.to_double());
            t_pds.push_back(t_pd.to_double());
        } catch (const Error& e) {
            throw Error("trial " + std::to_string(trial) + ": " + e.what());
        }
    }
    ResultRow row;
    row.sweep_param = sweep_param;
    row.sweep_value = sweep_value;
    row.planner = planner_name(spec.planner);
    row.trials = spec.trials;
    row.seed = spec.seed;
    auto [msd, ssd] = mean_stderr(t_sds);
    auto [mpd, spd] = mean_stderr(t_pds);
    row.mean_t_sd = msd;
    row.stderr_t_sd = ssd;
    row.mean_t_pd = mpd;
    row.stderr_t_pd = spd;
    fill_analytics(row, point, spec.planner, instances);
    return row;
}

} // namespace detail

// Runs the experiment: one row without a sweep, one row per axis value with
// one. Every row reuses the same per-trial topology substreams, so sweep
// curves differ only through the scheme, not the noise.
inline MonteCarloResult run(const ExperimentSpec& spec) {
    if (spec.trials < 1) throw BadRange("run: trials must be >= 1");
    MonteCarloResult result;
    if (spec.sweep.what == SweepParam::none) {
        SystemParams point = spec.params;
        point.validated = false;
        point = validate_params(point);
        result.rows.push_back(detail::run_point(spec, point, "none", ""));
        return result;
    }
    const char* name = spec.sweep.what == SweepParam::mu ? "mu" : "ms";
    for (const auto& v : spec.sweep.values) {
        SystemParams point = spec.params;
        point.validated = false;
        if (spec.sweep.what == SweepParam::mu) {
            point.user_cache_files = v;
        } else {
            point.server_storage_files = v;
            point.server_storage_given = true;
        }
        point = validate_params(point);
        result.rows.push_back(detail::run_point(spec, point, name, detail::format_g10(v.to_double())));
    }
    return result;
}

inline const char* csv_header() {
    return "sweep_param,sweep_value,planner,trials,seed,mean_t_sd,stderr_t_sd,mean_t_pd,"
           "stderr_t_pd,analytic_corollary1,analytic_asymptotic,best_bound,worst_bound";
}

inline void write_csv(std::ostream& os, const MonteCarloResult& result) {
    os << csv_header() << "\n";
    auto opt = [](const std::optional<double>& v) { return v ? detail::format_g10(*v) : std::string(); };
    for (const auto& r : result.rows) {
        os << r.sweep_param << ',' << r.sweep_value << ',' << r.planner << ',' << r.trials << ','
           << r.seed << ',' << detail::format_g10(r.mean_t_sd) << ',' << detail::format_g10(r.stderr_t_sd)
           << ',' << detail::format_g10(r.mean_t_pd) << ',' << detail::format_g10(r.stderr_t_pd) << ','
           << opt(r.analytic_corollary1) << ',' << opt(r.analytic_asymptotic) << ','
           << opt(r.best_bound) << ',' << opt(r.worst_bound) << "\n";
    }
}

namespace detail {

inline Rational json_rational(const nlohmann::json& v, const std::string& key) {
    if (v.is_number_integer()) return Rational(v.get<long long>());
    if (v.is_number_float()) return parse_rational(v.dump()); // shortest round-trip decimal
    if (v.is_string()) return parse_rational(v.get<std::string>());
    throw BadRange("config: " + key + " must be a number or rational string");
}

inline void reject_unknown(const nlohmann::json& obj, const std::vector<std::string>& allowed,
                           const std::string& where) {
    for (auto it = obj.begin(); it != obj.end(); ++it) {
        bool ok = false;
        for (const auto& k : allowed) ok = ok || it.key() == k;
        if (!ok) throw BadRange("config: unknown key \"" + it.key() + "\" in " + where);
    }
}

} // namespace detail

inline PlannerKind planner_from_name(const std::string& name) {
    if (name == "successive_z0") return PlannerKind::successive_z0;
    if (name == "successive_redundant") return PlannerKind::successive_redundant;
    if (name == "parallel") return PlannerKind::parallel;
    if (name == "min_storage") return PlannerKind::min_storage;
    throw BadRange("config: unknown planner \"" + name + "\"");
}

// Strict config schema: unknown keys are errors, planner/params/trials/seed
// required. mu and ms accept integers, decimals, or "a/b" strings.
inline ExperimentSpec spec_from_json(const nlohmann::json& j) {
    if (!j.is_object()) throw BadRange("config: root must be an object");
    detail::reject_unknown(j, {"planner", "params", "trials", "seed", "sweep"}, "root");
    for (const char* key : {"planner", "params", "trials", "seed"})
        if (!j.contains(key)) throw BadRange(std::string("config: missing key \"") + key + "\"");
    ExperimentSpec spec;
    spec.planner = planner_from_name(j.at("planner").get<std::string>());
    if (!j.at("trials").is_number_integer() || j.at("trials").get<long long>() < 1)
        throw BadRange("config: trials must be a positive integer");
    spec.trials = j.at("trials").get<long long>();
    if (!j.at("seed").is_number_integer()) throw BadRange("config: seed must be an integer");
    spec.seed = j.at("seed").get<std::uint64_t>();
    const auto& p = j.at("params");
    if (!p.is_object()) throw BadRange("config: params must be an object");
    detail::reject_unknown(p, {"K", "N", "P", "rho", "z", "mu", "ms"}, "params");
    for (const char* key : {"K", "N", "P", "rho", "mu"})
        if (!p.contains(key)) throw BadRange(std::string("config: missing key \"params.") + key + "\"");
    spec.params.K = p.at("K").get<int>();
    spec.params.N = p.at("N").get<int>();
    spec.params.P = p.at("P").get<int>();
    spec.params.rho = p.at("rho").get<int>();
    spec.params.z = p.contains("z") ? p.at("z").get<int>() : 0;
    spec.params.user_cache_files = detail::json_rational(p.at("mu"), "params.mu");
    if (p.contains("ms")) {
        spec.params.server_storage_files = detail::json_rational(p.at("ms"), "params.ms");
        spec.params.server_storage_given = true;
    }
    if (j.contains("sweep")) {
        const auto& s = j.at("sweep");
        if (!s.is_object()) throw BadRange("config: sweep must be an object");
        detail::reject_unknown(s, {"param", "values"}, "sweep");
        for (const char* key : {"param", "values"})
            if (!s.contains(key)) throw BadRange(std::string("config: missing key \"sweep.") + key + "\"");
        std::string param = s.at("param").get<std::string>();
        if (param == "mu") spec.sweep.what = SweepParam::mu;
        else if (param == "ms") spec.sweep.what = SweepParam::ms;
        else throw BadRange("config: sweep.param must be \"mu\" or \"ms\"");
        if (!s.at("values").is_array() || s.at("values").empty())
            throw BadRange("config: sweep.values must be a non-empty array");
        for (const auto& v : s.at("values")) spec.sweep.values.push_back(detail::json_rational(v, "sweep.values"));
    }
    return spec;
}

} // namespace mscache
