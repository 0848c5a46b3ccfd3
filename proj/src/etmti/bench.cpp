#include "bench.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <exception>
#include <fstream>
#include <functional>
#include <mutex>
#include <ostream>
#include <thread>

#include <json.hpp>

#include "analysis.hpp"
#include "baseline.hpp"
#include "channel.hpp"
#include "ebud.hpp"
#include "rng.hpp"
#include "tsmti.hpp"

namespace etmti {

namespace {

uint64_t fnv1a(const std::string& s) {
    uint64_t h = 14695981039346656037ULL;
    for (unsigned char c : s) {
        h ^= c;
        h *= 1099511628211ULL;
    }
    return h;
}

std::string fmt_double(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.6g", v);
    return buf;
}

ScenarioParams apply_sweep(const ScenarioSpec& spec, double value) {
    ScenarioParams p = spec.fixed;
    switch (spec.var) {
        case SweepVar::K: p.K = static_cast<int>(std::llround(value)); break;
        case SweepVar::RM: p.r_m = value; break;
        case SweepVar::RU: p.r_u = value; break;
        case SweepVar::Alpha: p.alpha = value; break;
        case SweepVar::Beta: p.beta = value; break;
        case SweepVar::B: p.B = static_cast<int>(std::llround(value)); break;
        case SweepVar::Gamma: p.gamma = value; break;
    }
    return p;
}

void validate_params(const ScenarioParams& p) {
    if (p.K < 1) throw ConfigError("k must be at least 1");
    if (p.r_m < 0.0 || p.r_m > 1.0) throw ConfigError("r_m must lie in [0, 1]");
    if (p.r_u < 0.0) throw ConfigError("r_u must be non-negative");
    if (p.alpha <= 0.0 || p.alpha > 0.99) throw ConfigError("alpha must lie in (0, 0.99]");
    if (p.gamma <= 0.0 || p.gamma > 1.0) throw ConfigError("gamma must lie in (0, 1]");
    if (p.beta <= 0.0) throw ConfigError("beta must be positive");
    if (p.B < 2) throw ConfigError("b must be at least 2");
}

struct Accum {
    std::vector<double> t1, t2, total, r_fn, rem, f_d, f_m;

    void add(const TrialOutcome& o) {
        t1.push_back(o.t1_ms);
        t2.push_back(o.t2_ms);
        total.push_back(o.total_ms);
        r_fn.push_back(o.r_fn);
        rem.push_back(o.remaining_unknown);
        f_d.push_back(o.f_d);
        f_m.push_back(o.f_m);
    }
};

ResultRow make_row(const ScenarioSpec& spec, const char* protocol, double value,
                   const Accum& acc) {
    ResultRow row;
    row.scenario = spec.name;
    row.protocol = protocol;
    row.sweep_var = sweep_var_name(spec.var);
    row.sweep_value = value;
    row.trials = static_cast<int>(acc.t1.size());
    row.t1_ms = summarize(acc.t1);
    row.t2_ms = summarize(acc.t2);
    row.total_ms = summarize(acc.total);
    row.r_fn = summarize(acc.r_fn);
    row.remaining_unknown = summarize(acc.rem);
    row.f_d = summarize(acc.f_d);
    row.f_m = summarize(acc.f_m);
    return row;
}

// Trials are written to fixed indices, so the aggregate cannot depend on the
// thread count or interleaving.
std::vector<TrialOutcome> run_trials(int trials, int threads,
                                     const std::function<TrialOutcome(int)>& fn) {
    std::vector<TrialOutcome> out(trials);
    const int workers = std::max(1, std::min(threads, trials));
    if (workers == 1) {
        for (int t = 0; t < trials; ++t) out[t] = fn(t);
        return out;
    }
    std::atomic<int> next{0};
    std::exception_ptr failure;
    std::mutex failure_mu;
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (int w = 0; w < workers; ++w) {
        pool.emplace_back([&] {
            try {
                for (int t; (t = next.fetch_add(1)) < trials;) out[t] = fn(t);
            } catch (...) {
                std::lock_guard<std::mutex> lock(failure_mu);
                if (!failure) failure = std::current_exception();
            }
        });
    }
    for (std::thread& th : pool) th.join();
    if (failure) std::rethrow_exception(failure);
    return out;
}

} // namespace

const char* sweep_var_name(SweepVar v) {
    switch (v) {
        case SweepVar::K: return "k";
        case SweepVar::RM: return "r_m";
        case SweepVar::RU: return "r_u";
        case SweepVar::Alpha: return "alpha";
        case SweepVar::Beta: return "beta";
        case SweepVar::B: return "b";
        case SweepVar::Gamma: return "gamma";
    }
    return "?";
}

SweepVar sweep_var_from_name(const std::string& name) {
    if (name == "k") return SweepVar::K;
    if (name == "r_m") return SweepVar::RM;
    if (name == "r_u") return SweepVar::RU;
    if (name == "alpha") return SweepVar::Alpha;
    if (name == "beta") return SweepVar::Beta;
    if (name == "b") return SweepVar::B;
    if (name == "gamma") return SweepVar::Gamma;
    throw ConfigError("unknown sweep variable '" + name +
                      "' (expected one of k, r_m, r_u, alpha, beta, b, gamma)");
}

std::vector<ScenarioSpec> builtin_presets() {
    const std::vector<double> k_sweep{1000, 2000, 3000, 4000, 5000};
    std::vector<double> ratio_sweep;
    for (int i = 1; i <= 10; ++i) ratio_sweep.push_back(i / 10.0);

    auto base = [](const char* name, uint64_t id) {
        ScenarioSpec s;
        s.name = name;
        s.scenario_id = id;
        return s;
    };

    std::vector<ScenarioSpec> out;

    // Residual-unknown scenarios: how well Phase I mutes the intruders.
    ScenarioSpec s11 = base("S11", 11);
    s11.var = SweepVar::K;
    s11.values = k_sweep;
    s11.fixed.r_u = 0.1;
    out.push_back(s11);

    ScenarioSpec s12 = s11;
    s12.name = "S12";
    s12.scenario_id = 12;
    s12.fixed.alpha = 0.99;
    out.push_back(s12);

    ScenarioSpec s13 = base("S13", 13);
    s13.var = SweepVar::RU;
    s13.values = ratio_sweep;
    s13.fixed.K = 3000;
    out.push_back(s13);

    ScenarioSpec s14 = s13;
    s14.name = "S14";
    s14.scenario_id = 14;
    s14.fixed.alpha = 0.99;
    out.push_back(s14);

    // Clean-population identification time against the Aloha baseline.
    ScenarioSpec s21 = base("S21", 21);
    s21.var = SweepVar::K;
    s21.values = k_sweep;
    s21.fixed.r_m = 0.3;
    s21.run_aloha = true;
    out.push_back(s21);

    ScenarioSpec s22 = base("S22", 22);
    s22.var = SweepVar::RM;
    s22.values = ratio_sweep;
    s22.fixed.K = 3000;
    s22.run_aloha = true;
    out.push_back(s22);

    // Full-protocol scenarios with unknowns interfering.
    ScenarioSpec s31 = base("S31", 31);
    s31.var = SweepVar::K;
    s31.values = k_sweep;
    s31.fixed.r_m = 0.3;
    s31.fixed.r_u = 0.1;
    s31.run_aloha = true;
    out.push_back(s31);

    ScenarioSpec s32 = base("S32", 32);
    s32.var = SweepVar::RM;
    s32.values = ratio_sweep;
    s32.fixed.K = 3000;
    s32.fixed.r_u = 0.1;
    s32.run_aloha = true;
    out.push_back(s32);

    ScenarioSpec s33 = base("S33", 33);
    s33.var = SweepVar::RU;
    s33.values = ratio_sweep;
    s33.fixed.K = 3000;
    s33.fixed.r_m = 0.3;
    s33.run_aloha = true;
    out.push_back(s33);

    return out;
}

std::optional<ScenarioSpec> find_preset(const std::string& name) {
    for (ScenarioSpec& s : builtin_presets())
        if (s.name == name) return std::move(s);
    return std::nullopt;
}

ScenarioSpec parse_scenario_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open scenario file '" + path + "'");
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(in);
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError("scenario file '" + path + "' is not valid JSON: " + e.what());
    }

    ScenarioSpec spec;
    try {
        if (!doc.is_object()) throw ConfigError("scenario file must hold a JSON object");
        if (!doc.contains("name") || !doc["name"].is_string())
            throw ConfigError("scenario needs a string field 'name'");
        spec.name = doc["name"].get<std::string>();
        spec.scenario_id =
            doc.contains("id") ? doc["id"].get<uint64_t>() : fnv1a(spec.name);

        if (!doc.contains("sweep") || !doc["sweep"].is_object())
            throw ConfigError("scenario needs an object field 'sweep'");
        const nlohmann::json& sweep = doc["sweep"];
        if (!sweep.contains("var") || !sweep["var"].is_string())
            throw ConfigError("'sweep' needs a string field 'var'");
        spec.var = sweep_var_from_name(sweep["var"].get<std::string>());
        if (!sweep.contains("values") || !sweep["values"].is_array() || sweep["values"].empty())
            throw ConfigError("'sweep' needs a non-empty array field 'values'");
        for (const nlohmann::json& v : sweep["values"]) {
            if (!v.is_number()) throw ConfigError("'sweep.values' entries must be numbers");
            spec.values.push_back(v.get<double>());
        }

        if (doc.contains("fixed")) {
            const nlohmann::json& fx = doc["fixed"];
            if (!fx.is_object()) throw ConfigError("'fixed' must be an object");
            for (auto it = fx.begin(); it != fx.end(); ++it) {
                const std::string& key = it.key();
                if (!it.value().is_number())
                    throw ConfigError("'fixed." + key + "' must be a number");
                const double v = it.value().get<double>();
                if (key == "k") spec.fixed.K = static_cast<int>(std::llround(v));
                else if (key == "r_m") spec.fixed.r_m = v;
                else if (key == "r_u") spec.fixed.r_u = v;
                else if (key == "alpha") spec.fixed.alpha = v;
                else if (key == "gamma") spec.fixed.gamma = v;
                else if (key == "beta") spec.fixed.beta = v;
                else if (key == "b") spec.fixed.B = static_cast<int>(std::llround(v));
                else throw ConfigError("unknown field 'fixed." + key + "'");
            }
        }

        if (doc.contains("trials")) {
            spec.trials = doc["trials"].get<int>();
            if (spec.trials < 1) throw ConfigError("'trials' must be at least 1");
        }
        if (doc.contains("seed")) spec.fixed.master_seed = doc["seed"].get<uint64_t>();
        if (doc.contains("frame_factor")) {
            spec.frame_factor = doc["frame_factor"].get<double>();
            if (spec.frame_factor <= 0.0) throw ConfigError("'frame_factor' must be positive");
        }
        if (doc.contains("protocols")) {
            if (!doc["protocols"].is_array())
                throw ConfigError("'protocols' must be an array of names");
            spec.run_etmti = spec.run_analysis = spec.run_aloha = false;
            for (const nlohmann::json& p : doc["protocols"]) {
                const std::string name = p.get<std::string>();
                if (name == "etmti") spec.run_etmti = true;
                else if (name == "analysis") spec.run_analysis = true;
                else if (name == "aloha") spec.run_aloha = true;
                else throw ConfigError("unknown protocol '" + name +
                                       "' (expected etmti, analysis, or aloha)");
            }
        }
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError("scenario file '" + path + "': " + e.what());
    }
    return spec;
}

uint64_t trial_seed(uint64_t master_seed, uint64_t scenario_id, int sweep_idx, int trial_idx) {
    return mix64(mix64(mix64(master_seed, scenario_id), static_cast<uint64_t>(sweep_idx)),
                 static_cast<uint64_t>(trial_idx));
}

TrialOutcome run_etmti_trial(const ScenarioParams& params, uint64_t child_seed,
                             const Hasher& hasher) {
    Population pop = generate_population(params, mix64(child_seed, 0));
    std::mt19937_64 rng(mix64(child_seed, 1));
    TrialOutcome o;
    const PhaseOneResult p1 = run_phase1(pop, params, rng, hasher);
    const RoundReport p2 = run_phase2(pop, params, rng, hasher);
    o.t1_ms = (p1.seg_est + p1.seg_dea) * TimeLedger::t_id_ms;
    o.t2_ms = (p2.seg_r + p2.seg_t) * TimeLedger::t_id_ms;
    o.total_ms = o.t1_ms + o.t2_ms;
    o.missing_count = pop.missing_count;
    o.false_negatives = static_cast<int>(p2.falsely_present.size());
    o.r_fn = o.missing_count > 0 ? static_cast<double>(o.false_negatives) / o.missing_count : 0.0;
    o.remaining_unknown = p1.remaining_unknown;
    o.f_d = p1.f_d;
    o.f_m = p2.frames_used;
    o.depth_cap_hit = p2.depth_cap_hit;
    return o;
}

TrialOutcome run_aloha_trial(const ScenarioParams& params, uint64_t child_seed,
                             double frame_factor, const Hasher& hasher) {
    Population pop = generate_population(params, mix64(child_seed, 0));
    TrialOutcome o;
    const RoundReport rep = run_aloha_baseline(pop, frame_factor, mix64(child_seed, 2), hasher);
    o.t2_ms = (rep.seg_r + rep.seg_t) * TimeLedger::t_id_ms;
    o.total_ms = o.t2_ms;
    o.missing_count = pop.missing_count;
    o.false_negatives = static_cast<int>(rep.falsely_present.size());
    o.r_fn = o.missing_count > 0 ? static_cast<double>(o.false_negatives) / o.missing_count : 0.0;
    int active = 0;
    for (const TagRecord& t : pop.unknown)
        if (t.active) ++active;
    o.remaining_unknown = active;
    o.f_m = rep.frames_used;
    o.depth_cap_hit = rep.depth_cap_hit;
    return o;
}

Stats summarize(const std::vector<double>& xs) {
    Stats s;
    if (xs.empty()) return s;
    double sum = 0.0;
    for (double x : xs) sum += x;
    s.mean = sum / static_cast<double>(xs.size());
    if (xs.size() < 2) return s;
    double acc = 0.0;
    for (double x : xs) acc += (x - s.mean) * (x - s.mean);
    s.stddev = std::sqrt(acc / static_cast<double>(xs.size() - 1));
    return s;
}

std::vector<ResultRow> run_scenario(const ScenarioSpec& spec, int threads) {
    if (spec.values.empty()) throw ConfigError("scenario has no sweep values");
    if (spec.trials < 1) throw ConfigError("'trials' must be at least 1");
    if (!spec.run_etmti && !spec.run_analysis && !spec.run_aloha)
        throw ConfigError("scenario enables no protocol");

    std::vector<ResultRow> rows;
    for (size_t sv = 0; sv < spec.values.size(); ++sv) {
        const double value = spec.values[sv];
        const ScenarioParams params = apply_sweep(spec, value);
        validate_params(params);

        if (spec.run_etmti) {
            const std::vector<TrialOutcome> outs =
                run_trials(spec.trials, threads, [&](int t) {
                    return run_etmti_trial(
                        params,
                        trial_seed(params.master_seed, spec.scenario_id, static_cast<int>(sv), t));
                });
            Accum acc;
            for (const TrialOutcome& o : outs) acc.add(o);
            rows.push_back(make_row(spec, "etmti", value, acc));
        }
        if (spec.run_aloha) {
            const std::vector<TrialOutcome> outs =
                run_trials(spec.trials, threads, [&](int t) {
                    return run_aloha_trial(
                        params,
                        trial_seed(params.master_seed, spec.scenario_id, static_cast<int>(sv), t),
                        spec.frame_factor);
                });
            Accum acc;
            for (const TrialOutcome& o : outs) acc.add(o);
            rows.push_back(make_row(spec, "aloha", value, acc));
        }
        if (spec.run_analysis) {
            // Deterministic model row: the planner fed the true unknown count.
            const double u_true = std::llround(params.r_u * params.K);
            const PlanResult pl =
                plan(params.K, params.alpha, u_true, params.gamma, params.beta, params.B);
            TrialOutcome o;
            o.t1_ms = pl.t1_pred_ms;
            o.t2_ms = pl.t2_pred_ms;
            o.total_ms = pl.total_ms();
            o.r_fn = pl.r_fn_bound;
            o.remaining_unknown = pl.u_pred;
            o.f_d = pl.f_d_pred;
            o.f_m = pl.f_m_pred;
            Accum acc;
            acc.add(o);
            rows.push_back(make_row(spec, "analysis", value, acc));
        }
    }
    return rows;
}

void emit_csv(const std::vector<ResultRow>& rows, std::ostream& os) {
    os << "scenario,protocol,sweep_var,sweep_value,trials,"
          "t1_ms_mean,t1_ms_std,t2_ms_mean,t2_ms_std,total_ms_mean,total_ms_std,"
          "r_fn_mean,r_fn_std,remaining_unknown_mean,remaining_unknown_std,"
          "f_d_mean,f_d_std,f_m_mean,f_m_std\n";
    for (const ResultRow& r : rows) {
        os << r.scenario << ',' << r.protocol << ',' << r.sweep_var << ','
           << fmt_double(r.sweep_value) << ',' << r.trials;
        for (const Stats* s : {&r.t1_ms, &r.t2_ms, &r.total_ms, &r.r_fn, &r.remaining_unknown,
                               &r.f_d, &r.f_m})
            os << ',' << fmt_double(s->mean) << ',' << fmt_double(s->stddev);
        os << '\n';
    }
}

void emit_jsonl(const std::vector<ResultRow>& rows, std::ostream& os) {
    for (const ResultRow& r : rows) {
        nlohmann::ordered_json j;
        j["scenario"] = r.scenario;
        j["protocol"] = r.protocol;
        j["sweep_var"] = r.sweep_var;
        j["sweep_value"] = r.sweep_value;
        j["trials"] = r.trials;
        auto put = [&](const char* key, const Stats& s) {
            j[std::string(key) + "_mean"] = s.mean;
            j[std::string(key) + "_std"] = s.stddev;
        };
        put("t1_ms", r.t1_ms);
        put("t2_ms", r.t2_ms);
        put("total_ms", r.total_ms);
        put("r_fn", r.r_fn);
        put("remaining_unknown", r.remaining_unknown);
        put("f_d", r.f_d);
        put("f_m", r.f_m);
        os << j.dump() << '\n';
    }
}

} // namespace etmti
