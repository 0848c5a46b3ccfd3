#pragma once
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "core.hpp"

namespace etmti {

// Bad scenario input: unknown preset, malformed file, out-of-range parameter.
struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

enum class SweepVar { K, RM, RU, Alpha, Beta, B, Gamma };

const char* sweep_var_name(SweepVar v);
SweepVar sweep_var_from_name(const std::string& name); // throws ConfigError

struct ScenarioSpec {
    std::string name;
    uint64_t scenario_id = 0; // folded into every trial seed
    SweepVar var = SweepVar::K;
    std::vector<double> values;
    ScenarioParams fixed;
    int trials = 100;
    bool run_etmti = true;
    bool run_analysis = true;
    bool run_aloha = false;
    double frame_factor = 1.0; // baseline frame sizing multiplier
};

std::vector<ScenarioSpec> builtin_presets();
std::optional<ScenarioSpec> find_preset(const std::string& name);
ScenarioSpec parse_scenario_file(const std::string& path); // throws ConfigError

// One simulated round under one protocol. Seeds derive from child_seed so a
// trial is reproducible in isolation; both protocols draw the same population.
struct TrialOutcome {
    double t1_ms = 0.0;
    double t2_ms = 0.0;
    double total_ms = 0.0;
    double r_fn = 0.0; // misidentified fraction of the missing tags
    double remaining_unknown = 0.0;
    int f_d = 0;
    int f_m = 0;
    int missing_count = 0;
    int false_negatives = 0;
    bool depth_cap_hit = false;
};

TrialOutcome run_etmti_trial(const ScenarioParams& params, uint64_t child_seed,
                             const Hasher& hasher = default_hasher());
TrialOutcome run_aloha_trial(const ScenarioParams& params, uint64_t child_seed,
                             double frame_factor = 1.0, const Hasher& hasher = default_hasher());

uint64_t trial_seed(uint64_t master_seed, uint64_t scenario_id, int sweep_idx, int trial_idx);

struct Stats {
    double mean = 0.0;
    double stddev = 0.0; // sample standard deviation, 0 when n < 2
};

Stats summarize(const std::vector<double>& xs);

struct ResultRow {
    std::string scenario;
    std::string protocol; // etmti | aloha | analysis
    std::string sweep_var;
    double sweep_value = 0.0;
    int trials = 0;
    Stats t1_ms, t2_ms, total_ms, r_fn, remaining_unknown, f_d, f_m;
};

std::vector<ResultRow> run_scenario(const ScenarioSpec& spec, int threads = 1);

void emit_csv(const std::vector<ResultRow>& rows, std::ostream& os);
void emit_jsonl(const std::vector<ResultRow>& rows, std::ostream& os);

} // namespace etmti
