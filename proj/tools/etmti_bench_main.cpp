#include <cstdint>
#include <fstream>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include <etmti/analysis.hpp>
#include <etmti/bench.hpp>

namespace {

int cmd_run(const std::string& scenario, const std::string& out_path, const std::string& format,
            int trials, bool seed_set, uint64_t seed, int threads) {
    etmti::ScenarioSpec spec;
    if (auto preset = etmti::find_preset(scenario)) {
        spec = *std::move(preset);
    } else if (std::ifstream probe(scenario); probe) {
        spec = etmti::parse_scenario_file(scenario);
    } else {
        throw etmti::ConfigError("'" + scenario +
                                 "' is neither a preset (S11..S33) nor a readable scenario file");
    }
    if (trials > 0) spec.trials = trials;
    if (seed_set) spec.fixed.master_seed = seed;

    const std::vector<etmti::ResultRow> rows = etmti::run_scenario(spec, threads);

    std::ofstream file;
    if (!out_path.empty()) {
        file.open(out_path);
        if (!file) throw etmti::ConfigError("cannot write to '" + out_path + "'");
    }
    std::ostream& os = out_path.empty() ? std::cout : file;
    if (format == "csv") etmti::emit_csv(rows, os);
    else etmti::emit_jsonl(rows, os);
    return 0;
}

int cmd_plan(int k, double alpha, double u_est, double gamma, double beta, int b) {
    const etmti::PlanResult r = etmti::plan(k, alpha, u_est, gamma, beta, b);
    std::cout << "k=" << k << " alpha=" << alpha << " u_est=" << u_est << " gamma=" << r.gamma
              << " beta=" << r.beta << " b=" << r.B << "\n"
              << "residual_budget=" << r.budget << "\n"
              << "f_d=" << r.f_d_pred << "\n"
              << "u_after_deactivation=" << r.u_pred << "\n"
              << "t1_ms=" << r.t1_pred_ms << "\n"
              << "t2_ms=" << r.t2_pred_ms << "\n"
              << "total_ms=" << r.total_ms() << "\n"
              << "f_m=" << r.f_m_pred << "\n"
              << "r_fn_bound=" << r.r_fn_bound << "\n";
    return 0;
}

int cmd_sweep(int k) {
    const etmti::SweepResult res = etmti::sweep_beta_b(k);
    std::cout << "beta,b,t2_ms,converged\n";
    for (const etmti::SweepCell& c : res.cells) {
        std::cout << c.beta << ',' << c.B << ',';
        if (c.converged) std::cout << c.t2_ms << ",1\n";
        else std::cout << ",0\n";
    }
    std::cout << "best beta=" << res.best_beta << " b=" << res.best_B
              << " t2_ms=" << res.best_t2_ms << "\n";
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Missing-tag identification benchmark: simulator, planner, and model sweeps"};
    app.require_subcommand(1);

    std::string scenario, out_path, format = "csv";
    int trials = 0;
    uint64_t seed = 0;
    int threads = 1;
    CLI::App* run = app.add_subcommand("run", "Simulate a scenario and emit per-sweep statistics");
    run->add_option("--scenario", scenario, "Preset name (S11..S33) or JSON scenario file")
        ->required();
    run->add_option("--out", out_path, "Output path (stdout when omitted)");
    run->add_option("--format", format, "Output format")
        ->check(CLI::IsMember({"csv", "jsonl"}));
    run->add_option("--trials", trials, "Override the scenario trial count")
        ->check(CLI::PositiveNumber);
    CLI::Option* seed_opt = run->add_option("--seed", seed, "Override the master seed");
    run->add_option("--threads", threads, "Worker threads for trials")
        ->check(CLI::PositiveNumber);

    int plan_k = 0;
    double plan_alpha = 0.95, plan_u = 0.0, plan_gamma = 0.25, plan_beta = 0.95;
    int plan_b = 3;
    CLI::App* plan = app.add_subcommand("plan", "Predict round cost and reliability for one setup");
    plan->add_option("--k", plan_k, "Known tag count")->required()->check(CLI::PositiveNumber);
    plan->add_option("--alpha", plan_alpha, "Required identification reliability")->required();
    plan->add_option("--u-est", plan_u, "Estimated unknown tag count")->required();
    plan->add_option("--gamma", plan_gamma, "Estimation prefix fraction");
    plan->add_option("--beta", plan_beta, "First identification frame sizing");
    plan->add_option("--b", plan_b, "Tree branch factor");

    int sweep_k = 0;
    CLI::App* sweep = app.add_subcommand("sweep-beta-b", "Grid-search (beta, B) by predicted time");
    sweep->add_option("--k", sweep_k, "Known tag count")->required()->check(CLI::PositiveNumber);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (run->parsed())
            return cmd_run(scenario, out_path, format, trials, seed_opt->count() > 0, seed,
                           threads);
        if (plan->parsed()) return cmd_plan(plan_k, plan_alpha, plan_u, plan_gamma, plan_beta, plan_b);
        return cmd_sweep(sweep_k);
    } catch (const etmti::ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const etmti::AnalysisError& e) {
        std::cerr << "analysis error: " << e.what() << "\n";
        return 3;
    } catch (const std::invalid_argument& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    }
}
