// Command-line front end: instance generation, certification, design
// solving, experiment execution and static plot emission.
//
// Exit codes: 0 success, 2 usage error, 3 domain error, 4 audit failure.

#include <cstdio>
#include <filesystem>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "gamband/gamband.hpp"

namespace {

using namespace gamband;

constexpr int kExitOk = 0;
constexpr int kExitUsage = 2;
constexpr int kExitDomain = 3;
constexpr int kExitAudit = 4;

void print_certificate(const MisspecCertificate& c) {
    std::cout << to_string(c.kind);
    if (c.rho) std::cout << " rho=" << fmt17(*c.rho);
    if (c.eps) std::cout << " eps=" << fmt17(*c.eps);
    if (c.c_star) std::cout << " c_star=" << fmt17(*c.c_star);
    std::cout << "\n";
}

int cmd_gen_env(const GenRecipe& recipe, const std::string& out) {
    auto built = generate_instance(recipe);
    if (built.degenerate_proxy)
        std::cerr << "warning: proxy is constant over the actions; instance is realizable\n";
    InstanceFile file{std::move(built.instance), recipe.seed, std::nullopt};
    file.certificate = certify_gam(file.instance);
    write_instance(file, out);
    std::cout << "wrote " << out << " (d=" << file.instance.dim() << " k=" << file.instance.k()
              << " rho=" << fmt17(*file.certificate->rho) << ")\n";
    return kExitOk;
}

int cmd_verify(const std::string& env) {
    const InstanceFile file = read_instance(env);
    const RewardInstance& inst = file.instance;
    try {
        const auto gam = certify_gam(inst);
        std::cout << "gam rho=" << fmt17(*gam.rho) << "\n";
    } catch (const NotGamError& e) {
        std::cout << "gam: not certifiable (action " << e.action_index
                  << ", violation=" << fmt17(e.violation) << ")\n";
    }
    const auto uni = certify_uniform(inst);
    std::cout << "uniform eps=" << fmt17(*uni.eps) << "\n";
    try {
        const auto weak = certify_weak_gam(inst);
        std::cout << "weak_gam rho=" << fmt17(*weak.rho) << " c_star=" << fmt17(*weak.c_star)
                  << "\n";
    } catch (const NotWeakGamError& e) {
        std::cout << "weak_gam: not certifiable (action " << e.action_index << ")\n";
    }
    return kExitOk;
}

int cmd_design(const std::string& env) {
    const InstanceFile file = read_instance(env);
    const RewardInstance& inst = file.instance;
    std::vector<int> active(static_cast<std::size_t>(inst.k()));
    for (int i = 0; i < inst.k(); ++i) active[static_cast<std::size_t>(i)] = i;
    const Design d = solve_design(active, inst.actions());
    std::cout << "g_value=" << fmt17(d.g_value) << " rank=" << d.rank
              << " support=" << d.support_size << "\n";
    for (const auto& [idx, w] : d.weights)
        std::cout << "  action " << idx << " weight " << fmt17(w) << "\n";
    return kExitOk;
}

int cmd_run(const std::string& algo, const std::string& env, long horizon, std::uint64_t seed,
            double delta, double alpha, const std::string& noise, const std::string& out) {
    ExperimentConfig cfg;
    cfg.env_path = env;
    cfg.algos = {algo};
    cfg.horizon = horizon;
    cfg.seeds = {seed};
    cfg.delta = delta;
    if (alpha > 0.0) cfg.alpha = alpha;
    cfg.noise = noise_kind_from_string(noise);

    // fail fast on variant/certificate mismatches before any work
    const InstanceFile file = read_instance(env);
    if (algo == "pe-unified") {
        if (!file.certificate.has_value() || file.certificate->kind != MisspecKind::unified ||
            !file.certificate->eps.has_value())
            throw ConfigError(
                "pe-unified requires meta.certificate with kind=unified and field eps");
    }

    const std::string out_dir = std::filesystem::path(out).parent_path().string();
    ExperimentSummary summary = run_experiment(cfg, out_dir.empty() ? "." : out_dir, 1);
    if (summary.runs.size() != 1) throw ConfigError("run: expected exactly one run");
    const RunResult& r = summary.runs[0];
    if (r.failed) throw ConfigError("run failed: " + r.error);
    if (r.trace_path != out) std::filesystem::rename(r.trace_path, out);
    std::cout << "R_T=" << fmt17(r.final_regret) << " switches=" << r.switches
              << " batches=" << r.batches << " trace=" << out << "\n";
    return kExitOk;
}

int cmd_sweep(const std::string& config_path, const std::string& out_dir, int jobs,
              const std::string& audit_law) {
    const ExperimentConfig cfg = ExperimentConfig::from_json_file(config_path);
    const ExperimentSummary summary = run_experiment(cfg, out_dir, jobs);
    write_summary(summary, out_dir + "/summary.json");
    std::cout << "summary: " << out_dir << "/summary.json (" << summary.runs.size() << " runs)\n";
    int failures = 0;
    for (const auto& g : summary.per_algo) failures += g.failures;
    if (failures > 0) std::cerr << "warning: " << failures << " run(s) failed; see summary\n";
    if (!audit_law.empty()) {
        const GrowthLaw law = audit_law == "sqrtT" ? GrowthLaw::sqrtT : GrowthLaw::logT;
        bool all_pass = true;
        for (const auto& g : summary.per_algo) {
            if (g.runs == g.failures) continue;
            const auto rep = growth_audit(summary.checkpoints, g.checkpoint_means, law);
            std::cout << "audit " << audit_law << " " << g.algo << ": "
                      << (rep.pass ? "pass" : "FAIL");
            for (const auto& [t, ratio] : rep.ratios)
                std::cout << " R(4*" << t << ")/R(" << t << ")=" << fmt17(ratio);
            std::cout << "\n";
            all_pass = all_pass && rep.pass;
        }
        if (!all_pass) return kExitAudit;
    }
    return kExitOk;
}

int cmd_plot(const std::vector<std::string>& trace_paths, const std::string& out) {
    std::map<std::string, std::vector<std::vector<double>>> groups;
    for (const auto& p : trace_paths) {
        TraceFile t = read_trace(p);
        std::vector<double> cum;
        cum.reserve(t.steps.size());
        for (const auto& s : t.steps) cum.push_back(s.cum_regret);
        groups[t.algo.empty() ? "trace" : t.algo].push_back(std::move(cum));
    }
    std::vector<std::pair<std::string, std::vector<std::vector<double>>>> ordered(groups.begin(),
                                                                                  groups.end());
    plot_svg(ordered, out);
    std::cout << "wrote " << out << "\n";
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"gap-adjusted misspecified linear bandit simulator"};
    app.require_subcommand(1);

    // gen-env
    GenRecipe recipe;
    std::string gen_out = "env.json";
    auto* gen = app.add_subcommand("gen-env", "generate a GAM instance file");
    gen->add_option("--d", recipe.d, "dimension")->required()->envname("GAMBAND_D");
    gen->add_option("--k", recipe.k, "number of actions")->required()->envname("GAMBAND_K");
    gen->add_option("--rho", recipe.rho, "target misspecification ratio in [0,1)")
        ->required()
        ->check(CLI::Range(0.0, 0.9999999))
        ->envname("GAMBAND_RHO");
    gen->add_option("--seed", recipe.seed, "construction seed")->envname("GAMBAND_SEED");
    gen->add_option("--sigma", recipe.sigma, "noise scale")->envname("GAMBAND_SIGMA");
    gen->add_option("--scale", recipe.scale, "norm of w_star")->envname("GAMBAND_SCALE");
    gen->add_option("--range-bound", recipe.range_bound, "bound on the f0 range")
        ->envname("GAMBAND_RANGE_BOUND");
    gen->add_option("--out", gen_out, "output instance file")->envname("GAMBAND_OUT");

    // verify
    std::string verify_env;
    auto* verify = app.add_subcommand("verify", "certify an instance file");
    verify->add_option("--env", verify_env, "instance file")->required()->envname("GAMBAND_ENV");

    // design
    std::string design_env;
    auto* design = app.add_subcommand("design", "solve the G-optimal design over all actions");
    design->add_option("--env", design_env, "instance file")->required()->envname("GAMBAND_ENV");

    // run
    std::string run_algo, run_env, run_out = "trace.csv", run_noise = "gaussian";
    long run_t = 0;
    std::uint64_t run_seed = 0;
    double run_delta = 0.05, run_alpha = 0.0;
    auto* run = app.add_subcommand("run", "run one algorithm on an instance");
    run->add_option("--algo", run_algo, "linucb|linucbw|pe|pe-unified")
        ->required()
        ->check(CLI::IsMember({"linucb", "linucbw", "pe", "pe-unified"}))
        ->envname("GAMBAND_ALGO");
    run->add_option("--env", run_env, "instance file")->required()->envname("GAMBAND_ENV");
    run->add_option("--T", run_t, "horizon")->required()->check(CLI::PositiveNumber)
        ->envname("GAMBAND_T");
    run->add_option("--seed", run_seed, "noise seed")->envname("GAMBAND_SEED");
    run->add_option("--delta", run_delta, "LinUCB confidence level")->envname("GAMBAND_DELTA");
    run->add_option("--alpha", run_alpha, "PE confidence level (default 1/(kT))")
        ->envname("GAMBAND_ALPHA");
    run->add_option("--noise", run_noise, "gaussian|bounded_uniform|none")
        ->check(CLI::IsMember({"gaussian", "bounded_uniform", "none"}))
        ->envname("GAMBAND_NOISE");
    run->add_option("--out", run_out, "trace file")->envname("GAMBAND_OUT");

    // sweep
    std::string sweep_config, sweep_out = "sweep-out", sweep_audit;
    int sweep_jobs = 1;
    auto* sweep = app.add_subcommand("sweep", "run a multi-seed experiment from a config file");
    sweep->add_option("--config", sweep_config, "experiment config (json)")
        ->required()
        ->envname("GAMBAND_CONFIG");
    sweep->add_option("--out-dir", sweep_out, "output directory")->envname("GAMBAND_OUT_DIR");
    sweep->add_option("--jobs", sweep_jobs, "max concurrent runs")->check(CLI::PositiveNumber)
        ->envname("GAMBAND_JOBS");
    sweep->add_option("--audit", sweep_audit, "growth audit to apply: sqrtT|logT")
        ->check(CLI::IsMember({"sqrtT", "logT"}))
        ->envname("GAMBAND_AUDIT");

    // plot
    std::vector<std::string> plot_traces;
    std::string plot_out = "regret.svg";
    auto* plot = app.add_subcommand("plot", "render regret curves from trace files");
    plot->add_option("--traces", plot_traces, "trace files")->required()->expected(-1)
        ->envname("GAMBAND_TRACES");
    plot->add_option("--out", plot_out, "output svg")->envname("GAMBAND_OUT");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e);  // --help
        app.exit(e);
        return kExitUsage;
    }

    try {
        if (gen->parsed()) return cmd_gen_env(recipe, gen_out);
        if (verify->parsed()) return cmd_verify(verify_env);
        if (design->parsed()) return cmd_design(design_env);
        if (run->parsed())
            return cmd_run(run_algo, run_env, run_t, run_seed, run_delta, run_alpha, run_noise,
                           run_out);
        if (sweep->parsed()) return cmd_sweep(sweep_config, sweep_out, sweep_jobs, sweep_audit);
        if (plot->parsed()) return cmd_plot(plot_traces, plot_out);
    } catch (const gamband::ConfigError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitDomain;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitDomain;
    }
    return kExitUsage;
}
