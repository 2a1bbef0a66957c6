#pragma once

#include <atomic>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <json.hpp>

#include "gamband/io.hpp"

namespace gamband {

/// Deterministic instance recipe: unit-norm actions and a scaled random
/// direction for w_star, all on counter-based streams keyed by the seed.
struct GenRecipe {
    int d = 2;
    int k = 20;
    double rho = 0.0;
    std::uint64_t seed = 0;
    double sigma = 0.1;
    double scale = 1.0;       // norm of w_star before any range rescale
    double range_bound = 1.0;
};

inline GamConstruction generate_instance(const GenRecipe& r) {
    if (r.d < 1 || r.k < 1) throw ConfigError("generate_instance: d and k must be >= 1");
    CounterRng rng(r.seed, 0x616374);
    std::vector<Vector> actions;
    actions.reserve(static_cast<std::size_t>(r.k));
    for (int i = 0; i < r.k; ++i) {
        Vector x(r.d);
        for (int j = 0; j < r.d; ++j)
            x[j] = rng.gaussian(static_cast<std::uint64_t>(i) * 64 + static_cast<std::uint64_t>(j));
        const double n = x.norm();
        if (n < 1e-12) { x.setZero(); x[0] = 1.0; }
        else x /= n;
        actions.push_back(std::move(x));
    }
    CounterRng wrng(r.seed, 0x777374);
    Vector w(r.d);
    for (int j = 0; j < r.d; ++j) w[j] = wrng.gaussian(static_cast<std::uint64_t>(j));
    const double n = w.norm();
    if (n < 1e-12) { w.setZero(); w[0] = 1.0; }
    else w /= n;
    w *= r.scale;
    return make_gam_instance(ActionSet(std::move(actions), 1.0), w, r.rho, r.seed, r.sigma,
                             r.range_bound);
}

struct ExperimentConfig {
    std::string env_path;             // instance file, or
    std::optional<GenRecipe> recipe;  // inline generation recipe
    std::vector<std::string> algos;   // linucb | linucbw | pe | pe-unified
    long horizon = 1;
    std::vector<std::uint64_t> seeds;
    double delta = 0.05;
    std::optional<double> alpha;      // default 1/(kT)
    NoiseKind noise = NoiseKind::gaussian;
    std::vector<long> checkpoints;    // default: powers of 2 from 1024 up to horizon

    static ExperimentConfig from_json_file(const std::string& path);
};

/// Powers of 2 from 2^10 (or the horizon when smaller) up to the horizon.
inline std::vector<long> default_checkpoints(long horizon) {
    std::vector<long> out;
    for (long c = 1024; c <= horizon; c *= 2) out.push_back(c);
    if (out.empty()) out.push_back(horizon);
    return out;
}

inline ExperimentConfig ExperimentConfig::from_json_file(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw ConfigError("cannot open config file: " + path);
    nlohmann::json j;
    try {
        f >> j;
    } catch (const std::exception& e) {
        throw ConfigError("malformed config file " + path + ": " + e.what());
    }
    ExperimentConfig cfg;
    if (j.contains("env")) cfg.env_path = j["env"].get<std::string>();
    if (j.contains("recipe")) {
        const auto& rj = j["recipe"];
        GenRecipe r;
        r.d = rj.at("d").get<int>();
        r.k = rj.at("k").get<int>();
        r.rho = rj.at("rho").get<double>();
        r.seed = rj.value("seed", 0ULL);
        r.sigma = rj.value("sigma", 0.1);
        r.scale = rj.value("scale", 1.0);
        r.range_bound = rj.value("range_bound", 1.0);
        cfg.recipe = r;
    }
    if (cfg.env_path.empty() && !cfg.recipe.has_value())
        throw ConfigError("config needs either \"env\" or \"recipe\"");
    if (!j.contains("algos") || !j.contains("horizon") || !j.contains("seeds"))
        throw ConfigError("config needs \"algos\", \"horizon\" and \"seeds\"");
    cfg.algos = j["algos"].get<std::vector<std::string>>();
    cfg.horizon = j["horizon"].get<long>();
    if (j["seeds"].is_array()) {
        cfg.seeds = j["seeds"].get<std::vector<std::uint64_t>>();
    } else {
        const auto count = j["seeds"].at("count").get<std::uint64_t>();
        const auto base = j["seeds"].value("base", 0ULL);
        for (std::uint64_t s = 0; s < count; ++s) cfg.seeds.push_back(base + s);
    }
    cfg.delta = j.value("delta", 0.05);
    if (j.contains("alpha") && !j["alpha"].is_null()) cfg.alpha = j["alpha"].get<double>();
    if (j.contains("noise")) cfg.noise = noise_kind_from_string(j["noise"].get<std::string>());
    if (j.contains("checkpoints")) cfg.checkpoints = j["checkpoints"].get<std::vector<long>>();
    if (cfg.horizon < 1) throw ConfigError("config: horizon must be >= 1");
    if (cfg.algos.empty()) throw ConfigError("config: algos must be nonempty");
    if (cfg.seeds.empty()) throw ConfigError("config: seeds must be nonempty");
    for (const auto& a : cfg.algos)
        if (a != "linucb" && a != "linucbw" && a != "pe" && a != "pe-unified")
            throw ConfigError("config: unknown algorithm " + a);
    return cfg;
}

struct RunResult {
    std::string algo;
    std::uint64_t seed = 0;
    bool failed = false;
    std::string error;
    double final_regret = 0.0;
    long switches = 0;
    int batches = 0;
    bool coverage_tracked = false;
    bool coverage_ok = true;
    std::vector<double> regret_at_checkpoints;
    double wall_seconds = 0.0;
    std::string trace_path;
};

struct AlgoAggregate {
    std::string algo;
    int runs = 0;
    int failures = 0;
    double regret_mean = 0.0;
    double regret_stderr = 0.0;
    double regret_over_sqrt_t = 0.0;
    double switches_mean = 0.0;
    double batches_mean = 0.0;
    double coverage_fraction = 1.0;
    bool coverage_tracked = false;
    std::vector<double> checkpoint_means;
};

struct ExperimentSummary {
    long horizon = 0;
    std::vector<long> checkpoints;
    std::vector<AlgoAggregate> per_algo;
    std::vector<RunResult> runs;
    double wall_seconds = 0.0;
};

namespace detail {

/// Executes one (algo, seed) run against a loaded instance.
inline RunResult execute_run(const std::string& algo, std::uint64_t seed,
                             const RewardInstance& inst,
                             const std::optional<MisspecCertificate>& gam_cert,
                             const ExperimentConfig& cfg, const std::vector<long>& checkpoints,
                             const std::string& trace_path, std::uint64_t run_index) {
    RunResult res;
    res.algo = algo;
    res.seed = seed;
    res.trace_path = trace_path;
    const auto t0 = std::chrono::steady_clock::now();
    try {
        NoiseModel noise{cfg.noise, inst.sigma(), seed, run_index};
        RegretTrace trace;
        if (algo == "linucb" || algo == "linucbw") {
            LinUcbConfig lc;
            lc.sigma = inst.sigma();
            lc.c_b = inst.actions().norm_bound();
            lc.c_w = inst.param_bound();
            lc.delta = cfg.delta;
            lc.horizon = cfg.horizon;
            lc.range_bound = inst.range_bound();
            lc.variant = algo == "linucbw" ? LinUcbVariant::weak : LinUcbVariant::standard;
            Vector ref;
            const Vector* ref_ptr = nullptr;
            if (lc.variant == LinUcbVariant::standard) {
                ref = inst.w_star();
                ref_ptr = &ref;
            } else {
                try {
                    const auto weak = certify_weak_gam(inst);
                    ref = Vector(inst.dim() + 1);
                    ref.head(inst.dim()) = inst.w_star();
                    ref[inst.dim()] = *weak.c_star;
                    ref_ptr = &ref;
                } catch (const NotWeakGamError&) {
                    // no reference parameter to track
                }
            }
            trace = run_linucb(inst, lc, noise, cfg.horizon, ref_ptr);
        } else {
            PhaseConfig pc;
            pc.d = inst.dim();
            pc.horizon = cfg.horizon;
            pc.alpha = cfg.alpha.value_or(PhaseConfig::default_alpha(inst.k(), cfg.horizon));
            if (algo == "pe-unified") {
                pc.variant = PhaseVariant::unified;
                if (!gam_cert.has_value() || gam_cert->kind != MisspecKind::unified ||
                    !gam_cert->eps.has_value())
                    throw ConfigError(
                        "pe-unified requires a unified certificate with field eps; none present");
                pc.eps = gam_cert->eps;
            }
            trace = run_phased_elim(inst, pc, noise, cfg.horizon);
            trace.meta.alpha = pc.alpha;
        }
        trace.meta.seed = seed;
        trace.meta.certificate = gam_cert;
        if (gam_cert.has_value() && gam_cert->rho.has_value())
            trace.meta.assumptions = check_assumptions(inst, cfg.horizon, *gam_cert->rho);
        res.final_regret = trace.final_regret();
        res.switches = trace.switch_count;
        res.batches = trace.batch_count();
        res.coverage_tracked = trace.coverage_tracked;
        res.coverage_ok = trace.coverage_ok;
        for (long c : checkpoints) res.regret_at_checkpoints.push_back(trace.regret_at(c));
        if (!trace_path.empty()) write_trace(trace, trace_path);
    } catch (const std::exception& e) {
        res.failed = true;
        res.error = e.what();
    }
    res.wall_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return res;
}

}  // namespace detail

/*
 * Runs every (algorithm, seed) pair independently, writes one trace file per
 * run plus an aggregating summary.  Runs execute on up to `jobs` threads;
 * results land in a pre-sized vector indexed by run number, so aggregation
 * order (and every output byte) is independent of scheduling.
 */
inline ExperimentSummary run_experiment(const ExperimentConfig& cfg, const std::string& out_dir,
                                        int jobs = 1) {
    const auto t0 = std::chrono::steady_clock::now();
    std::filesystem::create_directories(out_dir);

    std::optional<InstanceFile> loaded;
    if (!cfg.env_path.empty()) {
        loaded = read_instance(cfg.env_path);
    } else {
        auto built = generate_instance(*cfg.recipe);
        loaded = InstanceFile{std::move(built.instance), cfg.recipe->seed, std::nullopt};
    }
    const RewardInstance& inst = loaded->instance;

    std::optional<MisspecCertificate> cert = loaded->certificate;
    if (!cert.has_value()) {
        try {
            cert = certify_gam(inst);
        } catch (const NotGamError&) {
            cert = certify_uniform(inst);
        }
    }

    std::vector<long> checkpoints = cfg.checkpoints.empty() ? default_checkpoints(cfg.horizon)
                                                            : cfg.checkpoints;

    struct Job {
        std::string algo;
        std::uint64_t seed;
        std::string trace_path;
        std::uint64_t run_index;
    };
    std::vector<Job> jobs_list;
    std::uint64_t run_index = 0;
    for (const auto& algo : cfg.algos)
        for (std::uint64_t seed : cfg.seeds) {
            std::ostringstream name;
            name << out_dir << "/" << algo << "-seed" << seed << ".csv";
            jobs_list.push_back({algo, seed, name.str(), run_index++});
        }

    std::vector<RunResult> results(jobs_list.size());
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (;;) {
            const std::size_t i = next.fetch_add(1);
            if (i >= jobs_list.size()) return;
            const Job& job = jobs_list[i];
            results[i] = detail::execute_run(job.algo, job.seed, inst, cert, cfg, checkpoints,
                                             job.trace_path, job.run_index);
        }
    };
    const int nthreads = std::max(1, std::min<int>(jobs, static_cast<int>(jobs_list.size())));
    if (nthreads == 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        pool.reserve(static_cast<std::size_t>(nthreads));
        for (int i = 0; i < nthreads; ++i) pool.emplace_back(worker);
        for (auto& th : pool) th.join();
    }

    ExperimentSummary summary;
    summary.horizon = cfg.horizon;
    summary.checkpoints = checkpoints;
    summary.runs = results;
    for (const auto& algo : cfg.algos) {
        AlgoAggregate agg;
        agg.algo = algo;
        agg.checkpoint_means.assign(checkpoints.size(), 0.0);
        double sum = 0.0, sum2 = 0.0, switches = 0.0, batches = 0.0;
        int covered = 0, tracked = 0;
        for (const auto& r : results) {
            if (r.algo != algo) continue;
            ++agg.runs;
            if (r.failed) {
                ++agg.failures;
                continue;
            }
            sum += r.final_regret;
            sum2 += r.final_regret * r.final_regret;
            switches += static_cast<double>(r.switches);
            batches += r.batches;
            if (r.coverage_tracked) {
                ++tracked;
                if (r.coverage_ok) ++covered;
            }
            for (std::size_t c = 0; c < checkpoints.size() && c < r.regret_at_checkpoints.size();
                 ++c)
                agg.checkpoint_means[c] += r.regret_at_checkpoints[c];
        }
        const int ok = agg.runs - agg.failures;
        if (ok > 0) {
            agg.regret_mean = sum / ok;
            const double var = ok > 1 ? std::max(0.0, (sum2 - ok * agg.regret_mean * agg.regret_mean) / (ok - 1))
                                      : 0.0;
            agg.regret_stderr = ok > 1 ? std::sqrt(var / ok) : 0.0;
            agg.regret_over_sqrt_t = agg.regret_mean / std::sqrt(static_cast<double>(cfg.horizon));
            agg.switches_mean = switches / ok;
            agg.batches_mean = batches / ok;
            for (auto& v : agg.checkpoint_means) v /= ok;
        }
        agg.coverage_tracked = tracked > 0;
        agg.coverage_fraction = tracked > 0 ? static_cast<double>(covered) / tracked : 1.0;
        summary.per_algo.push_back(std::move(agg));
    }
    summary.wall_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return summary;
}

/// Structured key-value summary document.
inline void write_summary(const ExperimentSummary& s, const std::string& path) {
    std::ostringstream os;
    os << "{\n  \"format_version\": " << kSummaryFormatVersion << ",\n";
    os << "  \"horizon\": " << s.horizon << ",\n";
    os << "  \"wall_seconds\": " << fmt17(s.wall_seconds) << ",\n";
    os << "  \"checkpoints\": [";
    for (std::size_t i = 0; i < s.checkpoints.size(); ++i) {
        if (i) os << ", ";
        os << s.checkpoints[i];
    }
    os << "],\n  \"algorithms\": [";
    for (std::size_t a = 0; a < s.per_algo.size(); ++a) {
        const AlgoAggregate& g = s.per_algo[a];
        if (a) os << ",";
        os << "\n    {\"algo\": \"" << g.algo << "\", \"runs\": " << g.runs
           << ", \"failures\": " << g.failures << ", \"regret_mean\": " << fmt17(g.regret_mean)
           << ", \"regret_stderr\": " << fmt17(g.regret_stderr)
           << ", \"regret_over_sqrt_T\": " << fmt17(g.regret_over_sqrt_t)
           << ", \"switches_mean\": " << fmt17(g.switches_mean)
           << ", \"batches_mean\": " << fmt17(g.batches_mean);
        if (g.coverage_tracked) os << ", \"coverage_fraction\": " << fmt17(g.coverage_fraction);
        os << ", \"regret_at_checkpoints\": [";
        for (std::size_t c = 0; c < g.checkpoint_means.size(); ++c) {
            if (c) os << ", ";
            os << fmt17(g.checkpoint_means[c]);
        }
        os << "]}";
    }
    os << "\n  ],\n  \"runs\": [";
    for (std::size_t i = 0; i < s.runs.size(); ++i) {
        const RunResult& r = s.runs[i];
        if (i) os << ",";
        os << "\n    {\"algo\": \"" << r.algo << "\", \"seed\": " << r.seed;
        if (r.failed)
            os << ", \"error\": \"" << r.error << "\"";
        else
            os << ", \"regret\": " << fmt17(r.final_regret) << ", \"switches\": " << r.switches
               << ", \"batches\": " << r.batches;
        os << "}";
    }
    os << "\n  ]\n}\n";
    std::ofstream f(path, std::ios::binary);
    if (!f) throw ConfigError("cannot open for writing: " + path);
    f << os.str();
}

}  // namespace gamband
