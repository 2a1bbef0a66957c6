#pragma once

#include <algorithm>
#include <cmath>
#include <optional>
#include <string>
#include <vector>

#include "gamband/errors.hpp"
#include "gamband/linucb.hpp"
#include "gamband/model.hpp"
#include "gamband/phased_elim.hpp"
#include "gamband/rng.hpp"

namespace gamband {

enum class NoiseKind { gaussian, bounded_uniform, none };

inline const char* to_string(NoiseKind k) {
    switch (k) {
        case NoiseKind::gaussian: return "gaussian";
        case NoiseKind::bounded_uniform: return "bounded_uniform";
        case NoiseKind::none: return "none";
    }
    return "unknown";
}

inline NoiseKind noise_kind_from_string(const std::string& s) {
    if (s == "gaussian") return NoiseKind::gaussian;
    if (s == "bounded_uniform") return NoiseKind::bounded_uniform;
    if (s == "none") return NoiseKind::none;
    throw ConfigError("unknown noise kind: " + s);
}

/*
 * Sub-Gaussian observation noise on a counter-based stream keyed by
 * (master seed, run index, step): identical keys give identical draws no
 * matter the execution order.  bounded_uniform draws from [-a, a] with
 * a = sigma sqrt(3) (variance matched to the Gaussian).
 */
struct NoiseModel {
    NoiseKind kind = NoiseKind::gaussian;
    double sigma = 0.0;
    std::uint64_t master_seed = 0;
    std::uint64_t run_index = 0;

    double draw(long step) const {
        if (kind == NoiseKind::none || sigma == 0.0) return 0.0;
        CounterRng rng(master_seed, 0x6e6f6973ULL + run_index);
        if (kind == NoiseKind::gaussian) return sigma * rng.gaussian(static_cast<std::uint64_t>(step));
        const double a = sigma * std::sqrt(3.0);
        return rng.uniform(static_cast<std::uint64_t>(step), -a, a);
    }
};

/// Noisy feedback y_t = f0(x_t) + eta_t.
inline double env_step(const RewardInstance& inst, const NoiseModel& noise, int action, long t) {
    if (action < 0 || action >= inst.k()) throw ConfigError("env_step: invalid action index");
    return inst.true_value(action) + noise.draw(t);
}

struct StepRecord {
    long t = 0;
    int action = 0;
    double reward = 0.0;
    double inst_regret = 0.0;
    double cum_regret = 0.0;
    long switches = 0;
    int phase = 0;  // 0 for LinUCB
};

struct RunMetadata {
    std::string algo;
    std::uint64_t seed = 0;
    long horizon = 0;
    NoiseKind noise_kind = NoiseKind::gaussian;
    double sigma = 0.0;
    double delta = 0.0;
    double alpha = 0.0;
    std::optional<MisspecCertificate> certificate;
    std::optional<AssumptionReport> assumptions;
    double wall_seconds = 0.0;  // reporting only, never serialized into traces
};

/*
 * Per-step run record.  cumulative regret is the prefix sum of the
 * instantaneous regret f* - f0(x_t), the switch counter counts t with
 * x_t != x_{t-1}, and PE batch boundaries are carried both per step (phase
 * column) and as one record per phase.
 */
struct RegretTrace {
    std::vector<StepRecord> steps;
    long switch_count = 0;
    std::vector<PhaseRecord> batch_log;
    std::vector<int> final_active;  // PE only: active set when the horizon ended
    RunMetadata meta;

    // LinUCB diagnostics kept in memory for the audits: u_t as recorded
    // before each update, and the confidence radius the selection used.
    std::vector<double> u_trace;
    std::vector<double> beta_trace;
    bool coverage_tracked = false;
    bool coverage_ok = true;

    double final_regret() const { return steps.empty() ? 0.0 : steps.back().cum_regret; }

    /// Cumulative regret at horizon t (steps are 1-based).
    double regret_at(long t) const {
        if (steps.empty() || t < 1) return 0.0;
        const std::size_t i = std::min<std::size_t>(steps.size(), static_cast<std::size_t>(t));
        return steps[i - 1].cum_regret;
    }

    int batch_count() const { return static_cast<int>(batch_log.size()); }
};

namespace detail {

inline void record_step(RegretTrace& trace, const RewardInstance& inst, long t, int action,
                        double reward, int phase) {
    StepRecord rec;
    rec.t = t;
    rec.action = action;
    rec.reward = reward;
    rec.inst_regret = inst.gap(action);
    rec.cum_regret = (trace.steps.empty() ? 0.0 : trace.steps.back().cum_regret) + rec.inst_regret;
    if (!trace.steps.empty() && trace.steps.back().action != action) ++trace.switch_count;
    rec.switches = trace.switch_count;
    rec.phase = phase;
    trace.steps.push_back(rec);
}

}  // namespace detail

/// Runs LinUCB / LinUCBw for T steps.  When coverage_ref is given (w* for the
/// standard variant, [w*; c*] for the weak one), ball membership is checked
/// after every update.
inline RegretTrace run_linucb(const RewardInstance& inst, const LinUcbConfig& cfg,
                              const NoiseModel& noise, long horizon,
                              const Vector* coverage_ref = nullptr) {
    LinUcbAgent agent(cfg, inst.actions());
    RegretTrace trace;
    trace.meta.algo = cfg.variant == LinUcbVariant::weak ? "linucbw" : "linucb";
    trace.meta.seed = noise.master_seed;
    trace.meta.horizon = horizon;
    trace.meta.noise_kind = noise.kind;
    trace.meta.sigma = noise.sigma;
    trace.meta.delta = cfg.delta;
    trace.coverage_tracked = coverage_ref != nullptr;
    trace.u_trace.reserve(static_cast<std::size_t>(horizon));
    for (long t = 1; t <= horizon; ++t) {
        const int a = agent.next_action();
        const double selection_beta = agent.beta();  // radius the selection used
        const double y = env_step(inst, noise, a, t);
        agent.observe(a, y);
        detail::record_step(trace, inst, t, a, y, 0);
        trace.u_trace.push_back(agent.last_u());
        trace.beta_trace.push_back(selection_beta);
        if (coverage_ref != nullptr && !agent.ball_contains(*coverage_ref))
            trace.coverage_ok = false;
    }
    return trace;
}

/// Runs phased elimination for T steps (the final partial phase plays its
/// allocation in support order until the horizon).
inline RegretTrace run_phased_elim(const RewardInstance& inst, const PhaseConfig& cfg,
                                   const NoiseModel& noise, long horizon,
                                   DesignOptions dopts = {}) {
    PhasedElimAgent agent(cfg, inst.actions(), dopts);
    RegretTrace trace;
    trace.meta.algo = cfg.variant == PhaseVariant::unified ? "pe-unified" : "pe";
    trace.meta.seed = noise.master_seed;
    trace.meta.horizon = horizon;
    trace.meta.noise_kind = noise.kind;
    trace.meta.sigma = noise.sigma;
    trace.meta.alpha = cfg.alpha;
    for (long t = 1; t <= horizon; ++t) {
        const int a = agent.next_action();
        const double y = env_step(inst, noise, a, t);
        agent.observe(a, y);
        detail::record_step(trace, inst, t, a, y, agent.phase_index());
    }
    trace.batch_log = agent.batch_log();
    trace.final_active = agent.active();
    return trace;
}

/// Diagnostic from the gap-dependent analysis: compares the last batch with a
/// positive-regret step to the first batch whose threshold undershoots Delta.
inline GapDiagnosticReport gap_diagnostic(const RegretTrace& trace, const GapProfile& profile,
                                          const PhaseConfig& cfg, long m1) {
    if (!profile.min_positive_gap.has_value())
        throw ConfigError("gap_diagnostic: profile has no positive gap");
    GapDiagnosticReport r;
    r.delta = *profile.min_positive_gap;
    for (const auto& s : trace.steps)
        if (s.inst_regret > 1e-12) r.last_positive_batch = std::max(r.last_positive_batch, s.phase);
    r.predicted_batch = predicted_last_positive_batch(cfg, m1, r.delta);
    r.respected = r.last_positive_batch <= r.predicted_batch;
    return r;
}

enum class GrowthLaw { sqrtT, logT };

/*
 * Growth-rate audit over geometrically spaced checkpoints.  For every pair
 * (T, 4T) present the ratio R(4T)/R(T) of the across-seed mean curve is
 * measured.  sqrtT passes when every ratio is <= 2.5 (pure sqrt gives 2,
 * linear gives 4); logT passes when the ratio at the largest pair is <= 1.6.
 */
struct GrowthAuditReport {
    GrowthLaw law = GrowthLaw::sqrtT;
    bool pass = false;
    double limit = 0.0;
    std::vector<long> checkpoints;
    std::vector<double> mean_regret;
    std::vector<std::pair<long, double>> ratios;  // (T, R(4T)/R(T))
};

inline GrowthAuditReport growth_audit(const std::vector<long>& checkpoints,
                                      const std::vector<double>& mean_regret, GrowthLaw law) {
    if (checkpoints.size() != mean_regret.size())
        throw ConfigError("growth_audit: checkpoint/regret size mismatch");
    GrowthAuditReport r;
    r.law = law;
    r.limit = law == GrowthLaw::sqrtT ? 2.5 : 1.6;
    r.checkpoints = checkpoints;
    r.mean_regret = mean_regret;
    for (std::size_t i = 0; i < checkpoints.size(); ++i) {
        for (std::size_t j = i + 1; j < checkpoints.size(); ++j) {
            if (checkpoints[j] != 4 * checkpoints[i]) continue;
            double ratio;
            if (mean_regret[i] < 1e-12)
                ratio = mean_regret[j] < 1e-12 ? 1.0 : std::numeric_limits<double>::infinity();
            else
                ratio = mean_regret[j] / mean_regret[i];
            r.ratios.emplace_back(checkpoints[i], ratio);
        }
    }
    if (r.ratios.empty()) {
        r.pass = false;
        return r;
    }
    if (law == GrowthLaw::sqrtT) {
        r.pass = true;
        for (const auto& [t, ratio] : r.ratios)
            if (ratio > r.limit) r.pass = false;
    } else {
        r.pass = r.ratios.back().second <= r.limit;
    }
    return r;
}

}  // namespace gamband
