#pragma once

#include <cmath>
#include <limits>
#include <optional>
#include <vector>

#include "gamband/design.hpp"
#include "gamband/errors.hpp"
#include "gamband/linalg.hpp"
#include "gamband/model.hpp"

namespace gamband {

enum class PhaseVariant { gam, unified };

/*
 * Phase-elimination configuration.  alpha defaults to 1/(kT) and is
 * computed from the configured horizon even when the run truncates earlier.
 * The unified variant widens the elimination threshold by 12 sqrt(2d) eps
 * for instances certified at (rho, eps).
 */
struct PhaseConfig {
    double alpha = 1e-4;
    long horizon = 1;
    PhaseVariant variant = PhaseVariant::gam;
    std::optional<double> eps;
    int d = 1;

    static double default_alpha(int k, long horizon) {
        return 1.0 / (static_cast<double>(k) * static_cast<double>(horizon));
    }

    void validate() const {
        if (!(alpha > 0.0 && alpha < 1.0)) throw ConfigError("PhaseConfig: alpha must be in (0,1)");
        if (horizon < 1) throw ConfigError("PhaseConfig: horizon must be >= 1");
        if (d < 1) throw ConfigError("PhaseConfig: d must be >= 1");
        if (variant == PhaseVariant::unified && !eps.has_value())
            throw ConfigError("PhaseConfig: unified variant requires eps");
        if (eps.has_value() && *eps < 0.0) throw ConfigError("PhaseConfig: eps must be >= 0");
    }
};

/// First phase budget m = max(0, ceil(4 d ln ln d)) + 16.  The first term is
/// zero for d <= 2 where ln ln d is undefined or negative.
inline long initial_m(int d) {
    if (d < 1) throw ConfigError("initial_m: d must be >= 1");
    long first = 0;
    if (d >= 3) {
        const double v = std::ceil(4.0 * d * std::log(std::log(static_cast<double>(d))));
        if (v > 0.0) first = static_cast<long>(v);
    }
    return first + 16;
}

/// Elimination threshold for a phase with budget m:
///   gam:     16 sqrt((d/m) log(1/alpha))
///   unified: 16 sqrt((d/m) log(1/alpha)) + 12 sqrt(2d) eps
inline double elimination_threshold(const PhaseConfig& cfg, long m) {
    const double base =
        16.0 * std::sqrt((static_cast<double>(cfg.d) / static_cast<double>(m)) *
                         std::log(1.0 / cfg.alpha));
    if (cfg.variant == PhaseVariant::unified)
        return base + 12.0 * std::sqrt(2.0 * cfg.d) * *cfg.eps;
    return base;
}

/// One record per phase, serialized into the trace file.
struct PhaseRecord {
    int phase_index = 0;
    long m = 0;
    std::vector<int> support;
    long planned_steps = 0;
    long played_steps = 0;
    int eliminated = 0;
    double g_value = 0.0;
    double threshold = 0.0;
    int active_size = 0;
    /// max_b m ||b||^2_{G^+} over the active set after rounding; the analysis
    /// needs this <= 2d.
    double rounded_norm_bound = 0.0;
    bool rounded_norm_ok = true;
};

/*
 * Phased elimination agent.  Each phase solves the G-optimal design over the
 * active set, plays the rounded allocation u(x) = ceil(m pi(x)) in ascending
 * action order, estimates w from that phase's data alone through the design
 * Gram pseudo-inverse, and eliminates every action whose estimated gap
 * max_b w'(b - x) strictly exceeds the threshold (equality retains).  The
 * budget then doubles.  A horizon that ends mid-phase simply stops the
 * allocation; a partial phase never eliminates.
 */
class PhasedElimAgent {
public:
    PhasedElimAgent(const PhaseConfig& cfg, ActionSet actions, DesignOptions dopts = {})
        : cfg_(cfg), actions_(std::move(actions)), dopts_(dopts) {
        cfg_.validate();
        if (cfg_.d != actions_.dim()) throw ConfigError("PhasedElimAgent: cfg.d != actions dim");
        active_.resize(static_cast<std::size_t>(actions_.size()));
        for (int i = 0; i < actions_.size(); ++i) active_[static_cast<std::size_t>(i)] = i;
        m_ = initial_m(actions_.dim());
    }

    int next_action() {
        if (block_ >= blocks_.size()) start_phase();
        return blocks_[block_].first;
    }

    void observe(int action, double y) {
        const Vector& x = actions_[action];
        gram_.noalias() += x * x.transpose();
        xy_ += y * x;
        ++batch_log_.back().played_steps;
        if (--blocks_[block_].second == 0) ++block_;
    }

    const std::vector<int>& active() const { return active_; }
    const std::vector<PhaseRecord>& batch_log() const { return batch_log_; }
    const Vector& w_hat() const { return w_hat_; }
    int phase_index() const { return phase_index_; }
    long m() const { return m_; }

private:
    void start_phase() {
        if (!batch_log_.empty()) finalize_phase();
        Design design = solve_design(active_, actions_, dopts_);
        auto alloc = round_allocation(design, m_);

        PhaseRecord rec;
        rec.phase_index = phase_index_;
        rec.m = m_;
        rec.g_value = design.g_value;
        rec.threshold = elimination_threshold(cfg_, m_);
        rec.active_size = static_cast<int>(active_.size());
        blocks_.clear();
        block_ = 0;
        for (const auto& [idx, count] : alloc) {
            blocks_.emplace_back(idx, count);
            rec.support.push_back(idx);
            rec.planned_steps += count;
        }

        // audit the rounded Gram: m ||b||^2_{G^+} <= 2d over the active set
        Matrix g = Matrix::Zero(actions_.dim(), actions_.dim());
        for (const auto& [idx, count] : alloc) {
            const Vector& x = actions_[idx];
            g.noalias() += static_cast<double>(count) * (x * x.transpose());
        }
        DesignGram rounded(g);
        double worst = 0.0;
        for (int idx : active_) {
            const double n = rounded.span_norm(actions_[idx]);
            worst = std::max(worst, static_cast<double>(m_) * n * n);
        }
        rec.rounded_norm_bound = worst;
        rec.rounded_norm_ok = worst <= 2.0 * cfg_.d + 1e-9;

        batch_log_.push_back(std::move(rec));
        gram_ = Matrix::Zero(actions_.dim(), actions_.dim());
        xy_ = Vector::Zero(actions_.dim());
    }

    void finalize_phase() {
        DesignGram g(gram_);
        w_hat_ = g.pinverse() * xy_;
        double max_value = -std::numeric_limits<double>::infinity();
        for (int idx : active_) max_value = std::max(max_value, w_hat_.dot(actions_[idx]));
        const double threshold = batch_log_.back().threshold;
        std::vector<int> keep;
        keep.reserve(active_.size());
        for (int idx : active_)
            if (max_value - w_hat_.dot(actions_[idx]) <= threshold) keep.push_back(idx);
        batch_log_.back().eliminated = static_cast<int>(active_.size() - keep.size());
        active_ = std::move(keep);
        m_ *= 2;
        ++phase_index_;
    }

    PhaseConfig cfg_;
    ActionSet actions_;
    DesignOptions dopts_;
    std::vector<int> active_;
    long m_ = 16;
    int phase_index_ = 1;
    std::vector<std::pair<int, long>> blocks_;
    std::size_t block_ = 0;
    Matrix gram_;
    Vector xy_;
    Vector w_hat_;
    std::vector<PhaseRecord> batch_log_;
};

/// Gap-dependent diagnostic (reported, not asserted): the last batch that saw
/// a positive-regret step against the smallest i with
/// 16 sqrt((d/m_i) log(1/alpha)) <= Delta, m_i = m_1 2^(i-1).
struct GapDiagnosticReport {
    int last_positive_batch = 0;   // 0 when no positive-regret step exists
    int predicted_batch = 0;
    bool respected = false;
    double delta = 0.0;
};

inline int predicted_last_positive_batch(const PhaseConfig& cfg, long m1, double delta) {
    if (!(delta > 0.0)) throw ConfigError("predicted_last_positive_batch: delta must be > 0");
    PhaseConfig base = cfg;
    base.variant = PhaseVariant::gam;
    long m = m1;
    for (int i = 1; i <= 64; ++i) {
        if (elimination_threshold(base, m) <= delta) return i;
        if (m > (1L << 55)) break;
        m *= 2;
    }
    return 64;
}

}  // namespace gamband
