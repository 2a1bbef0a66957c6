#pragma once

#include <cmath>
#include <limits>

#include "gamband/errors.hpp"
#include "gamband/linalg.hpp"
#include "gamband/model.hpp"

namespace gamband {

enum class LinUcbVariant { standard, weak };

/*
 * LinUCB configuration.  lambda is derived, never stored: lambda =
 * sigma^2/C_w^2.  The weak variant (LinUCBw) augments every action with a
 * constant coordinate to absorb the global shift c* = f* - f_w*, and its
 * confidence schedule accounts for the augmented parameter bound
 * sqrt(C_w^2 + F^2) with F the reward range bound.
 */
struct LinUcbConfig {
    double sigma = 0.1;
    double c_b = 1.0;
    double c_w = 1.0;
    double delta = 0.05;
    long horizon = 1;
    LinUcbVariant variant = LinUcbVariant::standard;
    double range_bound = 1.0;       // F, used by the weak variant only
    double beta_multiplier = 1.0;   // empirical-studies knob; the analysis uses 1

    double lambda() const { return sigma * sigma / (c_w * c_w); }

    void validate() const {
        if (!(sigma > 0.0)) throw ConfigError("LinUcbConfig: sigma must be > 0");
        if (!(c_b > 0.0) || !(c_w > 0.0)) throw ConfigError("LinUcbConfig: C_b, C_w must be > 0");
        if (!(delta > 0.0 && delta < 1.0)) throw ConfigError("LinUcbConfig: delta must be in (0,1)");
        if (horizon < 1) throw ConfigError("LinUcbConfig: horizon must be >= 1");
        if (!(beta_multiplier > 0.0)) throw ConfigError("LinUcbConfig: beta_multiplier must be > 0");
        if (variant == LinUcbVariant::weak && !(range_bound >= 0.0))
            throw ConfigError("LinUcbConfig: range_bound must be >= 0");
    }
};

/// Confidence radius beta_t.  Standard:
///   8 sigma^2 (1 + d log(1 + t Cb^2 Cw^2/(d sigma^2)) + 2 log(pi^2 t^2/(3 delta))).
/// Weak: the d log term becomes (d+1) log(1 + t Cb^2 (Cw^2 + F^2)/(d sigma^2)).
inline double beta_schedule(long t, const LinUcbConfig& cfg, int d) {
    if (t < 1) throw ConfigError("beta_schedule: t must be >= 1");
    const double s2 = cfg.sigma * cfg.sigma;
    const double pi = 3.14159265358979323846;
    const double tail =
        2.0 * std::log(pi * pi * static_cast<double>(t) * static_cast<double>(t) / (3.0 * cfg.delta));
    double core;
    if (cfg.variant == LinUcbVariant::weak) {
        const double cw2f2 = cfg.c_w * cfg.c_w + cfg.range_bound * cfg.range_bound;
        core = (d + 1) * std::log(1.0 + t * cfg.c_b * cfg.c_b * cw2f2 / (d * s2));
    } else {
        core = d * std::log(1.0 + t * cfg.c_b * cfg.c_b * cfg.c_w * cfg.c_w / (d * s2));
    }
    return cfg.beta_multiplier * 8.0 * s2 * (1.0 + core + tail);
}

/*
 * Algorithm state: ridge covariance, reward accumulator, estimate and the
 * current radius.  select_action evaluates the closed-form optimistic score
 *   ucb(x) = w_hat'x + sqrt(beta_t) ||x||_{Sigma_t^-1},
 * which equals the inner maximization over the confidence ball (the witness
 * w = w_hat + sqrt(beta) Sigma^-1 x / ||x||_{Sigma^-1} is Cauchy-Schwarz
 * tight).  Round t=0 plays action 0: Ball_0 is the whole parameter space,
 * every action ties, and ties break by lowest index.
 */
class LinUcbAgent {
public:
    LinUcbAgent(const LinUcbConfig& cfg, ActionSet actions)
        : cfg_(cfg),
          actions_(std::move(actions)),
          d_(actions_.dim()),
          param_dim_(cfg.variant == LinUcbVariant::weak ? actions.dim() + 1 : actions.dim()),
          cov_(param_dim_, cfg.lambda()),
          xy_accum_(Vector::Zero(param_dim_)),
          w_hat_(Vector::Zero(param_dim_)) {
        cfg_.validate();
    }

    int next_action() const {
        if (t_ == 0) return 0;
        double best = -std::numeric_limits<double>::infinity();
        int arg = 0;
        for (int i = 0; i < actions_.size(); ++i) {
            const double s = ucb_score(i);
            if (s > best) {
                best = s;
                arg = i;
            }
        }
        return arg;
    }

    double ucb_score(int i) const {
        const Vector phi = lift(actions_[i]);
        return w_hat_.dot(phi) + std::sqrt(beta_) * weighted_norm(cov_.inverse(), phi);
    }

    /// Exploration width sqrt(beta_t) ||phi(x)||_{Sigma^-1} alone.
    double exploration_width(int i) const {
        return std::sqrt(beta_) * weighted_norm(cov_.inverse(), lift(actions_[i]));
    }

    void observe(int action, double y) {
        const Vector phi = lift(actions_[action]);
        last_u_ = weighted_norm(cov_.inverse(), phi);  // u_t, before the update
        cov_.rank_one_update(phi);
        xy_accum_ += y * phi;
        w_hat_ = ridge_solve(cov_, xy_accum_);
        ++t_;
        beta_ = beta_schedule(t_, cfg_, d_);
    }

    /// ||w - w_hat||^2_Sigma <= beta_t.  Before any observation the ball is
    /// the whole parameter space.
    bool ball_contains(const Vector& w) const {
        if (t_ == 0) return true;
        if (w.size() != param_dim_) throw ConfigError("ball_contains: dimension mismatch");
        const Vector diff = w - w_hat_;
        return diff.dot(cov_.matrix() * diff) <= beta_;
    }

    long t() const { return t_; }
    double beta() const { return beta_; }
    double last_u() const { return last_u_; }
    int param_dim() const { return param_dim_; }
    const Vector& w_hat() const { return w_hat_; }
    const Vector& xy_accum() const { return xy_accum_; }
    const Covariance& covariance() const { return cov_; }
    const LinUcbConfig& config() const { return cfg_; }

    /// Action feature as scored: identity for standard, (x, 1) for weak.
    Vector lift(const Vector& x) const {
        if (cfg_.variant == LinUcbVariant::standard) return x;
        Vector phi(param_dim_);
        phi.head(d_) = x;
        phi[d_] = 1.0;
        return phi;
    }

private:
    LinUcbConfig cfg_;
    ActionSet actions_;
    int d_, param_dim_;
    Covariance cov_;
    Vector xy_accum_, w_hat_;
    long t_ = 0;
    double beta_ = 0.0;
    double last_u_ = 0.0;
};

}  // namespace gamband
