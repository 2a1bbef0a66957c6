#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "gamband/errors.hpp"
#include "gamband/linalg.hpp"
#include "gamband/rng.hpp"

namespace gamband {

/*
 * Finite action set: k feature vectors in R^d with a common norm bound C_b.
 * Indices are stable and 0-based; duplicates are rejected at construction.
 */
class ActionSet {
public:
    ActionSet(std::vector<Vector> actions, double norm_bound)
        : actions_(std::move(actions)), norm_bound_(norm_bound) {
        if (actions_.empty()) throw ConfigError("ActionSet: need at least one action");
        dim_ = static_cast<int>(actions_[0].size());
        if (dim_ < 1) throw ConfigError("ActionSet: dimension must be >= 1");
        for (const auto& x : actions_) {
            if (x.size() != dim_) throw ConfigError("ActionSet: inconsistent action dimensions");
            if (x.norm() > norm_bound_ + 1e-12)
                throw ConfigError("ActionSet: action norm exceeds the bound");
        }
        for (std::size_t i = 0; i < actions_.size(); ++i)
            for (std::size_t j = i + 1; j < actions_.size(); ++j)
                if ((actions_[i] - actions_[j]).norm() <= 1e-12)
                    throw ConfigError("ActionSet: duplicate actions at indices " +
                                      std::to_string(i) + " and " + std::to_string(j));
    }

    int dim() const { return dim_; }
    int size() const { return static_cast<int>(actions_.size()); }
    double norm_bound() const { return norm_bound_; }
    const Vector& operator[](int i) const { return actions_[static_cast<std::size_t>(i)]; }
    const std::vector<Vector>& actions() const { return actions_; }

private:
    std::vector<Vector> actions_;
    double norm_bound_;
    int dim_;
};

/*
 * A misspecified bandit instance: tabulated true rewards f0 over the action
 * set together with the linear proxy parameter w_star, the noise scale and
 * the range bound F on max |f0(x) - f0(x~)|.  Immutable after construction.
 */
class RewardInstance {
public:
    RewardInstance(ActionSet actions, Vector f0, Vector w_star, double param_bound, double sigma,
                   double range_bound = 1.0)
        : actions_(std::move(actions)),
          f0_(std::move(f0)),
          w_star_(std::move(w_star)),
          param_bound_(param_bound),
          sigma_(sigma),
          range_bound_(range_bound) {
        if (f0_.size() != actions_.size()) throw ConfigError("RewardInstance: f0 size != k");
        if (w_star_.size() != actions_.dim()) throw ConfigError("RewardInstance: w_star size != d");
        if (sigma_ < 0.0) throw ConfigError("RewardInstance: sigma must be >= 0");
        if (w_star_.norm() > param_bound_ + 1e-12)
            throw ConfigError("RewardInstance: ||w_star|| exceeds param_bound");
        if (f0_.maxCoeff() - f0_.minCoeff() > range_bound_ + 1e-12)
            throw ConfigError("RewardInstance: f0 range exceeds range_bound");
        proxy_.resize(actions_.size());
        for (int i = 0; i < actions_.size(); ++i) proxy_[i] = w_star_.dot(actions_[i]);
        f_star_ = f0_.maxCoeff();
    }

    const ActionSet& actions() const { return actions_; }
    const Vector& f0() const { return f0_; }
    const Vector& w_star() const { return w_star_; }
    double param_bound() const { return param_bound_; }
    double sigma() const { return sigma_; }
    double range_bound() const { return range_bound_; }
    int k() const { return actions_.size(); }
    int dim() const { return actions_.dim(); }

    double f_star() const { return f_star_; }
    double true_value(int i) const { return f0_[i]; }
    double proxy_value(int i) const { return proxy_[i]; }
    /// Deviation Delta(x) = f0(x) - w_star'x of the truth from the proxy.
    double deviation(int i) const { return f0_[i] - proxy_[i]; }
    double gap(int i) const { return f_star_ - f0_[i]; }

    std::vector<int> optimal_indices(double tol = 1e-9) const {
        std::vector<int> out;
        for (int i = 0; i < k(); ++i)
            if (gap(i) <= tol) out.push_back(i);
        return out;
    }

private:
    ActionSet actions_;
    Vector f0_, w_star_, proxy_;
    double param_bound_, sigma_, range_bound_, f_star_;
};

enum class MisspecKind { realizable, uniform, gam, weak_gam, unified };

inline const char* to_string(MisspecKind k) {
    switch (k) {
        case MisspecKind::realizable: return "realizable";
        case MisspecKind::uniform: return "uniform";
        case MisspecKind::gam: return "gam";
        case MisspecKind::weak_gam: return "weak_gam";
        case MisspecKind::unified: return "unified";
    }
    return "unknown";
}

inline MisspecKind misspec_kind_from_string(const std::string& s) {
    if (s == "realizable") return MisspecKind::realizable;
    if (s == "uniform") return MisspecKind::uniform;
    if (s == "gam") return MisspecKind::gam;
    if (s == "weak_gam") return MisspecKind::weak_gam;
    if (s == "unified") return MisspecKind::unified;
    throw ConfigError("unknown misspecification kind: " + s);
}

/// Which misspecification definition an instance satisfies, with minimal
/// parameters.  rho is present for gam/weak_gam/unified, eps for
/// uniform/unified, c_star for weak_gam.
struct MisspecCertificate {
    MisspecKind kind = MisspecKind::realizable;
    std::optional<double> rho;
    std::optional<double> eps;
    std::optional<double> c_star;
    double tolerance = 0.0;
};

struct GapProfile {
    Vector gaps;
    std::optional<double> min_positive_gap;
};

/// Suboptimality gaps f* - f0(x) per action; min_positive_gap is set when
/// any gap exceeds 1e-12.
inline GapProfile gap_profile(const RewardInstance& inst) {
    GapProfile p;
    p.gaps.resize(inst.k());
    double minpos = std::numeric_limits<double>::infinity();
    for (int i = 0; i < inst.k(); ++i) {
        p.gaps[i] = inst.gap(i);
        if (p.gaps[i] > 1e-12) minpos = std::min(minpos, p.gaps[i]);
    }
    if (std::isfinite(minpos)) p.min_positive_gap = minpos;
    return p;
}

/*
 * Minimal rho such that |w'x - f0(x)| <= rho (f* - f0(x)) for all actions.
 * Actions with gap <= tol count as maximizers and must agree with the proxy
 * exactly (the ratio is 0/0 there, and preservation of the max value forces
 * agreement).  Fails when agreement is violated or the minimal rho is >= 1.
 */
inline MisspecCertificate certify_gam(const RewardInstance& inst, double tol = 1e-9) {
    double rho = 0.0;
    int worst = -1;
    for (int i = 0; i < inst.k(); ++i) {
        const double gap = inst.gap(i);
        const double dev = std::abs(inst.deviation(i));
        if (gap <= tol) {
            if (dev > tol)
                throw NotGamError(i, dev, "certify_gam: proxy disagrees with f0 at a maximizer");
        } else if (dev / gap > rho) {
            rho = dev / gap;
            worst = i;
        }
    }
    if (rho >= 1.0)
        throw NotGamError(worst, rho, "certify_gam: minimal feasible rho is >= 1");
    MisspecCertificate c;
    c.kind = MisspecKind::gam;
    c.rho = rho;
    c.tolerance = tol;
    return c;
}

/// eps = max_x |w'x - f0(x)|; always exists on a finite set.
inline MisspecCertificate certify_uniform(const RewardInstance& inst) {
    double eps = 0.0;
    for (int i = 0; i < inst.k(); ++i) eps = std::max(eps, std::abs(inst.deviation(i)));
    MisspecCertificate c;
    c.kind = MisspecKind::uniform;
    c.eps = eps;
    return c;
}

/*
 * Shift-invariant variant: with f_w* = max_x w'x and c* = f* - f_w*, the
 * certified ratio uses the shifted deviation |w'x - f_w* + f* - f0(x)|.
 * Maximizers must satisfy the shifted agreement within tol.
 */
inline MisspecCertificate certify_weak_gam(const RewardInstance& inst, double tol = 1e-9) {
    double fw_star = -std::numeric_limits<double>::infinity();
    for (int i = 0; i < inst.k(); ++i) fw_star = std::max(fw_star, inst.proxy_value(i));
    const double c_star = inst.f_star() - fw_star;
    double rho = 0.0;
    int worst = -1;
    for (int i = 0; i < inst.k(); ++i) {
        const double gap = inst.gap(i);
        const double num = std::abs(inst.proxy_value(i) - fw_star + gap);
        if (gap <= tol) {
            if (num > tol)
                throw NotWeakGamError(i, num,
                                      "certify_weak_gam: shifted proxy disagrees at a maximizer");
        } else if (num / gap > rho) {
            rho = num / gap;
            worst = i;
        }
    }
    if (rho >= 1.0)
        throw NotWeakGamError(worst, rho, "certify_weak_gam: minimal feasible rho is >= 1");
    MisspecCertificate c;
    c.kind = MisspecKind::weak_gam;
    c.rho = rho;
    c.c_star = c_star;
    c.tolerance = tol;
    return c;
}

/// Minimal eps such that |w'x - f0(x)| <= rho (f* - f0(x)) + eps holds
/// everywhere, for the given rho in [0, 1).
inline MisspecCertificate certify_unified(const RewardInstance& inst, double rho) {
    if (!(rho >= 0.0 && rho < 1.0)) throw ConfigError("certify_unified: rho must be in [0, 1)");
    double eps = 0.0;
    for (int i = 0; i < inst.k(); ++i) {
        const double excess = std::abs(inst.deviation(i)) - rho * inst.gap(i);
        if (excess > eps) eps = excess;
    }
    MisspecCertificate c;
    c.kind = MisspecKind::unified;
    c.rho = rho;
    c.eps = eps;
    return c;
}

struct GamConstruction {
    RewardInstance instance;
    /// w'x was constant over the actions, so the band is empty and the
    /// instance is realizable.  Flagged, not fatal.
    bool degenerate_proxy = false;
};

/*
 * Builds f0(x) = w'x + c(x) L(x) with L(x) = w'(x* - x) >= 0 and c(x) drawn
 * uniformly from [-rho/(1-rho), rho/(1+rho)], the tightest band the
 * deviation of a rho-GAM instance can occupy.  Deterministic given the seed.
 * If the realized range of f0 exceeds range_bound, both f0 and w_star are
 * scaled by the same positive factor, which preserves every ratio.
 */
inline GamConstruction make_gam_instance(const ActionSet& actions, const Vector& w_star,
                                         double target_rho, std::uint64_t seed, double sigma = 0.1,
                                         double range_bound = 1.0) {
    if (!(target_rho >= 0.0 && target_rho < 1.0))
        throw ConfigError("make_gam_instance: target_rho must be in [0, 1)");
    if (w_star.size() != actions.dim())
        throw ConfigError("make_gam_instance: w_star dimension mismatch");
    const int k = actions.size();
    Vector proxy(k);
    for (int i = 0; i < k; ++i) proxy[i] = w_star.dot(actions[i]);
    const double pmax = proxy.maxCoeff();

    double max_l = 0.0;
    for (int i = 0; i < k; ++i) max_l = std::max(max_l, pmax - proxy[i]);
    const bool degenerate = max_l <= 1e-14 * std::max(1.0, std::abs(pmax));

    const double lo = -target_rho / (1.0 - target_rho);
    const double hi = target_rho / (1.0 + target_rho);
    CounterRng rng(seed, 0x67616d);
    Vector coeff(k), f0(k);
    for (int i = 0; i < k; ++i) {
        coeff[i] = rng.uniform(static_cast<std::uint64_t>(i), lo, hi);
        f0[i] = proxy[i] + coeff[i] * (pmax - proxy[i]);
    }

    Vector w = w_star;
    const double range = f0.maxCoeff() - f0.minCoeff();
    if (range > range_bound) {
        // rebuild f0 from the scaled proxy so agreement at maximizers stays exact
        w *= range_bound / range;
        Vector sproxy(k);
        for (int i = 0; i < k; ++i) sproxy[i] = w.dot(actions[i]);
        const double spmax = sproxy.maxCoeff();
        for (int i = 0; i < k; ++i) f0[i] = sproxy[i] + coeff[i] * (spmax - sproxy[i]);
    }
    RewardInstance inst(actions, std::move(f0), w, w.norm(), sigma, range_bound);
    return GamConstruction{std::move(inst), degenerate};
}

/// rho ceiling under which the LinUCB analysis goes through; shrinks with
/// the dimension and log of the horizon.
inline double assumption3_bound(int d, long horizon, double c_b, double c_w, double sigma) {
    return 1.0 / (8.0 * d *
                  std::sqrt(std::log(1.0 + horizon * c_b * c_b * c_w * c_w / (d * sigma * sigma))));
}

/// constant rho ceiling under which phased elimination stays sound.
inline double assumption4_bound(int d) { return 1.0 / (16.0 * std::sqrt(static_cast<double>(d))); }

/// Advisory report: experiments may run with either assumption violated, but
/// the report travels with the trace metadata.
struct AssumptionReport {
    double rho = 0.0;
    long horizon = 0;
    double a3_bound = 0.0;
    bool a3_holds = false;
    double a4_bound = 0.0;
    bool a4_holds = false;
};

inline AssumptionReport check_assumptions(const RewardInstance& inst, long horizon, double rho) {
    AssumptionReport r;
    r.rho = rho;
    r.horizon = horizon;
    r.a3_bound =
        assumption3_bound(inst.dim(), horizon, inst.actions().norm_bound(), inst.param_bound(),
                          inst.sigma());
    r.a3_holds = rho < r.a3_bound;
    r.a4_bound = assumption4_bound(inst.dim());
    r.a4_holds = rho <= r.a4_bound;
    return r;
}

}  // namespace gamband
