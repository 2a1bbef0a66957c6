#pragma once

#include <algorithm>
#include <cmath>
#include <map>
#include <string>
#include <vector>

#include "gamband/errors.hpp"
#include "gamband/linalg.hpp"
#include "gamband/model.hpp"

namespace gamband {

struct DesignOptions {
    long max_iters = 20000;
    /// Stop once g(pi) <= target_factor * rank.  The default 2 matches the
    /// phase-elimination contract; tighter factors drive Frank-Wolfe toward
    /// the Kiefer-Wolfowitz optimum g = rank.
    double target_factor = 2.0;
    double prune_scale = 1e-6;
    int prune_retries = 20;
    bool track_objective = false;
};

/// G-optimal design over an active subset: weights on action indices,
/// the certified g(pi) = max_x ||x||^2_{V(pi)^+}, and the Gram of V(pi).
struct Design {
    std::map<int, double> weights;
    int support_size = 0;
    double g_value = 0.0;
    int rank = 0;
    DesignGram gram;
    std::vector<double> objective_trace;  // log det V per iteration when tracked
};

namespace detail {

inline Matrix design_gram_matrix(const std::vector<int>& active, const ActionSet& actions,
                                 const std::vector<double>& w) {
    Matrix v = Matrix::Zero(actions.dim(), actions.dim());
    for (std::size_t j = 0; j < active.size(); ++j) {
        if (w[j] <= 0.0) continue;
        const Vector& x = actions[active[j]];
        v.noalias() += w[j] * (x * x.transpose());
    }
    return v;
}

/// max_j ||x_j||^2_{V^+} over the active set; requires every member in span.
inline std::pair<double, int> design_g(const std::vector<int>& active, const ActionSet& actions,
                                       const DesignGram& gram) {
    double g = -1.0;
    int arg = 0;
    for (std::size_t j = 0; j < active.size(); ++j) {
        const double n = gram.span_norm(actions[active[j]]);
        if (n * n > g) {
            g = n * n;
            arg = static_cast<int>(j);
        }
    }
    return {g, arg};
}

}  // namespace detail

/*
 * Frank-Wolfe on log det V(pi), the standard route to a near-G-optimal
 * design.  Each step moves mass toward the action of largest normalized
 * variance with the exact line-search step gamma = (g/r - 1)/(g - 1), r the
 * rank of the active span.  Stops at g(pi) <= target_factor * r; for a
 * spanning active set and the default factor this is the g <= 2d guarantee
 * the elimination analysis consumes.  Afterwards weights below
 * prune_scale/|active| are dropped and the bound re-certified; if pruning
 * broke it the threshold is halved and certification retried.
 */
inline Design solve_design(const std::vector<int>& active, const ActionSet& actions,
                           DesignOptions opts = {}) {
    if (active.empty()) throw ConfigError("solve_design: active set is empty");
    for (int idx : active)
        if (idx < 0 || idx >= actions.size())
            throw ConfigError("solve_design: active index out of range");
    const std::size_t n = active.size();

    std::vector<double> w(n, 1.0 / static_cast<double>(n));
    DesignGram gram(detail::design_gram_matrix(active, actions, w));
    const int rank = gram.rank();
    if (rank == 0) throw DesignFailureError("solve_design: active set spans nothing");
    const double target = opts.target_factor * rank;

    std::vector<double> objective;
    if (opts.track_objective) objective.push_back(gram.log_pseudo_det());

    bool certified = false;
    for (long iter = 0; iter <= opts.max_iters; ++iter) {
        auto [g, arg] = detail::design_g(active, actions, gram);
        if (g <= target + 1e-12) {
            certified = true;
            break;
        }
        if (iter == opts.max_iters) break;
        const double gamma = (g / rank - 1.0) / (g - 1.0);
        for (auto& wj : w) wj *= (1.0 - gamma);
        w[static_cast<std::size_t>(arg)] += gamma;
        gram = DesignGram(detail::design_gram_matrix(active, actions, w));
        if (opts.track_objective) objective.push_back(gram.log_pseudo_det());
    }
    if (!certified)
        throw DesignFailureError("solve_design: iteration budget exhausted before g(pi) <= " +
                                 std::to_string(target));

    // prune, renormalize, re-certify; halve the threshold if the bound broke
    double floor = opts.prune_scale / static_cast<double>(n);
    for (int attempt = 0; attempt < opts.prune_retries; ++attempt, floor *= 0.5) {
        std::vector<double> wp = w;
        double total = 0.0;
        for (auto& wj : wp) {
            if (wj < floor) wj = 0.0;
            total += wj;
        }
        if (total <= 0.0) continue;
        for (auto& wj : wp) wj /= total;
        DesignGram pruned(detail::design_gram_matrix(active, actions, wp));
        if (pruned.rank() < rank) continue;  // dropped a needed direction
        double g;
        try {
            g = detail::design_g(active, actions, pruned).first;
        } catch (const NotInSpanError&) {
            continue;
        }
        if (g > target + 1e-6) continue;

        Design d{.weights = {},
                 .support_size = 0,
                 .g_value = g,
                 .rank = rank,
                 .gram = std::move(pruned),
                 .objective_trace = std::move(objective)};
        for (std::size_t j = 0; j < n; ++j)
            if (wp[j] > 0.0) d.weights.emplace(active[j], wp[j]);
        d.support_size = static_cast<int>(d.weights.size());
        return d;
    }
    throw DesignFailureError("solve_design: pruning could not preserve the certificate");
}

/// Rounded allocation u(x) = ceil(m pi(x)) per support action; the total
/// lands in [m, m + support_size].
inline std::map<int, long> round_allocation(const Design& design, long m) {
    if (m < 1) throw ConfigError("round_allocation: m must be >= 1");
    std::map<int, long> u;
    for (const auto& [idx, wj] : design.weights)
        u.emplace(idx, static_cast<long>(std::ceil(static_cast<double>(m) * wj)));
    return u;
}

}  // namespace gamband
