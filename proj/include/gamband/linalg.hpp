#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <span>
#include <utility>
#include <vector>

#include "gamband/errors.hpp"

namespace gamband {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

/// sqrt(x' M x) for PSD M. Tiny negative quadratic forms from rounding
/// (> -1e-12) are clamped to zero; anything below that is a caller bug.
inline double weighted_norm(const Matrix& psd, const Vector& x) {
    double q = x.dot(psd * x);
    if (q < 0.0) {
        if (q < -1e-12) throw ConfigError("weighted_norm: quadratic form below -1e-12, matrix is not PSD");
        q = 0.0;
    }
    return std::sqrt(q);
}

/*
 * Ridge covariance  Sigma = lambda*I + sum_i x_i x_i'  with its inverse
 * maintained incrementally by the Sherman-Morrison identity.  Every
 * refresh_period updates the inverse is recomputed from scratch and the
 * Frobenius drift of the incremental inverse is recorded.
 */
class Covariance {
public:
    Covariance(int dim, double lambda, int refresh_period = 64)
        : dim_(dim), lambda_(lambda), refresh_period_(refresh_period) {
        if (dim < 1) throw ConfigError("Covariance: dim must be >= 1");
        if (!(lambda > 0.0)) throw ConfigError("Covariance: lambda must be > 0");
        matrix_ = lambda * Matrix::Identity(dim, dim);
        inverse_ = Matrix::Identity(dim, dim) / lambda;
    }

    void rank_one_update(const Vector& x) {
        if (x.size() != dim_) throw ConfigError("Covariance: dimension mismatch in update");
        const Vector ix = inverse_ * x;
        const double denom = 1.0 + x.dot(ix);
        inverse_.noalias() -= (ix * ix.transpose()) / denom;
        matrix_.noalias() += x * x.transpose();
        ++count_;
        if (refresh_period_ > 0 && count_ % refresh_period_ == 0) refresh();
    }

    /// Recompute the inverse from the stored matrix; returns the drift of the
    /// incremental inverse that was just replaced.
    double refresh() {
        Matrix direct = matrix_.llt().solve(Matrix::Identity(dim_, dim_));
        const double drift = (direct - inverse_).norm();
        last_refresh_drift_ = drift;
        max_refresh_drift_ = std::max(max_refresh_drift_, drift);
        inverse_ = std::move(direct);
        return drift;
    }

    int dim() const { return dim_; }
    double lambda() const { return lambda_; }
    long count() const { return count_; }
    const Matrix& matrix() const { return matrix_; }
    const Matrix& inverse() const { return inverse_; }
    double last_refresh_drift() const { return last_refresh_drift_; }
    double max_refresh_drift() const { return max_refresh_drift_; }

private:
    int dim_;
    double lambda_;
    int refresh_period_;
    long count_ = 0;
    Matrix matrix_, inverse_;
    double last_refresh_drift_ = 0.0;
    double max_refresh_drift_ = 0.0;
};

/// Ridge estimate w = Sigma^-1 * (sum_i y_i x_i), the minimizer of
/// lambda*||w||^2 + sum_i (w'x_i - y_i)^2 for the covariance's update history.
inline Vector ridge_solve(const Covariance& cov, const Vector& xy_accum) {
    return cov.inverse() * xy_accum;
}

/*
 * Unregularized design Gram  G = sum_s x_s x_s'  with a span-restricted
 * pseudo-inverse.  Eigenvalues below 1e-10 * lambda_max are treated as zero,
 * so rank deficiency (an active set that does not span R^d) is explicit.
 */
class DesignGram {
public:
    explicit DesignGram(Matrix gram, double cutoff_scale = 1e-10) : matrix_(std::move(gram)) {
        if (matrix_.rows() != matrix_.cols() || matrix_.rows() < 1)
            throw ConfigError("DesignGram: square matrix required");
        Eigen::SelfAdjointEigenSolver<Matrix> es(matrix_);
        if (es.info() != Eigen::Success) throw ConfigError("DesignGram: eigendecomposition failed");
        const Vector& ev = es.eigenvalues();
        const Matrix& vecs = es.eigenvectors();
        const int d = static_cast<int>(matrix_.rows());
        const double cutoff = cutoff_scale * std::max(ev.maxCoeff(), 0.0);
        pinv_ = Matrix::Zero(d, d);
        std::vector<int> kept;
        for (int i = 0; i < d; ++i) {
            if (ev[i] > cutoff && ev[i] > 0.0) {
                pinv_.noalias() += vecs.col(i) * vecs.col(i).transpose() / ev[i];
                kept.push_back(i);
            }
        }
        rank_ = static_cast<int>(kept.size());
        basis_.resize(d, rank_);
        for (int j = 0; j < rank_; ++j) basis_.col(j) = vecs.col(kept[j]);
    }

    int dim() const { return static_cast<int>(matrix_.rows()); }
    int rank() const { return rank_; }
    const Matrix& matrix() const { return matrix_; }
    const Matrix& pinverse() const { return pinv_; }

    bool in_span(const Vector& x, double tol = 1e-8) const {
        return span_residual(x) <= tol;
    }

    /// Distance from x to the column span of G.
    double span_residual(const Vector& x) const {
        if (rank_ == 0) return x.norm();
        const Vector proj = basis_ * (basis_.transpose() * x);
        return (x - proj).norm();
    }

    /// sqrt(x' G^+ x); defined only for x in the column span.
    double span_norm(const Vector& x, double tol = 1e-8) const {
        const double res = span_residual(x);
        if (res > tol)
            throw NotInSpanError(res, "DesignGram: vector has a component outside the span");
        return weighted_norm(pinv_, x);
    }

    /// log of the product of nonzero eigenvalues (pseudo log-determinant).
    double log_pseudo_det() const {
        Eigen::SelfAdjointEigenSolver<Matrix> es(matrix_);
        const Vector& ev = es.eigenvalues();
        const double cutoff = 1e-10 * std::max(ev.maxCoeff(), 0.0);
        double s = 0.0;
        for (int i = 0; i < ev.size(); ++i)
            if (ev[i] > cutoff && ev[i] > 0.0) s += std::log(ev[i]);
        return s;
    }

private:
    Matrix matrix_, pinv_, basis_;
    int rank_ = 0;
};

struct PotentialAuditReport {
    // clamped elliptical potential: sum min(1, u_t^2) <= 2d log(1 + T Cb^2/(d lambda))
    double clamped_sum = 0.0;
    double clamped_bound = 0.0;
    bool clamped_ok = true;
    long first_violation = -1;
    // raw sum audited only when lambda >= Cb^2 (then u_t^2 < 1 always)
    bool raw_audited = false;
    double raw_sum = 0.0;
    bool raw_ok = true;
    // final-matrix bound: sum_i x_i' Sigma_T^-1 x_i <= d
    bool final_audited = false;
    double final_quadratic_sum = 0.0;
    bool final_ok = true;

    bool ok() const { return clamped_ok && raw_ok && final_ok; }
};

/*
 * Audits the elliptical-potential bookkeeping of a run.  u_trace holds
 * u_t = ||x_t||_{Sigma_t^-1} recorded before each update.  The prefix sums
 * are checked against the potential bound at every step so a violation
 * reports the offending index.  When the final covariance and the full
 * action history are supplied, the trace-based bound
 * sum_i x_i' Sigma_T^-1 x_i <= d is verified as well (computed through a
 * direct solve, independent of the incremental inverse).
 */
inline PotentialAuditReport potential_audit(std::span<const double> u_trace, int d, double lambda,
                                            double c_b, const Covariance* final_cov = nullptr,
                                            const std::vector<Vector>* history = nullptr) {
    PotentialAuditReport r;
    const long steps = static_cast<long>(u_trace.size());
    r.clamped_bound = 2.0 * d * std::log(1.0 + steps * c_b * c_b / (d * lambda));
    double clamped = 0.0, raw = 0.0;
    for (long t = 0; t < steps; ++t) {
        const double u2 = u_trace[t] * u_trace[t];
        clamped += std::min(1.0, u2);
        raw += u2;
        const double bound_t = 2.0 * d * std::log(1.0 + (t + 1) * c_b * c_b / (d * lambda));
        if (clamped > bound_t + 1e-9 && r.first_violation < 0) {
            r.first_violation = t;
            r.clamped_ok = false;
        }
    }
    r.clamped_sum = clamped;
    r.raw_sum = raw;
    if (lambda >= c_b * c_b) {
        r.raw_audited = true;
        r.raw_ok = raw <= r.clamped_bound + 1e-9;
    }
    if (final_cov != nullptr && history != nullptr) {
        r.final_audited = true;
        const Matrix inv =
            final_cov->matrix().llt().solve(Matrix::Identity(final_cov->dim(), final_cov->dim()));
        double s = 0.0;
        for (const Vector& x : *history) s += x.dot(inv * x);
        r.final_quadratic_sum = s;
        r.final_ok = s <= d + 1e-9;
    }
    return r;
}

}  // namespace gamband
