#ifndef DCLOCATE_FERMAT_TORRICELLI_HPP
#define DCLOCATE_FERMAT_TORRICELLI_HPP

#include <cmath>
#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "dclocate/dca.hpp"
#include "dclocate/errors.hpp"
#include "dclocate/gauge.hpp"
#include "dclocate/rng.hpp"

namespace dclocate {

// Anchor points a^i (rows) with nonzero signed weights c_i. Positive weights
// form the index set I (alpha_i = c_i), negative ones J (beta_j = -c_j).
class WeightedAnchors {
public:
    WeightedAnchors(Matrix anchors, Vector weights)
        : anchors_(std::move(anchors)), weights_(std::move(weights)) {
        if (anchors_.rows() < 1 || anchors_.cols() < 1)
            throw ValidationError("at least one anchor of dimension >= 1 is required");
        if (weights_.size() != anchors_.rows())
            throw ValidationError("expected " + std::to_string(anchors_.rows()) +
                                  " weights, got " + std::to_string(weights_.size()));
        if (!anchors_.allFinite() || !weights_.allFinite())
            throw ValidationError("anchors and weights must be finite");
        for (Eigen::Index i = 0; i < weights_.size(); ++i) {
            if (weights_[i] == 0.0)
                throw ValidationError("anchor " + std::to_string(i) + " has zero weight");
            if (weights_[i] > 0.0) {
                positive_.push_back(i);
                alpha_sum_ += weights_[i];
            } else {
                negative_.push_back(i);
                beta_sum_ -= weights_[i];
            }
        }
    }

    const Matrix& anchors() const noexcept { return anchors_; }
    const Vector& weights() const noexcept { return weights_; }
    Eigen::Index size() const noexcept { return anchors_.rows(); }
    Eigen::Index dim() const noexcept { return anchors_.cols(); }

    const std::vector<Eigen::Index>& positive_indices() const noexcept { return positive_; }
    const std::vector<Eigen::Index>& negative_indices() const noexcept { return negative_; }
    double alpha_sum() const noexcept { return alpha_sum_; }
    double beta_sum() const noexcept { return beta_sum_; }

    // Weighted centroid of the positive-weight anchors.
    Vector positive_centroid() const {
        require_positive_part();
        Vector sum = Vector::Zero(dim());
        for (auto i : positive_) sum += weights_[i] * anchors_.row(i).transpose();
        return sum / alpha_sum_;
    }

    void require_positive_part() const {
        if (positive_.empty())
            throw ConfigurationError("no positive weights: the convex part g_mu is empty");
    }

private:
    Matrix anchors_;
    Vector weights_;
    std::vector<Eigen::Index> positive_;
    std::vector<Eigen::Index> negative_;
    double alpha_sum_ = 0.0;
    double beta_sum_ = 0.0;
};

enum class FtVariant {
    PartialSmoothing = 3,  // smooth the positive part only
    FullSmoothing = 4,     // smooth both parts
};

namespace detail {

inline void check_ft_dims(const WeightedAnchors& W, const GaugeBall& F, Eigen::Index n) {
    if (W.dim() != F.dim() || n != F.dim())
        throw ContractError("anchor, gauge and point dimensions disagree");
}

}  // namespace detail

// f(x) = sum_i c_i rho_F(x - a^i).
inline double ft_objective(const WeightedAnchors& W, const GaugeBall& F, const Vector& x) {
    detail::check_ft_dims(W, F, x.size());
    long double total = 0.0L;
    for (Eigen::Index i = 0; i < W.size(); ++i)
        total += W.weights()[i] * gauge_value(F, x - W.anchors().row(i).transpose());
    return static_cast<double>(total);
}

// gamma1 * sum(alpha) - gamma2 * sum(beta). Positive means f and f_mu
// attain their minima.
inline double coercivity_margin(const WeightedAnchors& W, const GaugeBall& F) {
    const auto radii = inradius_circumradius(F);
    return radii.inradius * W.alpha_sum() - radii.circumradius * W.beta_sum();
}

// f_mu for either variant. The smoothed gauge is evaluated in its
// supremum form, which stays accurate for tiny mu.
inline double ft_smoothed_objective(const WeightedAnchors& W, const GaugeBall& F, double mu,
                                    FtVariant variant, const Vector& x) {
    detail::require_mu(mu);
    detail::check_ft_dims(W, F, x.size());
    Vector diff(x.size());
    Vector p(x.size());
    long double total = 0.0L;
    for (Eigen::Index i = 0; i < W.size(); ++i) {
        diff = x - W.anchors().row(i).transpose();
        const double c = W.weights()[i];
        double term;
        if (c < 0.0 && variant == FtVariant::PartialSmoothing) {
            term = gauge_value(F, diff);
        } else {
            p = diff / mu;
            project_onto_polar(F, p);
            term = smoothed_value_from_projection(diff, p, mu);
        }
        total += c * term;
    }
    return static_cast<double>(total);
}

// u = sum_I alpha_i [ (x - a^i)/mu - P((x - a^i)/mu; F°) ], the gradient of
// the smoothed positive part of h.
inline Vector ft_positive_part_gradient(const WeightedAnchors& W, const GaugeBall& F, double mu,
                                        const Vector& x) {
    detail::require_mu(mu);
    detail::check_ft_dims(W, F, x.size());
    Vector u = Vector::Zero(x.size());
    Vector z(x.size());
    for (auto i : W.positive_indices()) {
        z = (x - W.anchors().row(i).transpose()) / mu;
        u += W.weights()[i] * z;
        project_onto_polar(F, z);
        u -= W.weights()[i] * z;
    }
    return u;
}

// y = u + v with v = sum_J beta_j * (selected subgradient of rho_F at x - a^j).
inline Vector alg3_h_subgradient(const WeightedAnchors& W, const GaugeBall& F, double mu,
                                 const Vector& x) {
    Vector y = ft_positive_part_gradient(W, F, mu, x);
    for (auto j : W.negative_indices())
        y -= W.weights()[j] * gauge_subgradient(F, x - W.anchors().row(j).transpose());
    return y;
}

// y = u + v with v = sum_J beta_j P((x - a^j)/mu; F°).
inline Vector alg4_h_gradient(const WeightedAnchors& W, const GaugeBall& F, double mu,
                              const Vector& x) {
    Vector y = ft_positive_part_gradient(W, F, mu, x);
    Vector z(x.size());
    for (auto j : W.negative_indices()) {
        z = (x - W.anchors().row(j).transpose()) / mu;
        project_onto_polar(F, z);
        y -= W.weights()[j] * z;
    }
    return y;
}

// Minimizer of g_mu(x) - <y, x>:
//   x = (y + sum_I alpha_i a^i / mu) / (sum_I alpha_i / mu).
inline Vector ft_g_star_update(const WeightedAnchors& W, double mu, const Vector& y) {
    detail::require_mu(mu);
    W.require_positive_part();
    if (y.size() != W.dim()) throw ContractError("dual vector dimension mismatch");
    Vector weighted = Vector::Zero(W.dim());
    for (auto i : W.positive_indices()) weighted += W.weights()[i] * W.anchors().row(i).transpose();
    return (mu * y + weighted) / W.alpha_sum();
}

// grad g_mu(x) = sum_I alpha_i (x - a^i) / mu.
inline Vector ft_g_gradient(const WeightedAnchors& W, double mu, const Vector& x) {
    detail::require_mu(mu);
    Vector g = Vector::Zero(x.size());
    for (auto i : W.positive_indices())
        g += W.weights()[i] * (x - W.anchors().row(i).transpose()) / mu;
    return g;
}

// The generalized Fermat-Torricelli problem as a DcProblem.
class FermatTorricelliProblem {
public:
    using State = Vector;

    FermatTorricelliProblem(const WeightedAnchors& anchors, GaugeBall gauge, FtVariant variant,
                            double mu = 0.1)
        : anchors_(&anchors), gauge_(gauge), variant_(variant) {
        if (anchors.dim() != gauge.dim())
            throw ContractError("anchor and gauge dimensions disagree");
        anchors.require_positive_part();
        weighted_sum_ = Vector::Zero(anchors.dim());
        for (auto i : anchors.positive_indices())
            weighted_sum_ += anchors.weights()[i] * anchors.anchors().row(i).transpose();
        set_mu(mu);
    }

    State h_subgradient(const State& x) const {
        return variant_ == FtVariant::PartialSmoothing ? alg3_h_subgradient(*anchors_, gauge_, mu_, x)
                                                       : alg4_h_gradient(*anchors_, gauge_, mu_, x);
    }

    State g_star_gradient(const State& y) const {
        return (mu_ * y + weighted_sum_) / anchors_->alpha_sum();
    }

    double true_objective(const State& x) const { return ft_objective(*anchors_, gauge_, x); }

    double smoothed_objective(const State& x) const {
        return ft_smoothed_objective(*anchors_, gauge_, mu_, variant_, x);
    }

    double mu() const noexcept { return mu_; }

    void set_mu(double mu) {
        detail::require_mu(mu);
        mu_ = mu;
    }

    FtVariant variant() const noexcept { return variant_; }
    const GaugeBall& gauge() const noexcept { return gauge_; }

private:
    const WeightedAnchors* anchors_;
    GaugeBall gauge_;
    FtVariant variant_;
    Vector weighted_sum_;
    double mu_ = 0.1;
};

// Algorithm 3 or 4 under the mu-continuation schedule.
inline SolveReport<Vector> ft_solve(const WeightedAnchors& W, const GaugeBall& F, FtVariant variant,
                                    const SmoothingSchedule& sched, const StopRule& stop,
                                    const Vector& x0) {
    detail::check_ft_dims(W, F, x0.size());
    FermatTorricelliProblem problem(W, F, variant, sched.mu0);
    auto report = continuation_run(problem, x0, sched, stop);
    const double margin = coercivity_margin(W, F);
    if (margin <= 0.0)
        report.warnings.push_back("coercivity margin " + std::to_string(margin) +
                                  " <= 0: a minimizer is not guaranteed to exist");
    return report;
}

// Start 0 is the positive weighted centroid; later starts are uniform
// draws from the anchors' bounding box.
inline Vector ft_start_point(const WeightedAnchors& W, std::size_t start, SplitMix64& rng) {
    if (start == 0) return W.positive_centroid();
    const Vector lo = W.anchors().colwise().minCoeff().transpose();
    const Vector hi = W.anchors().colwise().maxCoeff().transpose();
    Vector x(W.dim());
    for (Eigen::Index d = 0; d < x.size(); ++d) x[d] = rng.uniform(lo[d], hi[d]);
    return x;
}

}  // namespace dclocate

#endif  // DCLOCATE_FERMAT_TORRICELLI_HPP
