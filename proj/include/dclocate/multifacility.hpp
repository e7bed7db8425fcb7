#ifndef DCLOCATE_MULTIFACILITY_HPP
#define DCLOCATE_MULTIFACILITY_HPP

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "dclocate/dca.hpp"
#include "dclocate/errors.hpp"
#include "dclocate/gauge.hpp"
#include "dclocate/rng.hpp"

namespace dclocate {

// m x n anchors (rows a^i) with the cached row sum a = sum_i a^i that
// forms every row of B.
class AnchorMatrix {
public:
    explicit AnchorMatrix(Matrix anchors) { set(std::move(anchors)); }

    void set(Matrix anchors) {
        if (anchors.rows() < 1 || anchors.cols() < 1)
            throw ValidationError("at least one anchor of dimension >= 1 is required");
        if (!anchors.allFinite()) throw ValidationError("anchor coordinates must be finite");
        anchors_ = std::move(anchors);
        row_sum_ = anchors_.colwise().sum();
    }

    const Matrix& anchors() const noexcept { return anchors_; }
    Eigen::Index size() const noexcept { return anchors_.rows(); }
    Eigen::Index dim() const noexcept { return anchors_.cols(); }
    const Eigen::RowVectorXd& row_sum() const noexcept { return row_sum_; }

    // k x n matrix with every row equal to sum_i a^i.
    Matrix bmatrix(Eigen::Index k) const { return row_sum_.replicate(k, 1); }

private:
    Matrix anchors_;
    Eigen::RowVectorXd row_sum_;
};

namespace detail {

inline void check_mfl_dims(const AnchorMatrix& A, const GaugeBall& F, const Matrix& X) {
    if (A.dim() != F.dim() || X.cols() != F.dim())
        throw ContractError("anchor, gauge and centroid dimensions disagree");
    if (X.rows() < 1) throw ContractError("at least one centroid is required");
}

// Index of the smallest value; ties go to the lowest index.
inline Eigen::Index first_argmin(std::span<const double> values) {
    Eigen::Index best = 0;
    for (std::size_t l = 1; l < values.size(); ++l)
        if (values[l] < values[static_cast<std::size_t>(best)]) best = static_cast<Eigen::Index>(l);
    return best;
}

}  // namespace detail

namespace detail {

// Correctly rounded floating-point sum: Shewchuk's nonoverlapping partials
// followed by a half-way-aware final rounding (the scheme of Python's fsum).
inline double exact_sum(const std::vector<double>& xs) {
    std::vector<double> partials;
    for (double x : xs) {
        std::size_t i = 0;
        for (std::size_t j = 0; j < partials.size(); ++j) {
            double y = partials[j];
            if (std::abs(x) < std::abs(y)) std::swap(x, y);
            const double hi = x + y;
            const double lo = y - (hi - x);
            if (lo != 0.0) partials[i++] = lo;
            x = hi;
        }
        partials.resize(i);
        partials.push_back(x);
    }
    if (partials.empty()) return 0.0;
    std::size_t n = partials.size();
    double hi = partials[--n];
    double lo = 0.0;
    while (n > 0) {
        const double x = hi;
        const double y = partials[--n];
        hi = x + y;
        lo = y - (hi - x);
        if (lo != 0.0) break;
    }
    if (n > 0 && ((lo < 0.0 && partials[n - 1] < 0.0) || (lo > 0.0 && partials[n - 1] > 0.0))) {
        const double y = lo * 2.0;
        const double x = hi + y;
        if (y == x - hi) hi = x;
    }
    return hi;
}

}  // namespace detail

// min_l z_l written as sum_l z_l - max_r sum_{l != r} z_l. The sums and the
// comparison between partial sums are carried out exactly, so the identity
// holds bit for bit in floating point.
inline double min_max_identity(std::span<const double> values) {
    if (values.empty()) throw ContractError("min_max_identity needs at least one value");
    const std::size_t k = values.size();
    std::vector<double> terms;
    terms.reserve(2 * k);
    // Sign of (sum_{l != r} z_l) - (sum_{l != s} z_l), or the value of
    // sum_l z_l - sum_{l != s} z_l when r == k.
    const auto difference = [&](std::size_t r, std::size_t s) {
        terms.clear();
        for (std::size_t l = 0; l < k; ++l) {
            if (l != r) terms.push_back(values[l]);
            if (l != s) terms.push_back(-values[l]);
        }
        return detail::exact_sum(terms);
    };
    std::size_t best = 0;
    for (std::size_t r = 1; r < k; ++r)
        if (difference(r, best) > 0.0) best = r;
    return difference(k, best);
}

// sum_i min_l rho_F(x^l - a^i).
inline double mfl_objective(const AnchorMatrix& A, const GaugeBall& F, const Matrix& X) {
    detail::check_mfl_dims(A, F, X);
    long double total = 0.0L;
    for (Eigen::Index i = 0; i < A.size(); ++i) {
        double best = std::numeric_limits<double>::infinity();
        for (Eigen::Index l = 0; l < X.rows(); ++l)
            best = std::min(best, gauge_value(F, X.row(l) - A.anchors().row(i)));
        total += best;
    }
    return static_cast<double>(total);
}

// Closest centroid (0-based) for each anchor, ties to the lowest index.
inline std::vector<Eigen::Index> assignments(const AnchorMatrix& A, const GaugeBall& F,
                                             const Matrix& X) {
    detail::check_mfl_dims(A, F, X);
    std::vector<Eigen::Index> out(static_cast<std::size_t>(A.size()));
    std::vector<double> d(static_cast<std::size_t>(X.rows()));
    for (Eigen::Index i = 0; i < A.size(); ++i) {
        for (Eigen::Index l = 0; l < X.rows(); ++l)
            d[static_cast<std::size_t>(l)] = gauge_value(F, X.row(l) - A.anchors().row(i));
        out[static_cast<std::size_t>(i)] = detail::first_argmin(d);
    }
    return out;
}

// grad H1_mu(X): row l is sum_i [ (x^l - a^i)/mu - P((x^l - a^i)/mu; F°) ].
inline Matrix h1_gradient(const AnchorMatrix& A, const GaugeBall& F, double mu, const Matrix& X) {
    detail::require_mu(mu);
    detail::check_mfl_dims(A, F, X);
    Matrix U = Matrix::Zero(X.rows(), X.cols());
    Vector z(X.cols());
    for (Eigen::Index l = 0; l < X.rows(); ++l) {
        for (Eigen::Index i = 0; i < A.size(); ++i) {
            z = (X.row(l) - A.anchors().row(i)).transpose() / mu;
            U.row(l) += z.transpose();
            project_onto_polar(F, z);
            U.row(l) -= z.transpose();
        }
    }
    return U;
}

// A subgradient of H2(X) = sum_i max_r sum_{l != r} rho_F(x^l - a^i).
// For each anchor the active index r is the closest centroid (the smallest
// maximizer of the partial sums); its row is zero and every other row l
// receives a subgradient of rho_F at x^l - a^i.
inline Matrix h2_subgradient(const AnchorMatrix& A, const GaugeBall& F, const Matrix& X) {
    detail::check_mfl_dims(A, F, X);
    const Eigen::Index k = X.rows();
    Matrix V = Matrix::Zero(k, X.cols());
    if (k == 1) return V;
    std::vector<double> d(static_cast<std::size_t>(k));
    for (Eigen::Index i = 0; i < A.size(); ++i) {
        for (Eigen::Index l = 0; l < k; ++l)
            d[static_cast<std::size_t>(l)] = gauge_value(F, X.row(l) - A.anchors().row(i));
        const Eigen::Index r = detail::first_argmin(d);
        for (Eigen::Index l = 0; l < k; ++l) {
            if (l == r) continue;
            V.row(l) += gauge_subgradient(F, (X.row(l) - A.anchors().row(i)).transpose()).transpose();
        }
    }
    return V;
}

// Gradient of the active piece of H2_mu(X) = sum_i max_r sum_{l != r}
// phi_mu(x^l - a^i): rows P((x^l - a^i)/mu; F°) for l != r, zero at r,
// where r minimizes phi_mu(x^l - a^i) (lowest index on ties).
inline Matrix h2_mu_subgradient(const AnchorMatrix& A, const GaugeBall& F, double mu,
                                const Matrix& X) {
    detail::require_mu(mu);
    detail::check_mfl_dims(A, F, X);
    const Eigen::Index k = X.rows();
    const Eigen::Index n = X.cols();
    Matrix V = Matrix::Zero(k, n);
    if (k == 1) return V;
    std::vector<double> phi(static_cast<std::size_t>(k));
    Matrix P(k, n);
    Vector diff(n);
    Vector z(n);
    for (Eigen::Index i = 0; i < A.size(); ++i) {
        for (Eigen::Index l = 0; l < k; ++l) {
            diff = (X.row(l) - A.anchors().row(i)).transpose();
            z = diff / mu;
            project_onto_polar(F, z);
            phi[static_cast<std::size_t>(l)] = smoothed_value_from_projection(diff, z, mu);
            P.row(l) = z.transpose();
        }
        const Eigen::Index r = detail::first_argmin(phi);
        for (Eigen::Index l = 0; l < k; ++l)
            if (l != r) V.row(l) += P.row(l);
    }
    return V;
}

// grad G*_mu(Y) = (B + mu Y) / m.
inline Matrix mfl_g_star_update(const Matrix& B, Eigen::Index m, double mu, const Matrix& Y) {
    detail::require_mu(mu);
    if (m < 1) throw ContractError("anchor count must be >= 1");
    if (B.rows() != Y.rows() || B.cols() != Y.cols())
        throw ContractError("B and Y shapes differ");
    return (B + mu * Y) / static_cast<double>(m);
}

// grad G_mu(X) = (m/mu) X - B/mu.
inline Matrix mfl_g_gradient(const Matrix& B, Eigen::Index m, double mu, const Matrix& X) {
    detail::require_mu(mu);
    return (static_cast<double>(m) * X - B) / mu;
}

enum class MflVariant {
    ExactMax = 5,     // H2 kept nonsmooth
    SmoothedMax = 6,  // H2 replaced by H2_mu
};

// f_mu = G_mu - H1_mu - H2 (variant 5) or G_mu - H1_mu - H2_mu (variant 6),
// evaluated per anchor from the smoothed gauges to avoid 1/mu cancellation:
//   variant 5: sum_l phi_mu(x^l - a^i) - (sum_l rho - min_l rho)
//   variant 6: min_l phi_mu(x^l - a^i)
inline double mfl_smoothed_objective(const AnchorMatrix& A, const GaugeBall& F, double mu,
                                     MflVariant variant, const Matrix& X) {
    detail::require_mu(mu);
    detail::check_mfl_dims(A, F, X);
    const Eigen::Index k = X.rows();
    Vector diff(X.cols());
    Vector z(X.cols());
    long double total = 0.0L;
    for (Eigen::Index i = 0; i < A.size(); ++i) {
        double phi_sum = 0.0;
        double phi_min = std::numeric_limits<double>::infinity();
        double rho_sum = 0.0;
        double rho_min = std::numeric_limits<double>::infinity();
        for (Eigen::Index l = 0; l < k; ++l) {
            diff = (X.row(l) - A.anchors().row(i)).transpose();
            z = diff / mu;
            project_onto_polar(F, z);
            const double phi = smoothed_value_from_projection(diff, z, mu);
            phi_sum += phi;
            phi_min = std::min(phi_min, phi);
            if (variant == MflVariant::ExactMax) {
                const double rho = gauge_value(F, diff);
                rho_sum += rho;
                rho_min = std::min(rho_min, rho);
            }
        }
        if (variant == MflVariant::SmoothedMax)
            total += phi_min;
        else
            total += static_cast<long double>(phi_sum) - (rho_sum - rho_min);
    }
    return static_cast<double>(total);
}

// Multifacility location (unit weights) as a DcProblem over k x n matrices.
class MultifacilityProblem {
public:
    using State = Matrix;

    MultifacilityProblem(const AnchorMatrix& anchors, GaugeBall gauge, Eigen::Index k,
                         MflVariant variant, double mu = 0.1)
        : anchors_(&anchors), gauge_(gauge), k_(k), variant_(variant) {
        if (k < 1) throw ParameterError("k must be >= 1");
        if (anchors.dim() != gauge.dim())
            throw ContractError("anchor and gauge dimensions disagree");
        b_ = anchors.bmatrix(k);
        set_mu(mu);
    }

    State h_subgradient(const State& X) const {
        Matrix Y = h1_gradient(*anchors_, gauge_, mu_, X);
        if (variant_ == MflVariant::ExactMax)
            Y += h2_subgradient(*anchors_, gauge_, X);
        else
            Y += h2_mu_subgradient(*anchors_, gauge_, mu_, X);
        return Y;
    }

    State g_star_gradient(const State& Y) const {
        return mfl_g_star_update(b_, anchors_->size(), mu_, Y);
    }

    double true_objective(const State& X) const { return mfl_objective(*anchors_, gauge_, X); }

    double smoothed_objective(const State& X) const {
        return mfl_smoothed_objective(*anchors_, gauge_, mu_, variant_, X);
    }

    double mu() const noexcept { return mu_; }

    void set_mu(double mu) {
        detail::require_mu(mu);
        mu_ = mu;
    }

    Eigen::Index k() const noexcept { return k_; }

private:
    const AnchorMatrix* anchors_;
    GaugeBall gauge_;
    Eigen::Index k_;
    MflVariant variant_;
    Matrix b_;
    double mu_ = 0.1;
};

// Algorithm 5 or 6 under the mu-continuation schedule.
inline SolveReport<Matrix> mfl_solve(const AnchorMatrix& A, const GaugeBall& F,
                                     const SmoothingSchedule& sched, const StopRule& stop,
                                     const Matrix& X0, MflVariant variant) {
    detail::check_mfl_dims(A, F, X0);
    MultifacilityProblem problem(A, F, X0.rows(), variant, sched.mu0);
    return continuation_run(problem, X0, sched, stop);
}

// k distinct anchors chosen by the generator (Forgy initialization). When
// k exceeds the anchor count the remaining rows repeat the last anchor.
inline Matrix forgy_start(const Matrix& points, Eigen::Index k, SplitMix64& rng) {
    if (k < 1) throw ParameterError("k must be >= 1");
    const auto picks = rng.distinct_indices(static_cast<std::size_t>(points.rows()),
                                            static_cast<std::size_t>(k));
    Matrix X(k, points.cols());
    for (Eigen::Index l = 0; l < k; ++l) {
        const auto idx = static_cast<std::size_t>(l) < picks.size() ? picks[static_cast<std::size_t>(l)]
                                                                    : picks.back();
        X.row(l) = points.row(static_cast<Eigen::Index>(idx));
    }
    return X;
}

}  // namespace dclocate

#endif  // DCLOCATE_MULTIFACILITY_HPP
