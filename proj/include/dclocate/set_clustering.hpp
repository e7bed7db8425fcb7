#ifndef DCLOCATE_SET_CLUSTERING_HPP
#define DCLOCATE_SET_CLUSTERING_HPP

#include <cstddef>
#include <limits>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "dclocate/convex_sets.hpp"
#include "dclocate/dca.hpp"
#include "dclocate/errors.hpp"
#include "dclocate/multifacility.hpp"
#include "dclocate/rng.hpp"

namespace dclocate {

// m bounded convex targets in R^n to be served by k centroids.
class SetClusterInstance {
public:
    SetClusterInstance(std::vector<TargetSet> targets, Eigen::Index k)
        : targets_(std::move(targets)), k_(k) {
        if (targets_.empty()) throw ValidationError("at least one target set is required");
        if (k < 1) throw ParameterError("k must be >= 1");
        const auto n = targets_.front().dim();
        for (std::size_t i = 1; i < targets_.size(); ++i)
            if (targets_[i].dim() != n)
                throw ValidationError("target " + std::to_string(i) + " has dimension " +
                                      std::to_string(targets_[i].dim()) + ", expected " +
                                      std::to_string(n));
    }

    const std::vector<TargetSet>& targets() const noexcept { return targets_; }
    Eigen::Index size() const noexcept { return static_cast<Eigen::Index>(targets_.size()); }
    Eigen::Index dim() const { return targets_.front().dim(); }
    Eigen::Index k() const noexcept { return k_; }

    void check(const Matrix& X) const {
        if (X.cols() != dim()) throw ContractError("centroid dimension does not match targets");
        if (X.rows() < 1) throw ContractError("at least one centroid is required");
    }

private:
    std::vector<TargetSet> targets_;
    Eigen::Index k_;
};

// sum_i min_l d(x^l; Omega^i)^2.
inline double sc_objective(const SetClusterInstance& inst, const Matrix& X) {
    inst.check(X);
    long double total = 0.0L;
    for (const auto& target : inst.targets()) {
        double best = std::numeric_limits<double>::infinity();
        for (Eigen::Index l = 0; l < X.rows(); ++l)
            best = std::min(best, dist_sq(target, X.row(l).transpose()));
        total += best;
    }
    return static_cast<double>(total);
}

// Nearest target-to-centroid assignment, ties to the lowest index.
inline std::vector<Eigen::Index> sc_assignments(const SetClusterInstance& inst, const Matrix& X) {
    inst.check(X);
    std::vector<Eigen::Index> out;
    out.reserve(inst.targets().size());
    std::vector<double> d(static_cast<std::size_t>(X.rows()));
    for (const auto& target : inst.targets()) {
        for (Eigen::Index l = 0; l < X.rows(); ++l)
            d[static_cast<std::size_t>(l)] = dist_sq(target, X.row(l).transpose());
        out.push_back(detail::first_argmin(d));
    }
    return out;
}

// grad H1(X): row l is sum_i 2 P(x^l; Omega^i).
inline Matrix sc_h1_gradient(const SetClusterInstance& inst, const Matrix& X) {
    inst.check(X);
    Matrix U = Matrix::Zero(X.rows(), X.cols());
    Vector p(X.cols());
    for (Eigen::Index l = 0; l < X.rows(); ++l) {
        for (const auto& target : inst.targets()) {
            target.project_into(X.row(l).transpose(), p);
            U.row(l) += 2.0 * p.transpose();
        }
    }
    return U;
}

// A subgradient of H2(X) = sum_i max_r sum_{l != r} d(x^l; Omega^i)^2:
// rows 2(x^l - P(x^l; Omega^i)) for l != r, zero at the active r (the
// nearest centroid, lowest index on ties).
inline Matrix sc_h2_subgradient(const SetClusterInstance& inst, const Matrix& X) {
    inst.check(X);
    const Eigen::Index k = X.rows();
    Matrix V = Matrix::Zero(k, X.cols());
    if (k == 1) return V;
    std::vector<double> d(static_cast<std::size_t>(k));
    Matrix residual(k, X.cols());
    Vector p(X.cols());
    for (const auto& target : inst.targets()) {
        for (Eigen::Index l = 0; l < k; ++l) {
            target.project_into(X.row(l).transpose(), p);
            residual.row(l) = X.row(l) - p.transpose();
            d[static_cast<std::size_t>(l)] = residual.row(l).squaredNorm();
        }
        const Eigen::Index r = detail::first_argmin(d);
        for (Eigen::Index l = 0; l < k; ++l)
            if (l != r) V.row(l) += 2.0 * residual.row(l);
    }
    return V;
}

// grad G*(Y) = Y / (2m) for G(X) = m ||X||^2.
inline Matrix sc_g_star_update(Eigen::Index m, const Matrix& Y) {
    if (m < 1) throw ContractError("target count must be >= 1");
    return Y / (2.0 * static_cast<double>(m));
}

// Set clustering as a DcProblem. The objective needs no smoothing, so mu is
// fixed at 0 and the smoothed objective is the true one.
class SetClusteringProblem {
public:
    using State = Matrix;

    explicit SetClusteringProblem(const SetClusterInstance& inst) : inst_(&inst) {}

    State h_subgradient(const State& X) const {
        return sc_h1_gradient(*inst_, X) + sc_h2_subgradient(*inst_, X);
    }

    State g_star_gradient(const State& Y) const { return sc_g_star_update(inst_->size(), Y); }

    double true_objective(const State& X) const { return sc_objective(*inst_, X); }
    double smoothed_objective(const State& X) const { return sc_objective(*inst_, X); }

    double mu() const noexcept { return 0.0; }
    void set_mu(double) {}

private:
    const SetClusterInstance* inst_;
};

inline SolveReport<Matrix> sc_solve(const SetClusterInstance& inst, const StopRule& stop,
                                    const Matrix& X0) {
    inst.check(X0);
    SetClusteringProblem problem(inst);
    return dca_run(problem, X0, stop);
}

// k distinct target centers (Ball/Singleton centers, Box midpoints).
inline Matrix sc_start(const SetClusterInstance& inst, Eigen::Index k, SplitMix64& rng) {
    Matrix centers(inst.size(), inst.dim());
    for (Eigen::Index i = 0; i < inst.size(); ++i)
        centers.row(i) = inst.targets()[static_cast<std::size_t>(i)].center().transpose();
    return forgy_start(centers, k, rng);
}

}  // namespace dclocate

#endif  // DCLOCATE_SET_CLUSTERING_HPP
