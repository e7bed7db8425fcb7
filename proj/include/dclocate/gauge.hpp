#ifndef DCLOCATE_GAUGE_HPP
#define DCLOCATE_GAUGE_HPP

#include <algorithm>
#include <cmath>
#include <functional>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "dclocate/errors.hpp"

namespace dclocate {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

// Unit balls of the l2, l1 and l-infinity norms.
enum class GaugeKind { EuclideanBall, CrossPolytope, Box };

inline std::string_view to_string(GaugeKind kind) {
    switch (kind) {
        case GaugeKind::EuclideanBall: return "l2";
        case GaugeKind::CrossPolytope: return "l1";
        case GaugeKind::Box: return "linf";
    }
    return "?";
}

inline GaugeKind parse_gauge_kind(std::string_view name) {
    if (name == "l2") return GaugeKind::EuclideanBall;
    if (name == "l1") return GaugeKind::CrossPolytope;
    if (name == "linf") return GaugeKind::Box;
    throw ValidationError("unknown gauge '" + std::string(name) + "' (expected l2, l1 or linf)");
}

// The set F = radius * (unit ball of `kind`) in R^dim. It generates the
// Minkowski gauge rho_F(x) = inf{t > 0 : x in tF}. The same type also
// describes the polar set F°, which is again a ball of this family.
class GaugeBall {
public:
    GaugeBall(GaugeKind kind, Eigen::Index dim, double radius = 1.0)
        : kind_(kind), dim_(dim), radius_(radius) {
        if (dim < 1) throw ParameterError("gauge dimension must be >= 1");
        if (!(radius > 0.0) || !std::isfinite(radius))
            throw ParameterError("gauge radius must be positive and finite");
    }

    GaugeKind kind() const noexcept { return kind_; }
    Eigen::Index dim() const noexcept { return dim_; }
    double radius() const noexcept { return radius_; }

    // l2 <-> l2, l1 <-> l-infinity, radius r <-> 1/r.
    GaugeBall polar() const {
        GaugeKind dual = kind_;
        if (kind_ == GaugeKind::CrossPolytope) dual = GaugeKind::Box;
        if (kind_ == GaugeKind::Box) dual = GaugeKind::CrossPolytope;
        return GaugeBall(dual, dim_, 1.0 / radius_);
    }

    friend bool operator==(const GaugeBall&, const GaugeBall&) = default;

private:
    GaugeKind kind_;
    Eigen::Index dim_;
    double radius_;
};

namespace detail {

inline void require_mu(double mu) {
    if (!(mu > 0.0)) throw ParameterError("smoothing parameter mu must be positive");
}

template <class Derived>
void check_dim(const GaugeBall& F, const Eigen::MatrixBase<Derived>& x) {
    if (x.size() != F.dim())
        throw ContractError("vector of length " + std::to_string(x.size()) +
                            " passed to a gauge of dimension " + std::to_string(F.dim()));
}

template <class Derived>
double unit_norm(GaugeKind kind, const Eigen::MatrixBase<Derived>& x) {
    switch (kind) {
        case GaugeKind::EuclideanBall: return x.norm();
        case GaugeKind::CrossPolytope: return x.template lpNorm<1>();
        case GaugeKind::Box: return x.template lpNorm<Eigen::Infinity>();
    }
    return 0.0;
}

// Euclidean projection onto {w : ||w||_1 <= radius}, in place. Sort-based
// soft threshold: with u the sorted magnitudes, theta solves
// sum_j max(u_j - theta, 0) = radius. Both the support size and the shrunk
// values are formed from differences u_i - u_j rather than from theta itself,
// which keeps full accuracy when |z| is far larger than the radius.
inline void project_l1_ball(Eigen::Ref<Vector> z, double radius) {
    const double l1 = z.lpNorm<1>();
    if (l1 <= radius) return;
    std::vector<double> u(static_cast<std::size_t>(z.size()));
    for (Eigen::Index i = 0; i < z.size(); ++i) u[static_cast<std::size_t>(i)] = std::abs(z[i]);
    std::sort(u.begin(), u.end(), std::greater<>());
    // u_j stays in the support while sum_{l<j} (u_l - u_j) < radius.
    std::size_t support = 1;
    for (; support < u.size(); ++support) {
        double excess = 0.0;
        for (std::size_t l = 0; l < support; ++l) excess += u[l] - u[support];
        if (excess >= radius) break;
    }
    const double count = static_cast<double>(support);
    for (Eigen::Index i = 0; i < z.size(); ++i) {
        const double a = std::abs(z[i]);
        // a - theta = (radius + sum_{l<support} (a - u_l)) / support.
        double s = radius;
        for (std::size_t l = 0; l < support; ++l) s += a - u[l];
        z[i] = std::copysign(std::max(s / count, 0.0), z[i]);
    }
}

}  // namespace detail

// rho_F(x) = ||x||_p / r.
template <class Derived>
double gauge_value(const GaugeBall& F, const Eigen::MatrixBase<Derived>& x) {
    detail::check_dim(F, x);
    return detail::unit_norm(F.kind(), x) / F.radius();
}

// sigma_F(u) = sup{<u, w> : w in F}, i.e. r times the dual norm of u.
template <class Derived>
double support_value(const GaugeBall& F, const Eigen::MatrixBase<Derived>& u) {
    detail::check_dim(F, u);
    return detail::unit_norm(F.polar().kind(), u) * F.radius();
}

// Euclidean projection of z onto the ball S itself (not its polar), in place.
inline void project_onto_ball(const GaugeBall& S, Eigen::Ref<Vector> z) {
    detail::check_dim(S, z);
    const double r = S.radius();
    switch (S.kind()) {
        case GaugeKind::EuclideanBall: {
            const double norm = z.norm();
            if (norm > r) z *= r / norm;
            break;
        }
        case GaugeKind::Box:
            z = z.cwiseMax(-r).cwiseMin(r);
            break;
        case GaugeKind::CrossPolytope:
            detail::project_l1_ball(z, r);
            break;
    }
}

// P(z; F°), in place. Hot loops use this form with a reused buffer.
inline void project_onto_polar(const GaugeBall& F, Eigen::Ref<Vector> z) {
    project_onto_ball(F.polar(), z);
}

template <class Derived>
Vector polar_projection(const GaugeBall& F, const Eigen::MatrixBase<Derived>& z) {
    detail::check_dim(F, z);
    Vector out = z;
    project_onto_polar(F, out);
    return out;
}

// One element of the subdifferential of rho_F at x. At x = 0 the zero
// vector is returned; elsewhere the l2 direction, the sign vector (l1), or
// the signed coordinate vector at the first index of max |x_i| (l-infinity).
template <class Derived>
Vector gauge_subgradient(const GaugeBall& F, const Eigen::MatrixBase<Derived>& x) {
    detail::check_dim(F, x);
    Vector u = Vector::Zero(x.size());
    const double inv_r = 1.0 / F.radius();
    switch (F.kind()) {
        case GaugeKind::EuclideanBall: {
            const double norm = x.norm();
            if (norm > 0.0) u = x / (norm * F.radius());
            break;
        }
        case GaugeKind::CrossPolytope:
            for (Eigen::Index i = 0; i < x.size(); ++i) {
                if (x[i] > 0.0) u[i] = inv_r;
                else if (x[i] < 0.0) u[i] = -inv_r;
            }
            break;
        case GaugeKind::Box: {
            Eigen::Index best = 0;
            double best_abs = -1.0;
            for (Eigen::Index i = 0; i < x.size(); ++i) {
                if (std::abs(x[i]) > best_abs) {
                    best_abs = std::abs(x[i]);
                    best = i;
                }
            }
            if (best_abs > 0.0) u[best] = x[best] > 0.0 ? inv_r : -inv_r;
            break;
        }
    }
    return u;
}

struct SmoothedGauge {
    double value;
    Vector gradient;
};

// Value of the smoothed gauge given p = P((x - a)/mu; F°):
//   phi_mu(x) = <x - a, p> - (mu/2)||p||^2.
// This equals ||x-a||^2/(2 mu) - (mu/2) d((x-a)/mu; F°)^2 but avoids the
// cancellation between the two large terms when mu is small.
template <class D1, class D2>
double smoothed_value_from_projection(const Eigen::MatrixBase<D1>& diff,
                                      const Eigen::MatrixBase<D2>& projected, double mu) {
    return diff.dot(projected) - 0.5 * mu * projected.squaredNorm();
}

// Nesterov smoothing of x -> rho_F(x - a) with parameter mu.
template <class DA, class DX>
SmoothedGauge smoothed_gauge(const GaugeBall& F, const Eigen::MatrixBase<DA>& a, double mu,
                             const Eigen::MatrixBase<DX>& x) {
    detail::require_mu(mu);
    detail::check_dim(F, a);
    detail::check_dim(F, x);
    const Vector diff = x - a;
    Vector p = diff / mu;
    project_onto_polar(F, p);
    const double value = smoothed_value_from_projection(diff, p, mu);
    return {value, std::move(p)};
}

// sup{||u|| : u in F°}.
inline double polar_norm_bound(const GaugeBall& F) {
    const double inv_r = 1.0 / F.radius();
    if (F.kind() == GaugeKind::CrossPolytope)
        return std::sqrt(static_cast<double>(F.dim())) * inv_r;
    return inv_r;
}

struct BallRadii {
    double inradius;      // largest r with B(0; r) inside F
    double circumradius;  // smallest r with F inside B(0; r)
};

inline BallRadii inradius_circumradius(const GaugeBall& F) {
    const double r = F.radius();
    const double root_n = std::sqrt(static_cast<double>(F.dim()));
    switch (F.kind()) {
        case GaugeKind::EuclideanBall: return {r, r};
        case GaugeKind::CrossPolytope: return {r / root_n, r};
        case GaugeKind::Box: return {r, r * root_n};
    }
    return {r, r};
}

}  // namespace dclocate

#endif  // DCLOCATE_GAUGE_HPP
