#ifndef DCLOCATE_CONVEX_SETS_HPP
#define DCLOCATE_CONVEX_SETS_HPP

#include <cmath>
#include <limits>
#include <string>
#include <type_traits>
#include <utility>
#include <variant>

#include <Eigen/Dense>

#include "dclocate/errors.hpp"
#include "dclocate/gauge.hpp"

namespace dclocate {

struct BallSet {
    Vector center;
    double radius;
};

struct BoxSet {
    Vector lower;
    Vector upper;
};

struct SingletonSet {
    Vector point;
};

// A nonempty, closed, bounded convex set with a closed-form projection.
class TargetSet {
public:
    using Variant = std::variant<BallSet, BoxSet, SingletonSet>;

    static TargetSet ball(Vector center, double radius) {
        if (!(radius >= 0.0) || !std::isfinite(radius))
            throw ValidationError("ball radius must be finite and >= 0");
        require_finite(center);
        return TargetSet(BallSet{std::move(center), radius});
    }

    static TargetSet box(Vector lower, Vector upper) {
        if (lower.size() != upper.size())
            throw ValidationError("box bounds have different lengths");
        require_finite(lower);
        require_finite(upper);
        if ((lower.array() > upper.array()).any())
            throw ValidationError("box lower bound exceeds upper bound");
        return TargetSet(BoxSet{std::move(lower), std::move(upper)});
    }

    static TargetSet singleton(Vector point) {
        require_finite(point);
        return TargetSet(SingletonSet{std::move(point)});
    }

    Eigen::Index dim() const {
        return std::visit(
            [](const auto& s) -> Eigen::Index {
                using T = std::decay_t<decltype(s)>;
                if constexpr (std::is_same_v<T, BallSet>) return s.center.size();
                else if constexpr (std::is_same_v<T, BoxSet>) return s.lower.size();
                else return s.point.size();
            },
            set_);
    }

    // Ball/Singleton center, Box midpoint.
    Vector center() const {
        return std::visit(
            [](const auto& s) -> Vector {
                using T = std::decay_t<decltype(s)>;
                if constexpr (std::is_same_v<T, BallSet>) return s.center;
                else if constexpr (std::is_same_v<T, BoxSet>) return 0.5 * (s.lower + s.upper);
                else return s.point;
            },
            set_);
    }

    const Variant& variant() const noexcept { return set_; }

    // Writes P(x; S) into out. out may alias nothing else; x is read first.
    template <class Derived>
    void project_into(const Eigen::MatrixBase<Derived>& x, Eigen::Ref<Vector> out) const {
        check(x);
        std::visit(
            [&](const auto& s) {
                using T = std::decay_t<decltype(s)>;
                if constexpr (std::is_same_v<T, BallSet>) {
                    out = x - s.center;
                    const double norm = out.norm();
                    // Points within rounding distance of the sphere count as inside, so
                    // a projected point maps to itself exactly.
                    const double slack = 4.0 * kEpsilon * (s.radius + s.center.template lpNorm<1>());
                    if (norm > s.radius + slack) out *= s.radius / norm;
                    out += s.center;
                } else if constexpr (std::is_same_v<T, BoxSet>) {
                    out = x.cwiseMax(s.lower).cwiseMin(s.upper);
                } else {
                    out = s.point;
                }
            },
            set_);
    }

private:
    static constexpr double kEpsilon = std::numeric_limits<double>::epsilon();

    explicit TargetSet(Variant v) : set_(std::move(v)) {}

    static void require_finite(const Vector& v) {
        if (v.size() < 1) throw ValidationError("target set dimension must be >= 1");
        if (!v.allFinite()) throw ValidationError("target set coordinates must be finite");
    }

    template <class Derived>
    void check(const Eigen::MatrixBase<Derived>& x) const {
        if (x.size() != dim())
            throw ContractError("vector of length " + std::to_string(x.size()) +
                                " passed to a set of dimension " + std::to_string(dim()));
    }

    Variant set_;
};

template <class Derived>
Vector project(const TargetSet& S, const Eigen::MatrixBase<Derived>& x) {
    Vector out(x.size());
    S.project_into(x, out);
    return out;
}

template <class Derived>
double dist_sq(const TargetSet& S, const Eigen::MatrixBase<Derived>& x) {
    return (x - project(S, x)).squaredNorm();
}

struct PhiValue {
    double value;
    Vector gradient;
};

// phi_S(x) = ||x||^2 - d(x; S)^2 = sup{<2x, w> - ||w||^2 : w in S}, gradient 2 P(x; S).
template <class Derived>
PhiValue phi_value_gradient(const TargetSet& S, const Eigen::MatrixBase<Derived>& x) {
    Vector p = project(S, x);
    const double value = x.squaredNorm() - (x - p).squaredNorm();
    return {value, 2.0 * p};
}

}  // namespace dclocate

#endif  // DCLOCATE_CONVEX_SETS_HPP
