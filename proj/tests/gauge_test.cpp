#include <algorithm>
#include <cmath>
#include <limits>

#include <gtest/gtest.h>

#include "support.hpp"

using namespace dclocate;
using testing_support::Sampler;

namespace {

Vector vec(std::initializer_list<double> xs) {
    Vector v(static_cast<Eigen::Index>(xs.size()));
    Eigen::Index i = 0;
    for (double x : xs) v[i++] = x;
    return v;
}

// Membership in t*F straight from the set definitions.
bool in_scaled_ball(GaugeKind kind, double r, double t, const Vector& x) {
    switch (kind) {
        case GaugeKind::EuclideanBall: return x.squaredNorm() <= (t * r) * (t * r);
        case GaugeKind::CrossPolytope: return x.cwiseAbs().sum() <= t * r;
        case GaugeKind::Box: return (x.cwiseAbs().array() <= t * r).all();
    }
    return false;
}

double bisect_gauge(GaugeKind kind, double r, const Vector& x) {
    double lo = 0.0, hi = 1.0;
    while (!in_scaled_ball(kind, r, hi, x)) hi *= 2.0;
    for (int i = 0; i < 200; ++i) {
        const double mid = 0.5 * (lo + hi);
        (in_scaled_ball(kind, r, mid, x) ? hi : lo) = mid;
    }
    return hi;
}

// min ||w - z||^2 over the 2-D l1 ball of radius R by repeated grid refinement.
Vector grid_project_l1(const Vector& z, double R) {
    Vector best = Vector::Zero(2);
    double cx = 0.0, cy = 0.0, half = R;
    for (int round = 0; round < 12; ++round) {
        double best_d = std::numeric_limits<double>::infinity();
        constexpr int N = 200;
        for (int i = 0; i <= N; ++i) {
            for (int j = 0; j <= N; ++j) {
                const double wx = cx - half + 2.0 * half * i / N;
                const double wy = cy - half + 2.0 * half * j / N;
                if (std::abs(wx) + std::abs(wy) > R) continue;
                const double d = (wx - z[0]) * (wx - z[0]) + (wy - z[1]) * (wy - z[1]);
                if (d < best_d) {
                    best_d = d;
                    best << wx, wy;
                }
            }
        }
        cx = best[0];
        cy = best[1];
        half *= 0.05;
    }
    return best;
}

}  // namespace

TEST(GaugeValue, EuclideanNorm) {
    EXPECT_DOUBLE_EQ(gauge_value(GaugeBall(GaugeKind::EuclideanBall, 2), vec({3, 4})), 5.0);
}

TEST(GaugeValue, CrossPolytopeIsL1Norm) {
    EXPECT_DOUBLE_EQ(gauge_value(GaugeBall(GaugeKind::CrossPolytope, 2), vec({3, -4})), 7.0);
}

TEST(GaugeValue, ScaledBoxAgainstBisection) {
    const Vector x = vec({3, -4});
    const double oracle = bisect_gauge(GaugeKind::Box, 2.0, x);
    EXPECT_NEAR(oracle, 2.0, 1e-12);
    EXPECT_DOUBLE_EQ(gauge_value(GaugeBall(GaugeKind::Box, 2, 2.0), x), 2.0);
}

TEST(GaugeValue, MatchesBisectionOnRandomPoints) {
    Sampler rng(11);
    for (int trial = 0; trial < 300; ++trial) {
        const auto kind = testing_support::kind_at(trial);
        const Eigen::Index n = rng.integer(1, 5);
        const double r = rng.uniform(0.2, 3.0);
        const Vector x = rng.vector(n);
        EXPECT_NEAR(gauge_value(GaugeBall(kind, n, r), x), bisect_gauge(kind, r, x), 1e-10);
    }
}

TEST(GaugeValue, EqualsSupportOfPolar) {
    Sampler rng(12);
    for (int trial = 0; trial < 300; ++trial) {
        const GaugeBall F(testing_support::kind_at(trial), 3, rng.uniform(0.5, 2.0));
        const Vector x = rng.vector(3);
        EXPECT_NEAR(gauge_value(F, x), support_value(F.polar(), x), 1e-12);
    }
}

TEST(GaugeValue, DimensionMismatchThrows) {
    EXPECT_THROW(gauge_value(GaugeBall(GaugeKind::EuclideanBall, 3), vec({1, 2})), ContractError);
}

TEST(GaugeBall, PolarPairs) {
    const GaugeBall l2(GaugeKind::EuclideanBall, 3, 2.0);
    EXPECT_EQ(l2.polar(), GaugeBall(GaugeKind::EuclideanBall, 3, 0.5));
    EXPECT_EQ(GaugeBall(GaugeKind::CrossPolytope, 3, 4.0).polar(), GaugeBall(GaugeKind::Box, 3, 0.25));
    EXPECT_EQ(GaugeBall(GaugeKind::Box, 3, 4.0).polar(), GaugeBall(GaugeKind::CrossPolytope, 3, 0.25));
    EXPECT_EQ(l2.polar().polar(), l2);
}

TEST(GaugeBall, RejectsBadRadiusAndDimension) {
    EXPECT_THROW(GaugeBall(GaugeKind::Box, 2, 0.0), ParameterError);
    EXPECT_THROW(GaugeBall(GaugeKind::Box, 2, -1.0), ParameterError);
    EXPECT_THROW(GaugeBall(GaugeKind::Box, 0), ParameterError);
    EXPECT_THROW(parse_gauge_kind("l3"), ValidationError);
    EXPECT_EQ(parse_gauge_kind("linf"), GaugeKind::Box);
}

TEST(GaugeValue, PositiveHomogeneity) {
    Sampler rng(13);
    for (int trial = 0; trial < 500; ++trial) {
        const GaugeBall F(testing_support::kind_at(trial), 4, rng.uniform(0.3, 3.0));
        const Vector x = rng.vector(4);
        const double t = rng.uniform(0.01, 50.0);
        const double lhs = gauge_value(F, (t * x).eval());
        const double rhs = t * gauge_value(F, x);
        EXPECT_NEAR(lhs, rhs, 1e-12 * std::abs(rhs));
    }
}

TEST(GaugeValue, Subadditivity) {
    Sampler rng(14);
    for (int trial = 0; trial < 500; ++trial) {
        const GaugeBall F(testing_support::kind_at(trial), 3, rng.uniform(0.3, 3.0));
        const Vector x = rng.vector(3), y = rng.vector(3);
        EXPECT_LE(gauge_value(F, (x + y).eval()), gauge_value(F, x) + gauge_value(F, y) + 1e-12);
    }
}

TEST(GaugeValue, DualityBySampling) {
    // Sampled u in F° never exceed the gauge and come within 1e-6 of it; the
    // sample includes the polar's extreme points near the maximizer direction.
    Sampler rng(15);
    for (int trial = 0; trial < 30; ++trial) {
        const Eigen::Index n = 1 + trial % 3;
        const GaugeBall F(testing_support::kind_at(trial), n, rng.uniform(0.5, 2.0));
        const GaugeBall P = F.polar();
        const Vector x = rng.vector(n);
        double best = -std::numeric_limits<double>::infinity();
        for (int s = 0; s < 10000; ++s) {
            Vector u = rng.vector(n, -2.0, 2.0);
            project_onto_ball(P, u);
            best = std::max(best, x.dot(u));
        }
        // Boundary points of F° aligned with x (one per coordinate sign pattern).
        Vector u = x / 1e-9;
        project_onto_ball(P, u);
        best = std::max(best, x.dot(u));
        EXPECT_LE(best, gauge_value(F, x) + 1e-12);
        EXPECT_NEAR(best, gauge_value(F, x), 1e-6);
    }
}

TEST(PolarProjection, EuclideanRadial) {
    const Vector p = polar_projection(GaugeBall(GaugeKind::EuclideanBall, 2), vec({3, 4}));
    EXPECT_NEAR(p[0], 0.6, 1e-15);
    EXPECT_NEAR(p[1], 0.8, 1e-15);
}

TEST(PolarProjection, CrossPolytopeClamps) {
    const Vector p = polar_projection(GaugeBall(GaugeKind::CrossPolytope, 2), vec({2, -0.5}));
    EXPECT_EQ(p, vec({1, -0.5}));
}

TEST(PolarProjection, BoxPolarIsL1BallAgainstGridOracle) {
    const Vector z = vec({2, 1});
    const Vector p = polar_projection(GaugeBall(GaugeKind::Box, 2), z);
    const Vector oracle = grid_project_l1(z, 1.0);
    EXPECT_NEAR(p[0], 1.0, 1e-15);
    EXPECT_NEAR(p[1], 0.0, 1e-15);
    // The grid search resolves the minimizer to about sqrt(machine epsilon).
    EXPECT_NEAR((p - oracle).norm(), 0.0, 1e-7);
}

TEST(PolarProjection, L1BallRandomAgainstGridOracle) {
    Sampler rng(16);
    for (int trial = 0; trial < 20; ++trial) {
        const double r = rng.uniform(0.5, 2.0);
        const Vector z = rng.vector(2, -4.0, 4.0);
        const Vector p = polar_projection(GaugeBall(GaugeKind::Box, 2, r), z);
        EXPECT_NEAR((p - grid_project_l1(z, 1.0 / r)).norm(), 0.0, 1e-7);
    }
}

TEST(PolarProjection, InsidePointsAreFixed) {
    Sampler rng(17);
    for (int trial = 0; trial < 200; ++trial) {
        const GaugeBall F(testing_support::kind_at(trial), 3);
        const Vector u = rng.in_unit_ball(F.polar().kind(), 3);
        EXPECT_EQ(polar_projection(F, u), u);
    }
}

TEST(GaugeSubgradient, EuclideanNormalizes) {
    EXPECT_EQ(gauge_subgradient(GaugeBall(GaugeKind::EuclideanBall, 2), vec({0, 3})), vec({0, 1}));
}

TEST(GaugeSubgradient, ZeroAtOrigin) {
    for (int i = 0; i < 3; ++i)
        EXPECT_EQ(gauge_subgradient(GaugeBall(testing_support::kind_at(i), 3), Vector::Zero(3)),
                  Vector::Zero(3));
}

TEST(GaugeSubgradient, BoxTieTakesSmallestIndex) {
    const GaugeBall F(GaugeKind::Box, 2);
    const Vector x = vec({2, -2});
    const Vector u = gauge_subgradient(F, x);
    EXPECT_EQ(u, vec({1, 0}));
    EXPECT_DOUBLE_EQ(u.dot(x), gauge_value(F, x));
    EXPECT_DOUBLE_EQ(support_value(F, u), 1.0);
}

TEST(GaugeSubgradient, CrossPolytopeSignWithZeros) {
    EXPECT_EQ(gauge_subgradient(GaugeBall(GaugeKind::CrossPolytope, 3, 2.0), vec({-1, 0, 4})),
              vec({-0.5, 0, 0.5}));
}

TEST(GaugeSubgradient, SubgradientInequality) {
    Sampler rng(18);
    for (int trial = 0; trial < 1000; ++trial) {
        const GaugeBall F(testing_support::kind_at(trial), 3, rng.uniform(0.3, 3.0));
        Vector x = rng.vector(3);
        if (trial % 7 == 0) x[1] = 0.0;
        if (trial % 11 == 0) x[2] = x[0];
        const Vector y = rng.vector(3);
        const Vector u = gauge_subgradient(F, x);
        EXPECT_LE(u.dot(y - x), gauge_value(F, y) - gauge_value(F, x) + 1e-10);
        if (x.norm() > 0) {
            EXPECT_NEAR(support_value(F, u), 1.0, 1e-12);
        }
    }
}

TEST(SmoothedGauge, InsidePolarHasNoDistanceTerm) {
    const auto s = smoothed_gauge(GaugeBall(GaugeKind::EuclideanBall, 2), Vector::Zero(2), 1.0, vec({0.6, 0.8}));
    EXPECT_NEAR(s.value, 0.5, 1e-15);
    EXPECT_NEAR((s.gradient - vec({0.6, 0.8})).norm(), 0.0, 1e-15);
}

TEST(SmoothedGauge, HuberBranchAgainstDefinition) {
    const GaugeBall F(GaugeKind::EuclideanBall, 2);
    const Vector x = vec({3, 4});
    const double mu = 1.0;
    const auto s = smoothed_gauge(F, Vector::Zero(2), mu, x);
    // ||x||^2/(2 mu) - (mu/2) d(x/mu; unit ball)^2 with d = ||x||/mu - 1.
    const double d = x.norm() / mu - 1.0;
    const double definition = x.squaredNorm() / (2 * mu) - 0.5 * mu * d * d;
    EXPECT_NEAR(s.value, 4.5, 1e-14);
    EXPECT_NEAR(definition, 4.5, 1e-14);
    EXPECT_NEAR(x.norm() - mu / 2, 4.5, 1e-14);
    EXPECT_NEAR((s.gradient - vec({0.6, 0.8})).norm(), 0.0, 1e-15);
}

TEST(SmoothedGauge, AtTheAnchorIsZero) {
    const auto s = smoothed_gauge(GaugeBall(GaugeKind::CrossPolytope, 2), vec({1, 0}), 0.5, vec({1, 0}));
    EXPECT_EQ(s.value, 0.0);
    EXPECT_EQ(s.gradient, Vector::Zero(2));
}

TEST(SmoothedGauge, MatchesDistanceForm) {
    Sampler rng(19);
    for (int trial = 0; trial < 300; ++trial) {
        const GaugeBall F(testing_support::kind_at(trial), 3, rng.uniform(0.5, 2.0));
        const Vector a = rng.vector(3), x = rng.vector(3);
        const double mu = rng.uniform(0.1, 2.0);
        const Vector z = (x - a) / mu;
        const double dist = (z - polar_projection(F, z)).norm();
        const double definition = (x - a).squaredNorm() / (2 * mu) - 0.5 * mu * dist * dist;
        EXPECT_NEAR(smoothed_gauge(F, a, mu, x).value, definition, 1e-12);
    }
}

TEST(SmoothedGauge, RejectsNonPositiveMu) {
    const GaugeBall F(GaugeKind::EuclideanBall, 2);
    EXPECT_THROW(smoothed_gauge(F, Vector::Zero(2), 0.0, Vector::Zero(2)), ParameterError);
    EXPECT_THROW(smoothed_gauge(F, Vector::Zero(2), -1.0, Vector::Zero(2)), ParameterError);
}

TEST(PolarNormBound, Examples) {
    EXPECT_DOUBLE_EQ(polar_norm_bound(GaugeBall(GaugeKind::EuclideanBall, 3)), 1.0);

    // Corners of the polar l-infinity ball.
    double corner_max = 0.0;
    for (int mask = 0; mask < 16; ++mask) {
        Vector c(4);
        for (int i = 0; i < 4; ++i) c[i] = (mask >> i & 1) ? 1.0 : -1.0;
        corner_max = std::max(corner_max, c.norm());
    }
    EXPECT_DOUBLE_EQ(corner_max, 2.0);
    EXPECT_DOUBLE_EQ(polar_norm_bound(GaugeBall(GaugeKind::CrossPolytope, 4)), corner_max);

    // Vertices of the polar l1 ball of radius 1/2.
    for (Eigen::Index n : {1, 3, 7}) {
        const GaugeBall F(GaugeKind::Box, n, 2.0);
        double vertex_max = 0.0;
        for (Eigen::Index i = 0; i < n; ++i)
            vertex_max = std::max(vertex_max, (0.5 * Vector::Unit(n, i)).norm());
        EXPECT_DOUBLE_EQ(polar_norm_bound(F), 0.5);
        EXPECT_DOUBLE_EQ(vertex_max, 0.5);
    }
}

TEST(PolarNormBound, DominatesSampledPolarPoints) {
    Sampler rng(20);
    for (int trial = 0; trial < 30; ++trial) {
        const GaugeBall F(testing_support::kind_at(trial), 3, rng.uniform(0.5, 2.0));
        for (int s = 0; s < 1000; ++s) {
            Vector u = rng.vector(3, -3.0, 3.0);
            project_onto_ball(F.polar(), u);
            EXPECT_LE(u.norm(), polar_norm_bound(F) + 1e-12);
        }
    }
}

TEST(InradiusCircumradius, Examples) {
    auto r = inradius_circumradius(GaugeBall(GaugeKind::EuclideanBall, 2));
    EXPECT_DOUBLE_EQ(r.inradius, 1.0);
    EXPECT_DOUBLE_EQ(r.circumradius, 1.0);

    // Facet {x : sum x_i = 1} of the l1 ball in R^4 sits at distance 1/||(1,1,1,1)||.
    r = inradius_circumradius(GaugeBall(GaugeKind::CrossPolytope, 4));
    EXPECT_DOUBLE_EQ(r.inradius, 1.0 / Vector::Ones(4).norm());
    EXPECT_DOUBLE_EQ(r.inradius, 0.5);
    EXPECT_DOUBLE_EQ(r.circumradius, 1.0);

    r = inradius_circumradius(GaugeBall(GaugeKind::Box, 9));
    EXPECT_DOUBLE_EQ(r.inradius, 1.0);
    EXPECT_DOUBLE_EQ(r.circumradius, Vector::Ones(9).norm());
    EXPECT_DOUBLE_EQ(r.circumradius, 3.0);
}

TEST(InradiusCircumradius, BracketsTheGauge) {
    // gamma1 ||x|| <= ... means ||x|| / gamma2 <= rho_F(x) <= ||x|| / gamma1.
    Sampler rng(21);
    for (int trial = 0; trial < 600; ++trial) {
        const GaugeBall F(testing_support::kind_at(trial), 4, rng.uniform(0.5, 2.0));
        const auto r = inradius_circumradius(F);
        const Vector x = rng.vector(4);
        EXPECT_LE(x.norm() / r.circumradius, gauge_value(F, x) + 1e-12);
        EXPECT_LE(gauge_value(F, x), x.norm() / r.inradius + 1e-12);
    }
}
