#ifndef DCLOCATE_TESTS_SUPPORT_HPP
#define DCLOCATE_TESTS_SUPPORT_HPP

#include <cmath>
#include <cstdint>
#include <functional>
#include <random>
#include <string>

#include <Eigen/Dense>

#include "dclocate/dclocate.hpp"

namespace testing_support {

using dclocate::Matrix;
using dclocate::Vector;

inline std::string data_path(const std::string& name) { return std::string(DCLOCATE_DATA_DIR) + "/" + name; }

// Test-side randomness is std::mt19937_64, independent of the library's generator.
class Sampler {
public:
    explicit Sampler(std::uint64_t seed) : eng_(seed) {}

    double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(eng_); }
    double normal() { return std::normal_distribution<double>(0.0, 1.0)(eng_); }
    int integer(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(eng_); }

    Vector vector(Eigen::Index n, double lo = -3.0, double hi = 3.0) {
        Vector v(n);
        for (Eigen::Index i = 0; i < n; ++i) v[i] = uniform(lo, hi);
        return v;
    }

    Matrix matrix(Eigen::Index rows, Eigen::Index cols, double lo = -3.0, double hi = 3.0) {
        Matrix m(rows, cols);
        for (Eigen::Index i = 0; i < rows; ++i)
            for (Eigen::Index j = 0; j < cols; ++j) m(i, j) = uniform(lo, hi);
        return m;
    }

    // Uniform point of the unit l_p ball by rejection from the cube.
    Vector in_unit_ball(dclocate::GaugeKind kind, Eigen::Index n) {
        for (;;) {
            Vector v = vector(n, -1.0, 1.0);
            if (dclocate::gauge_value(dclocate::GaugeBall(kind, n), v) <= 1.0) return v;
        }
    }

    std::mt19937_64& engine() { return eng_; }

private:
    std::mt19937_64 eng_;
};

inline dclocate::GaugeKind kind_at(int i) {
    constexpr dclocate::GaugeKind kinds[] = {dclocate::GaugeKind::EuclideanBall,
                                             dclocate::GaugeKind::CrossPolytope,
                                             dclocate::GaugeKind::Box};
    return kinds[i % 3];
}

// Central differences with step h over every entry of x.
template <class State>
State central_difference(const std::function<double(const State&)>& f, const State& x, double h = 1e-6) {
    State g = State::Zero(x.rows(), x.cols());
    State probe = x;
    for (Eigen::Index i = 0; i < x.size(); ++i) {
        const double orig = probe.data()[i];
        probe.data()[i] = orig + h;
        const double up = f(probe);
        probe.data()[i] = orig - h;
        const double down = f(probe);
        probe.data()[i] = orig;
        g.data()[i] = (up - down) / (2.0 * h);
    }
    return g;
}

template <class A, class B>
double relative_error(const A& approx, const B& exact) {
    const double scale = exact.norm();
    return (approx - exact).norm() / (scale > 0.0 ? scale : 1.0);
}

// max_r sum_{l != r} z_l, computed directly.
inline double max_partial_sum(const std::vector<double>& z) {
    double total = 0.0;
    for (double v : z) total += v;
    double best = -INFINITY;
    for (double v : z) best = std::max(best, total - v);
    return z.size() == 1 ? 0.0 : best;
}

}  // namespace testing_support

#endif
