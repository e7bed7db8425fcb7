#ifndef DCLOCATE_DCA_HPP
#define DCLOCATE_DCA_HPP

#include <chrono>
#include <cmath>
#include <concepts>
#include <cstddef>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "dclocate/errors.hpp"
#include "dclocate/gauge.hpp"

namespace dclocate {

// A difference-of-convex problem f = g - h prepared for the DCA:
//   y_k in dh(x_k)           -> h_subgradient
//   x_{k+1} = grad g*(y_k)   -> g_star_gradient
// g is a strongly convex quadratic in every concrete problem, so the second
// step is single-valued. smoothed_objective is the function actually being
// decreased (f_mu); true_objective is the unsmoothed model.
template <class P>
concept DcProblem = requires(P& p, const P& cp, const typename P::State& x, double mu) {
    typename P::State;
    { cp.h_subgradient(x) } -> std::convertible_to<typename P::State>;
    { cp.g_star_gradient(x) } -> std::convertible_to<typename P::State>;
    { cp.true_objective(x) } -> std::convertible_to<double>;
    { cp.smoothed_objective(x) } -> std::convertible_to<double>;
    { cp.mu() } -> std::convertible_to<double>;
    p.set_mu(mu);
};

struct StopRule {
    double centroid_tol = 1e-6;
    std::size_t max_inner_iter = 10000;

    void validate() const {
        if (!(centroid_tol >= 0.0)) throw ParameterError("centroid tolerance must be >= 0");
        if (max_inner_iter < 1) throw ParameterError("max_inner_iter must be >= 1");
    }
};

// Decreasing smoothing parameters mu0 > sigma*mu0 > ... down to mu_star.
// With sigma == 0 the ratio is derived so that exactly `stages` values are
// used and the last one equals mu_star.
struct SmoothingSchedule {
    double mu0 = 0.1;
    double mu_star = 1e-6;
    int stages = 3;
    double sigma = 0.0;

    void validate() const {
        if (!(mu0 > 0.0) || !std::isfinite(mu0)) throw ParameterError("mu0 must be positive");
        if (!(mu_star > 0.0)) throw ParameterError("mu_star must be positive");
        if (mu0 < mu_star) throw ParameterError("mu0 must be >= mu_star");
        if (stages < 1) throw ParameterError("stages must be >= 1");
        if (sigma != 0.0 && !(sigma > 0.0 && sigma < 1.0))
            throw ParameterError("sigma must lie in (0, 1)");
    }

    double effective_sigma() const {
        if (sigma != 0.0) return sigma;
        if (stages < 2 || mu0 == mu_star) return 1.0;
        return std::pow(mu_star / mu0, 1.0 / static_cast<double>(stages - 1));
    }

    std::vector<double> mu_values() const {
        validate();
        std::vector<double> mus;
        if (mu0 == mu_star) return {mu0};
        if (sigma == 0.0) {
            const double ratio = effective_sigma();
            double mu = mu0;
            for (int s = 0; s < stages; ++s) {
                mus.push_back(s + 1 == stages && stages > 1 ? mu_star : mu);
                mu *= ratio;
            }
            return mus;
        }
        // Explicit ratio: repeat until mu <= mu_star.
        double mu = mu0;
        for (;;) {
            mus.push_back(mu);
            if (mu <= mu_star) break;
            mu *= sigma;
        }
        return mus;
    }
};

struct TraceRow {
    std::size_t stage;  // 1-based
    std::size_t iter;   // 1-based within its stage; 0 for the starting point
    double mu;
    double objective_true;
    double objective_smoothed;
    double step_displacement;
};

template <class State>
struct SolveReport {
    State final_state;
    std::vector<std::size_t> inner_iterations_per_stage;
    // One row for the starting point followed by one row per DCA step.
    std::vector<TraceRow> trace;
    // f_mu of each stage's warm start, evaluated with that stage's mu.
    std::vector<double> stage_start_smoothed;
    double final_mu = 0.0;
    double elapsed_seconds = 0.0;
    // Frobenius norm of the final step.
    double stationarity_gap = 0.0;
    // Every stage met the displacement criterion before max_inner_iter.
    bool converged = true;
    std::vector<std::string> warnings;

    std::size_t total_iterations() const {
        std::size_t total = 0;
        for (auto n : inner_iterations_per_stage) total += n;
        return total;
    }

    std::vector<double> objective_trace() const {
        std::vector<double> out;
        out.reserve(trace.size());
        for (const auto& row : trace) out.push_back(row.objective_true);
        return out;
    }

    std::vector<double> smoothed_trace() const {
        std::vector<double> out;
        out.reserve(trace.size());
        for (const auto& row : trace) out.push_back(row.objective_smoothed);
        return out;
    }

    double final_objective() const { return trace.empty() ? 0.0 : trace.back().objective_true; }
};

namespace detail {

// Sum over centroids of ||x^l - x'^l||; a vector state is one centroid.
inline double centroid_displacement(const Vector& a, const Vector& b) { return (a - b).norm(); }

inline double centroid_displacement(const Matrix& a, const Matrix& b) {
    return (a - b).rowwise().norm().sum();
}

inline std::size_t centroid_count(const Vector&) { return 1; }
inline std::size_t centroid_count(const Matrix& x) { return static_cast<std::size_t>(x.rows()); }

template <class P>
void require_finite(const typename P::State& x, double f_true, double f_smooth, std::size_t stage,
                    std::size_t iter) {
    if (!x.allFinite()) throw NumericalFailure(stage, iter, "non-finite iterate");
    if (!std::isfinite(f_true) || !std::isfinite(f_smooth))
        throw NumericalFailure(stage, iter, "non-finite objective value");
}

// Runs DCA steps at the problem's current mu, appending trace rows.
template <DcProblem P>
typename P::State run_stage(const P& problem, typename P::State x, const StopRule& stop,
                            std::size_t stage, SolveReport<typename P::State>& report) {
    const double threshold = static_cast<double>(centroid_count(x)) * stop.centroid_tol;
    std::size_t iter = 0;
    bool met = false;
    while (iter < stop.max_inner_iter) {
        auto y = problem.h_subgradient(x);
        typename P::State next = problem.g_star_gradient(y);
        ++iter;
        const double step = centroid_displacement(next, x);
        const double f_true = problem.true_objective(next);
        const double f_smooth = problem.smoothed_objective(next);
        report.trace.push_back({stage, iter, problem.mu(), f_true, f_smooth, step});
        if (!next.allFinite() || !std::isfinite(f_true) || !std::isfinite(f_smooth)) {
            report.inner_iterations_per_stage.push_back(iter);
            report.converged = false;
            require_finite<P>(next, f_true, f_smooth, stage, iter);
        }
        report.stationarity_gap = (next - x).norm();
        x = std::move(next);
        if (step < threshold) {
            met = true;
            break;
        }
    }
    report.inner_iterations_per_stage.push_back(iter);
    if (!met) report.converged = false;
    return x;
}

template <DcProblem P>
void record_start(const P& problem, const typename P::State& x0,
                  SolveReport<typename P::State>& report) {
    const double f_true = problem.true_objective(x0);
    const double f_smooth = problem.smoothed_objective(x0);
    report.trace.push_back({1, 0, problem.mu(), f_true, f_smooth, 0.0});
    require_finite<P>(x0, f_true, f_smooth, 1, 0);
}

}  // namespace detail

// Plain DCA at the problem's current smoothing parameter. This form fills
// `report` as it goes, so a NumericalFailure leaves the partial trace behind.
template <DcProblem P>
void dca_run(const P& problem, const typename P::State& x0, const StopRule& stop,
             SolveReport<typename P::State>& report) {
    stop.validate();
    const auto t0 = std::chrono::steady_clock::now();
    report = {};
    report.final_mu = problem.mu();
    report.final_state = x0;
    detail::record_start(problem, x0, report);
    report.stage_start_smoothed.push_back(report.trace.front().objective_smoothed);
    report.final_state = detail::run_stage(problem, x0, stop, 1, report);
    report.elapsed_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

template <DcProblem P>
SolveReport<typename P::State> dca_run(const P& problem, const typename P::State& x0,
                                       const StopRule& stop) {
    SolveReport<typename P::State> report;
    dca_run(problem, x0, stop, report);
    return report;
}

// DCA with mu continuation: stage s runs at the s-th value of the schedule
// and warm-starts from the previous stage's final state.
template <DcProblem P>
void continuation_run(P& problem, const typename P::State& x0, const SmoothingSchedule& sched,
                      const StopRule& stop, SolveReport<typename P::State>& report) {
    stop.validate();
    const std::vector<double> mus = sched.mu_values();
    const auto t0 = std::chrono::steady_clock::now();
    report = {};
    report.final_state = x0;
    problem.set_mu(mus.front());
    detail::record_start(problem, x0, report);
    typename P::State x = x0;
    for (std::size_t s = 0; s < mus.size(); ++s) {
        problem.set_mu(mus[s]);
        report.final_mu = mus[s];
        report.stage_start_smoothed.push_back(problem.smoothed_objective(x));
        x = detail::run_stage(problem, std::move(x), stop, s + 1, report);
        report.final_state = x;
    }
    report.elapsed_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

template <DcProblem P>
SolveReport<typename P::State> continuation_run(P& problem, const typename P::State& x0,
                                                const SmoothingSchedule& sched,
                                                const StopRule& stop) {
    SolveReport<typename P::State> report;
    continuation_run(problem, x0, sched, stop, report);
    return report;
}

// Operational test for d g(x) and d h(x) intersecting: one more DCA step
// from x moves it by less than tol (Frobenius norm).
template <DcProblem P>
bool stationarity_check(const P& problem, const typename P::State& x, double tol) {
    const auto y = problem.h_subgradient(x);
    const typename P::State next = problem.g_star_gradient(y);
    return (next - x).norm() < tol;
}

}  // namespace dclocate

#endif  // DCLOCATE_DCA_HPP
