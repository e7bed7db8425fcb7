#ifndef DCLOCATE_RUN_HPP
#define DCLOCATE_RUN_HPP

#include <algorithm>
#include <atomic>
#include <cstdint>
#include <exception>
#include <filesystem>
#include <fstream>
#include <optional>
#include <ostream>
#include <string>
#include <thread>
#include <variant>
#include <vector>

#include <Eigen/Dense>
#include <nlohmann/json.hpp>

#include "dclocate/dca.hpp"
#include "dclocate/errors.hpp"
#include "dclocate/fermat_torricelli.hpp"
#include "dclocate/gauge.hpp"
#include "dclocate/io.hpp"
#include "dclocate/multifacility.hpp"
#include "dclocate/rng.hpp"
#include "dclocate/set_clustering.hpp"

namespace dclocate {

enum class SolverKind { FermatTorricelli, Multifacility, SetClustering };

inline std::string_view to_string(SolverKind kind) {
    switch (kind) {
        case SolverKind::FermatTorricelli: return "ft";
        case SolverKind::Multifacility: return "mfl";
        case SolverKind::SetClustering: return "setclust";
    }
    return "?";
}

inline SolverKind parse_solver_kind(std::string_view name) {
    if (name == "ft") return SolverKind::FermatTorricelli;
    if (name == "mfl") return SolverKind::Multifacility;
    if (name == "setclust") return SolverKind::SetClustering;
    throw ValidationError("unknown solver '" + std::string(name) + "' (expected ft, mfl or setclust)");
}

struct RunConfig {
    SolverKind solver = SolverKind::FermatTorricelli;
    // 0 selects the solver's default: 4 (ft), 5 (mfl), 7 (setclust).
    int algorithm = 0;
    GaugeKind gauge = GaugeKind::EuclideanBall;
    double radius = 1.0;
    int k = 1;
    double mu0 = 0.1;
    double mu_star = 1e-6;
    int stages = 3;
    double centroid_tol = 1e-6;
    std::size_t max_inner_iter = 10000;
    int starts = 1;
    std::optional<std::uint64_t> seed;
    std::string input;
    std::optional<std::size_t> weights_col;
    bool has_header = false;
    std::string out;
    std::string trace;
    // Worker threads for the starts; 0 picks hardware concurrency.
    unsigned threads = 1;
    // Adds wall-clock times to the result document, which then differs between runs.
    bool timings = false;
    // Render setclust centroids as latitude/longitude strings as well.
    bool geographic = false;

    int effective_algorithm() const {
        if (algorithm != 0) return algorithm;
        switch (solver) {
            case SolverKind::FermatTorricelli: return 4;
            case SolverKind::Multifacility: return 5;
            case SolverKind::SetClustering: return 7;
        }
        return 0;
    }

    SmoothingSchedule schedule() const { return {mu0, mu_star, stages, 0.0}; }
    StopRule stop_rule() const { return {centroid_tol, max_inner_iter}; }

    void validate() const {
        const int alg = effective_algorithm();
        switch (solver) {
            case SolverKind::FermatTorricelli:
                if (alg != 3 && alg != 4) throw ValidationError("ft supports --alg 3 or 4");
                break;
            case SolverKind::Multifacility:
                if (alg != 5 && alg != 6) throw ValidationError("mfl supports --alg 5 or 6");
                break;
            case SolverKind::SetClustering:
                if (alg != 7) throw ValidationError("setclust supports --alg 7");
                if (gauge != GaugeKind::EuclideanBall || radius != 1.0)
                    throw ValidationError("setclust uses squared Euclidean distance only");
                break;
        }
        if (!(radius > 0.0)) throw ValidationError("--radius must be positive");
        if (k < 1) throw ValidationError("--k must be >= 1");
        if (starts < 1) throw ValidationError("--starts must be >= 1");
        if (starts > 1 && !seed) throw ValidationError("--seed is required when --starts > 1");
        if (!(centroid_tol >= 0.0)) throw ValidationError("--tol must be >= 0");
        if (max_inner_iter < 1) throw ValidationError("--max-iter must be >= 1");
        if (weights_col && solver != SolverKind::FermatTorricelli)
            throw ValidationError("--weights-col applies to ft only");
        try {
            if (solver != SolverKind::SetClustering) schedule().validate();
        } catch (const ParameterError& e) {
            throw ValidationError(e.what());
        }
    }

    nlohmann::ordered_json to_json() const {
        nlohmann::ordered_json j;
        j["solver"] = std::string(to_string(solver));
        j["algorithm"] = effective_algorithm();
        if (solver != SolverKind::SetClustering) {
            j["gauge"] = std::string(to_string(gauge));
            j["radius"] = radius;
        }
        if (solver != SolverKind::FermatTorricelli) j["k"] = k;
        if (solver != SolverKind::SetClustering) {
            j["mu0"] = mu0;
            j["mu_star"] = mu_star;
            j["stages"] = stages;
            j["sigma"] = schedule().effective_sigma();
        }
        j["centroid_tol"] = centroid_tol;
        j["max_inner_iter"] = max_inner_iter;
        j["starts"] = starts;
        j["seed"] = seed ? nlohmann::ordered_json(*seed) : nlohmann::ordered_json(nullptr);
        j["input"] = input;
        if (weights_col) j["weights_col"] = *weights_col;
        j["has_header"] = has_header;
        return j;
    }
};

// Parsed input for one of the three solvers.
using ProblemData = std::variant<WeightedAnchors, AnchorMatrix, SetClusterInstance>;

inline ProblemData load_problem(const RunConfig& config) {
    const CsvOptions options{config.weights_col, config.has_header};
    switch (config.solver) {
        case SolverKind::FermatTorricelli:
            return load_weighted_anchors_csv(config.input, options);
        case SolverKind::Multifacility:
            return load_anchor_matrix_csv(config.input, options);
        case SolverKind::SetClustering:
            return SetClusterInstance(load_sets_csv(config.input), config.k);
    }
    throw ValidationError("unknown solver");
}

// Outcome of a single start. The state is a 1 x n matrix for ft.
struct StartResult {
    std::size_t start = 0;
    SolveReport<Matrix> report;
    std::vector<Eigen::Index> assignments;
    std::exception_ptr error;
};

struct RunOutcome {
    nlohmann::ordered_json document;
    std::vector<StartResult> starts;
    std::size_t best_start = 0;
};

namespace detail {

inline SolveReport<Matrix> as_matrix_report(SolveReport<Vector>&& r) {
    SolveReport<Matrix> out;
    out.final_state = r.final_state.transpose();
    out.inner_iterations_per_stage = std::move(r.inner_iterations_per_stage);
    out.trace = std::move(r.trace);
    out.stage_start_smoothed = std::move(r.stage_start_smoothed);
    out.final_mu = r.final_mu;
    out.elapsed_seconds = r.elapsed_seconds;
    out.stationarity_gap = r.stationarity_gap;
    out.converged = r.converged;
    out.warnings = std::move(r.warnings);
    return out;
}

inline void solve_one(const RunConfig& config, const ProblemData& data, StartResult& result) {
    SplitMix64 rng = start_generator(config.seed.value_or(0), result.start);
    const int alg = config.effective_algorithm();
    const auto sched = config.schedule();
    const auto stop = config.stop_rule();
    if (const auto* W = std::get_if<WeightedAnchors>(&data)) {
        const GaugeBall F(config.gauge, W->dim(), config.radius);
        const Vector x0 = ft_start_point(*W, result.start, rng);
        const auto variant = alg == 3 ? FtVariant::PartialSmoothing : FtVariant::FullSmoothing;
        FermatTorricelliProblem problem(*W, F, variant, sched.mu0);
        SolveReport<Vector> report;
        try {
            continuation_run(problem, x0, sched, stop, report);
        } catch (...) {
            result.report = as_matrix_report(std::move(report));
            throw;
        }
        const double margin = coercivity_margin(*W, F);
        if (margin <= 0.0)
            report.warnings.push_back("coercivity margin " + format_double(margin) +
                                      " <= 0: a minimizer is not guaranteed to exist");
        result.report = as_matrix_report(std::move(report));
    } else if (const auto* A = std::get_if<AnchorMatrix>(&data)) {
        const GaugeBall F(config.gauge, A->dim(), config.radius);
        const Matrix X0 = forgy_start(A->anchors(), config.k, rng);
        const auto variant = alg == 5 ? MflVariant::ExactMax : MflVariant::SmoothedMax;
        MultifacilityProblem problem(*A, F, config.k, variant, sched.mu0);
        continuation_run(problem, X0, sched, stop, result.report);
        result.assignments = assignments(*A, F, result.report.final_state);
    } else {
        const auto& inst = std::get<SetClusterInstance>(data);
        const Matrix X0 = sc_start(inst, config.k, rng);
        SetClusteringProblem problem(inst);
        dca_run(problem, X0, stop, result.report);
        result.assignments = sc_assignments(inst, result.report.final_state);
    }
}

inline nlohmann::ordered_json matrix_json(const Matrix& X) {
    nlohmann::ordered_json rows = nlohmann::ordered_json::array();
    for (Eigen::Index l = 0; l < X.rows(); ++l) {
        nlohmann::ordered_json row = nlohmann::ordered_json::array();
        for (Eigen::Index d = 0; d < X.cols(); ++d) row.push_back(X(l, d));
        rows.push_back(std::move(row));
    }
    return rows;
}

}  // namespace detail

// Trace file for a start: the configured path itself for a single start,
// otherwise "<stem>.<start><ext>" next to it.
inline std::string trace_path_for(const RunConfig& config, std::size_t start) {
    if (config.trace.empty()) return {};
    if (config.starts == 1) return config.trace;
    const std::filesystem::path p(config.trace);
    auto name = p.stem().string() + "." + std::to_string(start) + p.extension().string();
    return (p.parent_path() / name).string();
}

inline void write_trace_csv(std::ostream& out, const std::vector<TraceRow>& trace) {
    out << "stage,iter,mu,objective_true,objective_smoothed,step_displacement\n";
    for (const auto& row : trace)
        out << row.stage << ',' << row.iter << ',' << format_double(row.mu) << ','
            << format_double(row.objective_true) << ',' << format_double(row.objective_smoothed) << ','
            << format_double(row.step_displacement) << '\n';
}

// Runs config.starts seeded solves. Start s draws its initialization from
// start_generator(seed, s); the best start has the lowest true objective,
// ties going to the lower index. Numerical failures are rethrown after all
// starts finish, with partial traces left in the outcome.
inline RunOutcome run(const RunConfig& config, const ProblemData& data) {
    config.validate();
    RunOutcome outcome;
    outcome.starts.resize(static_cast<std::size_t>(config.starts));
    for (std::size_t s = 0; s < outcome.starts.size(); ++s) outcome.starts[s].start = s;

    unsigned workers = config.threads == 0 ? std::max(1u, std::thread::hardware_concurrency())
                                           : config.threads;
    workers = std::min<unsigned>(workers, static_cast<unsigned>(config.starts));
    std::atomic<std::size_t> next{0};
    const auto work = [&] {
        for (std::size_t s = next++; s < outcome.starts.size(); s = next++) {
            try {
                detail::solve_one(config, data, outcome.starts[s]);
            } catch (...) {
                outcome.starts[s].error = std::current_exception();
            }
        }
    };
    if (workers <= 1) {
        work();
    } else {
        std::vector<std::thread> pool;
        for (unsigned t = 0; t < workers; ++t) pool.emplace_back(work);
        for (auto& t : pool) t.join();
    }

    auto& doc = outcome.document;
    doc["config"] = config.to_json();
    nlohmann::ordered_json summaries = nlohmann::ordered_json::array();
    nlohmann::ordered_json warnings = nlohmann::ordered_json::array();
    std::optional<std::size_t> best;
    for (const auto& r : outcome.starts) {
        nlohmann::ordered_json s;
        s["start"] = r.start;
        if (r.error) {
            s["status"] = "failed";
        } else {
            s["status"] = r.report.converged ? "converged" : "max_inner_iter";
            s["objective"] = r.report.final_objective();
            s["smoothed_objective"] = r.report.trace.back().objective_smoothed;
            s["iterations"] = r.report.total_iterations();
            s["iterations_per_stage"] = r.report.inner_iterations_per_stage;
            s["final_mu"] = r.report.final_mu;
            s["stationarity_gap"] = r.report.stationarity_gap;
            if (config.timings) s["elapsed_seconds"] = r.report.elapsed_seconds;
            if (!best || r.report.final_objective() < outcome.starts[*best].report.final_objective())
                best = r.start;
            for (const auto& w : r.report.warnings)
                if (std::find(warnings.begin(), warnings.end(), w) == warnings.end()) warnings.push_back(w);
        }
        const auto trace = trace_path_for(config, r.start);
        s["trace"] = trace.empty() ? nlohmann::ordered_json(nullptr) : nlohmann::ordered_json(trace);
        summaries.push_back(std::move(s));
    }
    if (best) {
        outcome.best_start = *best;
        const auto& r = outcome.starts[*best];
        nlohmann::ordered_json b;
        b["start"] = *best;
        b["objective"] = r.report.final_objective();
        if (config.solver == SolverKind::FermatTorricelli) {
            nlohmann::ordered_json x = nlohmann::ordered_json::array();
            for (Eigen::Index d = 0; d < r.report.final_state.cols(); ++d) x.push_back(r.report.final_state(0, d));
            b["solution"] = std::move(x);
        } else {
            b["solution"] = detail::matrix_json(r.report.final_state);
            b["assignments"] = r.assignments;
            if (config.geographic && r.report.final_state.cols() == 2) {
                nlohmann::ordered_json geo = nlohmann::ordered_json::array();
                for (Eigen::Index l = 0; l < r.report.final_state.rows(); ++l)
                    geo.push_back(format_geographic(r.report.final_state(l, 0), r.report.final_state(l, 1)));
                b["solution_geographic"] = std::move(geo);
            }
        }
        doc["best"] = std::move(b);
    } else {
        doc["best"] = nullptr;
    }
    doc["starts"] = std::move(summaries);
    doc["warnings"] = std::move(warnings);
    return outcome;
}

// First failure among the starts, by start index.
inline std::exception_ptr first_error(const RunOutcome& outcome) {
    for (const auto& r : outcome.starts)
        if (r.error) return r.error;
    return nullptr;
}

// Writes the result document and per-start traces.
inline void write_outputs(const RunConfig& config, const RunOutcome& outcome) {
    if (!config.out.empty()) {
        std::ofstream out(config.out);
        if (!out) throw ValidationError("cannot write '" + config.out + "'");
        out << outcome.document.dump(2) << '\n';
    }
    for (const auto& r : outcome.starts) {
        const auto path = trace_path_for(config, r.start);
        if (path.empty()) continue;
        std::ofstream out(path);
        if (!out) throw ValidationError("cannot write '" + path + "'");
        write_trace_csv(out, r.report.trace);
    }
}

}  // namespace dclocate

#endif  // DCLOCATE_RUN_HPP
