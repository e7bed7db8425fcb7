// dclocate: command-line front end for the Fermat-Torricelli, multifacility
// location and set clustering solvers.
//
// Exit codes: 0 success, 2 validation or parse error, 3 numerical failure.

#include <cstdint>
#include <exception>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "dclocate/dclocate.hpp"

namespace {

constexpr int kExitValidation = 2;
constexpr int kExitNumerical = 3;

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"DC-programming solvers for facility location and set clustering"};
    dclocate::RunConfig config;

    std::string solver;
    std::string gauge = "l2";
    std::uint64_t seed = 0;
    std::size_t weights_col = 0;

    app.add_option("solver", solver, "Problem to solve")
        ->required()
        ->check(CLI::IsMember({"ft", "mfl", "setclust"}));
    app.add_option("--input", config.input, "CSV of points (ft, mfl) or sets (setclust)")->required();
    auto* weights_opt = app.add_option("--weights-col", weights_col,
                                       "0-based column holding anchor weights (ft)");
    app.add_option("--gauge", gauge, "Unit ball generating the gauge")
        ->check(CLI::IsMember({"l2", "l1", "linf"}));
    app.add_option("--radius", config.radius, "Scale of the gauge ball");
    app.add_option("--k", config.k, "Number of centroids (mfl, setclust)");
    app.add_option("--alg", config.algorithm, "Algorithm: 3|4 (ft), 5|6 (mfl), 7 (setclust)")
        ->check(CLI::IsMember({3, 4, 5, 6, 7}));
    app.add_option("--mu0", config.mu0, "Initial smoothing parameter");
    app.add_option("--mu-star", config.mu_star, "Final smoothing parameter");
    app.add_option("--stages", config.stages, "Number of smoothing stages");
    app.add_option("--tol", config.centroid_tol, "Per-centroid displacement tolerance");
    app.add_option("--max-iter", config.max_inner_iter, "Iteration cap per stage");
    app.add_option("--starts", config.starts, "Number of seeded starts");
    auto* seed_opt = app.add_option("--seed", seed, "64-bit seed for the starts");
    app.add_option("--out", config.out, "Result document path (JSON)");
    app.add_option("--trace", config.trace, "Objective trace path (CSV)");
    app.add_option("--threads", config.threads, "Worker threads (0: all cores)");
    app.add_flag("--has-header", config.has_header, "Skip the first data row of the input");
    app.add_flag("--timings", config.timings, "Record wall-clock times in the result document");
    app.add_flag("--geo", config.geographic, "Also print setclust centroids as lat/long");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitValidation;
    }

    try {
        config.solver = dclocate::parse_solver_kind(solver);
        config.gauge = dclocate::parse_gauge_kind(gauge);
        if (*seed_opt) config.seed = seed;
        if (*weights_opt) config.weights_col = weights_col;
        config.validate();

        const auto data = dclocate::load_problem(config);
        const auto outcome = dclocate::run(config, data);
        dclocate::write_outputs(config, outcome);

        for (const auto& w : outcome.document["warnings"])
            std::cerr << "warning: " << w.get<std::string>() << '\n';
        if (auto error = dclocate::first_error(outcome)) std::rethrow_exception(error);
        if (config.out.empty()) std::cout << outcome.document.dump(2) << '\n';
        if (config.timings)
            for (const auto& r : outcome.starts)
                std::cerr << "start " << r.start << ": " << r.report.elapsed_seconds << " s\n";
        return 0;
    } catch (const dclocate::NumericalFailure& e) {
        std::cerr << "numerical failure: " << e.what() << '\n';
        return kExitNumerical;
    } catch (const dclocate::ParseError& e) {
        std::cerr << "parse error: " << e.what() << '\n';
        return kExitValidation;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitValidation;
    }
}
