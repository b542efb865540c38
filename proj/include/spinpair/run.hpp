#pragma once

#include "spinpair/ensemble.hpp"

namespace spinpair {

/// Run a scenario end to end and produce the output table: deterministic
/// block pipeline (or full-space integration when engine = full), or a Monte
/// Carlo ensemble with mean and standard-error columns when noise and
/// ensemble are configured.
inline SeriesOutput simulate_series(const Scenario& sc) {
    SeriesOutput series;
    const std::vector<double> grid = sc.grid();

    if (sc.noise && sc.ensemble) {
        const EnsembleResult res = run_ensemble(sc);
        series.columns.push_back("t");
        for (const auto& name : res.observable_names) {
            series.columns.push_back(name);
            series.columns.push_back(name + "_se");
        }
        series.comments.push_back("trajectories: " + std::to_string(res.n_trajectories));
        for (size_t g = 0; g < res.times.size(); ++g) {
            std::vector<double> row;
            row.push_back(res.times[g]);
            for (int o = 0; o < res.mean.cols(); ++o) {
                row.push_back(res.mean(g, o));
                row.push_back(res.standard_error(g, o));
            }
            series.rows.push_back(std::move(row));
        }
        return series;
    }

    const detail::ObservableEvaluator eval(sc);
    const size_t n_obs = sc.observables.size();
    std::vector<double> vals(grid.size() * n_obs);
    detail::run_single(sc, eval, nullptr, grid, vals.data());

    series.columns.push_back("t");
    for (const auto& obs : sc.observables) series.columns.push_back(obs.name);
    for (size_t g = 0; g < grid.size(); ++g) {
        std::vector<double> row;
        row.push_back(grid[g]);
        for (size_t o = 0; o < n_obs; ++o) row.push_back(vals[g * n_obs + o]);
        series.rows.push_back(std::move(row));
    }
    return series;
}

struct OracleReport {
    double max_deviation = 0.0;
    double tolerance = 0.0;
    bool pass() const { return max_deviation < tolerance; }
};

/// Integrate the same scenario through the block construction and through
/// direct full-space integration, and report the largest entrywise
/// difference of the two propagators over the output grid. corrupt_cg flips
/// the sign of one basis-transformation column, a negative control that must
/// make the check fail.
inline OracleReport oracle_check(const Scenario& sc, double tolerance, bool corrupt_cg = false) {
    const std::vector<double> grid = sc.grid();
    const Su2Trajectory base =
        solve_su2(sc.driver, nullptr, sc.t_start, sc.t_end, grid, sc.integration);
    const FullTrajectory full =
        solve_full(sc.pair, sc.driver, nullptr, sc.t_start, sc.t_end, grid, sc.integration);

    Eigen::MatrixXd g = cg_matrix(sc.pair);
    if (corrupt_cg) g.col(std::min<int>(1, sc.pair.dim() - 1)) *= -1.0;

    OracleReport report;
    report.tolerance = tolerance;
    for (size_t i = 0; i < grid.size(); ++i) {
        const PairPropagator cb = assemble_pair_propagator(
            sc.pair, grid[i] - sc.t_start, base.values[i], Basis::Coupled);
        const Eigen::MatrixXcd blocked = g * cb.matrix * g.transpose();
        const double dev = (blocked - full.values[i]).cwiseAbs().maxCoeff();
        report.max_deviation = std::max(report.max_deviation, dev);
    }
    return report;
}

}  // namespace spinpair
