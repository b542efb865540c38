#pragma once

#include <atomic>
#include <cstdlib>
#include <thread>

#include "spinpair/scenario.hpp"

namespace spinpair {

/// Raised when more than 1% of the trajectories of an ensemble fail.
class EnsembleError : public std::runtime_error {
  public:
    EnsembleError(long failed, long total)
        : std::runtime_error("ensemble run failed: " + std::to_string(failed) + " of " +
                             std::to_string(total) + " trajectories did not integrate"),
          failed_(failed),
          total_(total) {}
    long failed() const { return failed_; }
    long total() const { return total_; }

  private:
    long failed_, total_;
};

/// Mean and standard-error series per observable; rows follow the scenario
/// output grid.
struct EnsembleResult {
    std::vector<double> times;
    std::vector<std::string> observable_names;
    Eigen::MatrixXd mean;          // times x observables
    Eigen::MatrixXd standard_error;
    long n_trajectories = 0;
    long n_failed = 0;
};

namespace detail {

/// Precomputed pieces shared by every trajectory of a run.
struct ObservableEvaluator {
    const Scenario& sc;
    PairOperators ops;
    PairState initial;
    std::vector<Eigen::VectorXcd> targets;  // per observable; empty if not a projection

    explicit ObservableEvaluator(const Scenario& scenario)
        : sc(scenario), ops(pair_operators(scenario.pair)), initial(scenario.initial_state()) {
        targets.reserve(sc.observables.size());
        for (const auto& obs : sc.observables) {
            if (obs.kind != Observable::Kind::Projection) {
                targets.emplace_back();
                continue;
            }
            switch (obs.target) {
                case Observable::Target::Stretched:
                    targets.push_back(PairState::stretched(sc.pair).vector());
                    break;
                case Observable::Target::Flipped:
                    targets.push_back(
                        PairState::basis_state(sc.pair, -sc.pair.j1, -sc.pair.j2).vector());
                    break;
                case Observable::Target::MPair:
                    targets.push_back(PairState::basis_state(sc.pair, obs.m1, obs.m2).vector());
                    break;
                case Observable::Target::PsiPlus:
                case Observable::Target::PsiMinus: {
                    Eigen::VectorXcd psi = Eigen::VectorXcd::Zero(sc.pair.dim());
                    psi(1) = 1.0 / std::sqrt(2.0);
                    psi(2) = (obs.target == Observable::Target::PsiPlus ? 1.0 : -1.0) /
                             std::sqrt(2.0);
                    targets.push_back(psi);
                    break;
                }
                case Observable::Target::None: targets.emplace_back(); break;
            }
        }
    }

    void evaluate(const PairState& state_std, double* out) const {
        for (size_t i = 0; i < sc.observables.size(); ++i) {
            const auto& obs = sc.observables[i];
            switch (obs.kind) {
                case Observable::Kind::Jz: out[i] = expectation(state_std, ops.Jz); break;
                case Observable::Kind::J1z: out[i] = expectation(state_std, ops.j1z); break;
                case Observable::Kind::J2z: out[i] = expectation(state_std, ops.j2z); break;
                case Observable::Kind::Jsq: out[i] = expectation(state_std, ops.Jsq); break;
                case Observable::Kind::Projection: {
                    if (state_std.is_pure()) {
                        const Complex amp = targets[i].adjoint() * state_std.vector();
                        out[i] = std::norm(amp);
                    } else {
                        const Complex v =
                            targets[i].adjoint() * (state_std.density() * targets[i]);
                        out[i] = v.real();
                    }
                    break;
                }
            }
        }
    }
};

/// One trajectory: integrate with the given noise path and fill the
/// (grid x observables) table, row-major.
inline void run_single(const Scenario& sc, const ObservableEvaluator& eval,
                       const NoisePath* noise, const std::vector<double>& grid, double* out) {
    const size_t n_obs = sc.observables.size();
    if (sc.engine == Engine::Block) {
        const Su2Trajectory traj =
            solve_su2(sc.driver, noise, sc.t_start, sc.t_end, grid, sc.integration);
        for (size_t g = 0; g < grid.size(); ++g) {
            const PairPropagator u = assemble_pair_propagator(
                sc.pair, grid[g] - sc.t_start, traj.values[g], Basis::Standard);
            eval.evaluate(eval.initial.evolved(u), out + g * n_obs);
        }
    } else {
        const FullTrajectory traj =
            solve_full(sc.pair, sc.driver, noise, sc.t_start, sc.t_end, grid, sc.integration);
        for (size_t g = 0; g < grid.size(); ++g) {
            PairPropagator u;
            u.pair = sc.pair;
            u.t = grid[g] - sc.t_start;
            u.basis = Basis::Standard;
            u.matrix = traj.values[g];
            eval.evaluate(eval.initial.evolved(u), out + g * n_obs);
        }
    }
}

inline unsigned ensemble_thread_count() {
    if (const char* env = std::getenv("SPINPAIR_THREADS")) {
        const int n = std::atoi(env);
        if (n > 0) return static_cast<unsigned>(n);
    }
    const unsigned hw = std::thread::hardware_concurrency();
    return hw > 0 ? hw : 1;
}

}  // namespace detail

/// Monte Carlo average over noise realizations. Trajectory k always draws
/// its noise from a seed derived from (master_seed, k), and partial sums are
/// combined in fixed block order, so the result is bitwise independent of
/// the worker count.
inline EnsembleResult run_ensemble(const Scenario& sc) {
    if (!sc.noise) throw std::domain_error("run_ensemble: scenario has no noise model");
    if (!sc.ensemble) throw std::domain_error("run_ensemble: scenario has no ensemble config");

    const NoiseModel& model = *sc.noise;
    const EnsembleConfig& cfg = *sc.ensemble;
    const std::vector<double> grid = sc.grid();
    const detail::ObservableEvaluator eval(sc);
    const size_t n_obs = sc.observables.size();
    const size_t cells = grid.size() * n_obs;
    const long n_traj = cfg.n_trajectories;

    double step = cfg.path_step > 0 ? cfg.path_step : 1.0 / (20.0 * model.lambda_corr);
    const double span = sc.t_end - sc.t_start;
    const std::size_t n_samples = std::max<std::size_t>(2, static_cast<std::size_t>(
                                                                std::ceil(span / step)) + 1);
    const double dt = span / static_cast<double>(n_samples - 1);
    if (dt > 1.0 / (10.0 * model.lambda_corr))
        throw std::domain_error("run_ensemble: path grid step must be <= 1/(10 Lambda)");

    constexpr long kBlock = 32;
    const long n_blocks = (n_traj + kBlock - 1) / kBlock;
    std::vector<std::vector<double>> block_s1(n_blocks), block_s2(n_blocks);
    std::vector<long> block_fail(n_blocks, 0);
    std::vector<long> block_count(n_blocks, 0);

    std::atomic<long> next_block{0};
    auto worker = [&]() {
        std::vector<double> vals(cells);
        for (;;) {
            const long b = next_block.fetch_add(1);
            if (b >= n_blocks) break;
            auto& s1 = block_s1[b];
            auto& s2 = block_s2[b];
            s1.assign(cells, 0.0);
            s2.assign(cells, 0.0);
            const long k_end = std::min<long>(n_traj, (b + 1) * kBlock);
            for (long k = b * kBlock; k < k_end; ++k) {
                const std::uint64_t seed = rng::trajectory_seed(cfg.master_seed,
                                                                static_cast<std::uint64_t>(k));
                const NoisePath path = sample_noise_path(model, sc.t_start, dt, n_samples, seed);
                try {
                    detail::run_single(sc, eval, &path, grid, vals.data());
                } catch (const IntegrationError&) {
                    ++block_fail[b];
                    continue;
                }
                ++block_count[b];
                for (size_t i = 0; i < cells; ++i) {
                    s1[i] += vals[i];
                    s2[i] += vals[i] * vals[i];
                }
            }
        }
    };

    const unsigned n_threads =
        std::min<unsigned>(detail::ensemble_thread_count(), static_cast<unsigned>(n_blocks));
    if (n_threads <= 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        pool.reserve(n_threads);
        for (unsigned i = 0; i < n_threads; ++i) pool.emplace_back(worker);
        for (auto& th : pool) th.join();
    }

    std::vector<double> s1(cells, 0.0), s2(cells, 0.0);
    long n_ok = 0, n_failed = 0;
    for (long b = 0; b < n_blocks; ++b) {
        for (size_t i = 0; i < cells; ++i) {
            s1[i] += block_s1[b][i];
            s2[i] += block_s2[b][i];
        }
        n_ok += block_count[b];
        n_failed += block_fail[b];
    }
    if (n_failed * 100 > n_traj) throw EnsembleError(n_failed, n_traj);

    EnsembleResult result;
    result.times = grid;
    for (const auto& obs : sc.observables) result.observable_names.push_back(obs.name);
    result.n_trajectories = n_ok;
    result.n_failed = n_failed;
    result.mean.resize(grid.size(), n_obs);
    result.standard_error.resize(grid.size(), n_obs);
    for (size_t g = 0; g < grid.size(); ++g) {
        for (size_t o = 0; o < n_obs; ++o) {
            const size_t i = g * n_obs + o;
            const double mean = s1[i] / n_ok;
            double se = 0.0;
            if (n_ok > 1) {
                const double var = std::max(0.0, (s2[i] - s1[i] * s1[i] / n_ok) / (n_ok - 1));
                se = std::sqrt(var / n_ok);
            }
            result.mean(g, o) = mean;
            result.standard_error(g, o) = se;
        }
    }
    return result;
}

}  // namespace spinpair
