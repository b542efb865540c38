#pragma once

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <span>
#include <stdexcept>
#include <vector>

#include "spinpair/coupling.hpp"
#include "spinpair/fields.hpp"
#include "spinpair/noise.hpp"
#include "spinpair/observables.hpp"

namespace spinpair {

struct IntegrationConfig {
    double rel_tol = 1e-10;
    double abs_tol = 1e-12;
    double max_step = 0.0;  // 0: no explicit cap
    enum class Method {
        AdaptiveRk,           // embedded Dormand-Prince 5(4) with step control
        ExponentialMidpoint,  // unitary exp(-i H_avg h) per sub-interval
    };
    Method method = Method::AdaptiveRk;
};

/// Raised when step control can no longer make progress; carries the time
/// the integration reached.
class IntegrationError : public std::runtime_error {
  public:
    IntegrationError(const std::string& what, double t_reached)
        : std::runtime_error(what), t_reached_(t_reached) {}
    double t_reached() const { return t_reached_; }

  private:
    double t_reached_;
};

template <class Value>
struct Trajectory {
    std::vector<double> times;
    std::vector<Value> values;
};

using Su2Trajectory = Trajectory<SU2Propagator>;
using FullTrajectory = Trajectory<Eigen::MatrixXcd>;

namespace detail {

/// Dormand-Prince 5(4). The controller holds the error per unit step below
/// tol * h / span, so the requested tolerances approximate the global error
/// rather than the per-step one. Integrates the state through every
/// requested output time exactly; `on_output` is called once per output time
/// in order.
template <class State, class Rhs, class Output, class NextBreak>
void dopri5(Rhs&& rhs, State y, double t0, double t1, std::span<const double> outputs,
            const IntegrationConfig& cfg, Output&& on_output, NextBreak&& next_break) {
    static const double a21 = 1.0 / 5;
    static const double a31 = 3.0 / 40, a32 = 9.0 / 40;
    static const double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
    static const double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561,
                        a54 = -212.0 / 729;
    static const double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247,
                        a64 = 49.0 / 176, a65 = -5103.0 / 18656;
    static const double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192,
                        b5 = -2187.0 / 6784, b6 = 11.0 / 84;
    static const double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920,
                        e5 = -17253.0 / 339200, e6 = 22.0 / 525, e7 = -1.0 / 40;
    static const double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;

    const double span_total = t1 - t0;
    const double max_step = cfg.max_step > 0 ? cfg.max_step : span_total;
    double h_ctrl = std::min(max_step, span_total * 1e-3);
    double t = t0;
    std::size_t next_out = 0;

    auto emit_outputs_at = [&](double tc, const State& yc) {
        while (next_out < outputs.size() && outputs[next_out] <= tc + 1e-12 * std::max(1.0, std::abs(tc))) {
            on_output(outputs[next_out], yc);
            ++next_out;
        }
    };
    emit_outputs_at(t, y);

    State k1 = rhs(t, y);
    while (t < t1 - 1e-14 * std::max(1.0, std::abs(t1))) {
        // Steps land exactly on output times and on interpolation breakpoints
        // of tabulated drivers / noise paths, so every step sees a smooth
        // right-hand side.
        double target = std::min(t1, next_break(t));
        if (next_out < outputs.size()) target = std::min(target, outputs[next_out]);
        double h = std::min({h_ctrl, max_step, target - t});
        bool step_clipped = h < h_ctrl;

        for (;;) {
            if (!(h > 16.0 * std::numeric_limits<double>::epsilon() * std::max(1.0, std::abs(t))))
                throw IntegrationError("step size underflow", t);
            State k2 = rhs(t + c2 * h, (y + h * (a21 * k1)).eval());
            State k3 = rhs(t + c3 * h, (y + h * (a31 * k1 + a32 * k2)).eval());
            State k4 = rhs(t + c4 * h, (y + h * (a41 * k1 + a42 * k2 + a43 * k3)).eval());
            State k5 = rhs(t + c5 * h, (y + h * (a51 * k1 + a52 * k2 + a53 * k3 + a54 * k4)).eval());
            State k6 = rhs(t + h, (y + h * (a61 * k1 + a62 * k2 + a63 * k3 + a64 * k4 + a65 * k5)).eval());
            State ynew = y + h * (b1 * k1 + b3 * k3 + b4 * k4 + b5 * k5 + b6 * k6);
            State k7 = rhs(t + h, ynew);
            State err = (h * (e1 * k1 + e3 * k3 + e4 * k4 + e5 * k5 + e6 * k6 + e7 * k7)).eval();

            const double budget = h / span_total;
            const double floor = 50.0 * std::numeric_limits<double>::epsilon();  // roundoff limit
            const auto scale =
                ((cfg.abs_tol +
                  cfg.rel_tol * y.cwiseAbs().cwiseMax(ynew.cwiseAbs()).array()) *
                     budget +
                 floor * y.cwiseAbs().cwiseMax(ynew.cwiseAbs()).array() + 1e-300)
                    .matrix();
            const double ratio = (err.cwiseAbs().array() / scale.array()).maxCoeff();

            if (ratio <= 1.0) {
                t += h;
                y = std::move(ynew);
                k1 = std::move(k7);
                emit_outputs_at(t, y);
                const double grow = 0.9 * std::pow(std::max(ratio, 1e-10), -0.25);
                const double h_new = h * std::clamp(grow, 0.2, 5.0);
                if (!step_clipped || h_new > h_ctrl) h_ctrl = std::min(h_new, max_step);
                break;
            }
            h *= std::clamp(0.9 * std::pow(ratio, -0.25), 0.1, 0.9);
            step_clipped = false;
            h_ctrl = h;
        }
    }
    emit_outputs_at(t1 + 1.0, y);  // flush outputs coinciding with t1
}

inline std::array<double, 3> effective_field(const FieldDriver& driver, const NoisePath* noise,
                                             double t) {
    const FieldSample s = sample(driver, t);
    std::array<double, 3> f{s.x, s.y, s.z};
    if (noise) {
        const auto e = noise->at(t);
        f[0] += e[0];
        f[1] += e[1];
        f[2] += e[2];
    }
    return f;
}

/// Fixed sub-interval boundaries for the exponential-midpoint method: the
/// union of noise samples, tabulated-driver breakpoints, output times and the
/// max_step cap.
template <class StepFn, class Output>
void exponential_midpoint_walk(const FieldDriver& driver, const NoisePath* noise, double t0,
                               double t1, std::span<const double> outputs,
                               const IntegrationConfig& cfg, StepFn&& do_step,
                               Output&& on_output) {
    const double fallback = (t1 - t0) / 4096.0;
    const double max_step = cfg.max_step > 0 ? cfg.max_step : (noise ? t1 - t0 : fallback);
    double t = t0;
    std::size_t next_out = 0;
    auto flush = [&](double tc) {
        while (next_out < outputs.size() &&
               outputs[next_out] <= tc + 1e-12 * std::max(1.0, std::abs(tc))) {
            on_output(outputs[next_out]);
            ++next_out;
        }
    };
    flush(t);
    while (t < t1 - 1e-14 * std::max(1.0, std::abs(t1))) {
        double te = std::min(t1, t + max_step);
        if (noise) te = std::min(te, noise->next_breakpoint(t));
        if (auto bp = next_breakpoint(driver, t)) te = std::min(te, *bp);
        if (next_out < outputs.size()) te = std::min(te, outputs[next_out]);
        if (!(te > t))
            throw IntegrationError("exponential midpoint step underflow", t);
        do_step(t, te);
        t = te;
        flush(t);
    }
    flush(t1 + 1.0);
}

}  // namespace detail

/// Integrate the spin-1/2 Cauchy problem i dU/dt = (Omega(t) + eta(t)) . s U
/// and return the (a, b) amplitudes at the requested grid times (renormalized
/// on output). Deterministic for fixed inputs.
inline Su2Trajectory solve_su2(const FieldDriver& driver, const NoisePath* noise, double t0,
                               double t1, std::span<const double> grid,
                               const IntegrationConfig& cfg = {}) {
    if (!(t0 < t1)) throw std::domain_error("solve_su2: need t0 < t1");
    if (grid.empty()) throw std::domain_error("solve_su2: empty output grid");
    if (noise && (noise->t0 > t0 + 1e-9 || noise->t_end() < t1 - 1e-9))
        throw std::domain_error("solve_su2: noise path does not cover the integration window");
    for (std::size_t i = 0; i < grid.size(); ++i) {
        if (grid[i] < t0 - 1e-12 || grid[i] > t1 + 1e-12)
            throw std::domain_error("solve_su2: grid point outside [t0, t1]");
        if (i > 0 && !(grid[i] > grid[i - 1]))
            throw std::domain_error("solve_su2: grid must be ascending");
    }

    Su2Trajectory out;
    out.times.assign(grid.begin(), grid.end());
    out.values.reserve(grid.size());

    if (cfg.method == IntegrationConfig::Method::AdaptiveRk) {
        auto rhs = [&](double t, const Eigen::Vector2cd& psi) -> Eigen::Vector2cd {
            const auto f = detail::effective_field(driver, noise, t);
            const Complex off(f[0], -f[1]);
            Eigen::Vector2cd d;
            d(0) = Complex(0.0, -0.5) * (f[2] * psi(0) + off * psi(1));
            d(1) = Complex(0.0, -0.5) * (std::conj(off) * psi(0) - f[2] * psi(1));
            return d;
        };
        Eigen::Vector2cd psi(1.0, 0.0);
        auto breaks = [&](double t) {
            double next = t1;
            if (auto bp = next_breakpoint(driver, t)) next = std::min(next, *bp);
            if (noise) next = std::min(next, noise->next_breakpoint(t));
            return next > t ? next : t1;
        };
        detail::dopri5(
            rhs, psi, t0, t1, grid, cfg,
            [&](double, const Eigen::Vector2cd& y) {
                out.values.emplace_back(y(0), -std::conj(y(1)));
            },
            breaks);
    } else {
        Eigen::Vector2cd psi(1.0, 0.0);
        auto do_step = [&](double ta, double tb) {
            const auto fa = detail::effective_field(driver, noise, ta);
            const auto fb = detail::effective_field(driver, noise, tb);
            const double h = tb - ta;
            const double wx = 0.5 * (fa[0] + fb[0]);
            const double wy = 0.5 * (fa[1] + fb[1]);
            const double wz = 0.5 * (fa[2] + fb[2]);
            const double w = std::sqrt(wx * wx + wy * wy + wz * wz);
            if (w == 0.0) return;
            const double phi = 0.5 * w * h;
            const double c = std::cos(phi);
            const double s = std::sin(phi) / w;
            const Complex u11(c, -s * wz);
            const Complex u12(-s * wy, -s * wx);
            const Complex psi0 = psi(0), psi1 = psi(1);
            psi(0) = u11 * psi0 + u12 * psi1;
            psi(1) = -std::conj(u12) * psi0 + std::conj(u11) * psi1;
        };
        detail::exponential_midpoint_walk(driver, noise, t0, t1, grid, cfg, do_step,
                                          [&](double) {
                                              out.values.emplace_back(psi(0), -std::conj(psi(1)));
                                          });
    }
    return out;
}

inline Su2Trajectory solve_su2(const FieldDriver& driver, double t0, double t1,
                               std::span<const double> grid, const IntegrationConfig& cfg = {}) {
    return solve_su2(driver, nullptr, t0, t1, grid, cfg);
}

/// Direct integration of the full two-spin problem in the standard basis,
/// i dU/dt = H(t) U with H = (Omega + eta) . (j1 + j2) - lambda j1 . j2.
/// Serves as the independent cross-check of the block construction.
inline FullTrajectory solve_full(const SpinPair& pair, const FieldDriver& driver,
                                 const NoisePath* noise, double t0, double t1,
                                 std::span<const double> grid,
                                 const IntegrationConfig& cfg = {}) {
    if (pair.dim() > 64) throw std::domain_error("solve_full: dimension cap (64) exceeded");
    if (!(t0 < t1)) throw std::domain_error("solve_full: need t0 < t1");
    if (grid.empty()) throw std::domain_error("solve_full: empty output grid");
    if (noise && (noise->t0 > t0 + 1e-9 || noise->t_end() < t1 - 1e-9))
        throw std::domain_error("solve_full: noise path does not cover the integration window");
    for (std::size_t i = 0; i < grid.size(); ++i) {
        if (grid[i] < t0 - 1e-12 || grid[i] > t1 + 1e-12)
            throw std::domain_error("solve_full: grid point outside [t0, t1]");
        if (i > 0 && !(grid[i] > grid[i - 1]))
            throw std::domain_error("solve_full: grid must be ascending");
    }

    const PairOperators ops = pair_operators(pair);
    const Eigen::MatrixXcd h_int = -pair.lambda * ops.heisenberg;
    const int d = pair.dim();

    auto hamiltonian = [&](const std::array<double, 3>& f) -> Eigen::MatrixXcd {
        return f[0] * ops.Jx + f[1] * ops.Jy + f[2] * ops.Jz + h_int;
    };

    FullTrajectory out;
    out.times.assign(grid.begin(), grid.end());
    out.values.reserve(grid.size());

    if (cfg.method == IntegrationConfig::Method::AdaptiveRk) {
        auto rhs = [&](double t, const Eigen::MatrixXcd& u) -> Eigen::MatrixXcd {
            return Complex(0.0, -1.0) * (hamiltonian(detail::effective_field(driver, noise, t)) * u);
        };
        Eigen::MatrixXcd u = Eigen::MatrixXcd::Identity(d, d);
        auto breaks = [&](double t) {
            double next = t1;
            if (auto bp = next_breakpoint(driver, t)) next = std::min(next, *bp);
            if (noise) next = std::min(next, noise->next_breakpoint(t));
            return next > t ? next : t1;
        };
        detail::dopri5(
            rhs, u, t0, t1, grid, cfg,
            [&](double, const Eigen::MatrixXcd& y) { out.values.push_back(y); }, breaks);
    } else {
        Eigen::MatrixXcd u = Eigen::MatrixXcd::Identity(d, d);
        auto do_step = [&](double ta, double tb) {
            const auto fa = detail::effective_field(driver, noise, ta);
            const auto fb = detail::effective_field(driver, noise, tb);
            const std::array<double, 3> favg{0.5 * (fa[0] + fb[0]), 0.5 * (fa[1] + fb[1]),
                                             0.5 * (fa[2] + fb[2])};
            const Eigen::MatrixXcd h = hamiltonian(favg);
            Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(h);
            const Eigen::VectorXd& ev = es.eigenvalues();
            Eigen::VectorXcd phases(d);
            for (int i = 0; i < d; ++i) phases(i) = std::exp(Complex(0.0, -ev(i) * (tb - ta)));
            u = es.eigenvectors() * phases.asDiagonal() * es.eigenvectors().adjoint() * u;
        };
        detail::exponential_midpoint_walk(driver, noise, t0, t1, grid, cfg, do_step,
                                          [&](double) { out.values.push_back(u); });
    }
    return out;
}

inline FullTrajectory solve_full(const SpinPair& pair, const FieldDriver& driver, double t0,
                                 double t1, std::span<const double> grid,
                                 const IntegrationConfig& cfg = {}) {
    return solve_full(pair, driver, nullptr, t0, t1, grid, cfg);
}

}  // namespace spinpair
