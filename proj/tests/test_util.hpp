#pragma once

#include <Eigen/Dense>
#include <complex>

#include "spinpair/noise.hpp"
#include "spinpair/su2.hpp"

namespace testutil {

using spinpair::Complex;

/// Uniform random point on S^3, i.e. a Haar-ish random (a, b) pair.
inline spinpair::SU2Propagator random_su2(spinpair::rng::Stream& rng) {
    const Complex a(rng.next_gaussian(), rng.next_gaussian());
    const Complex b(rng.next_gaussian(), rng.next_gaussian());
    return spinpair::SU2Propagator(a, b);  // constructor normalizes
}

inline double unitarity_defect(const Eigen::MatrixXcd& u) {
    const Eigen::MatrixXcd d =
        u.adjoint() * u - Eigen::MatrixXcd::Identity(u.rows(), u.cols());
    return d.cwiseAbs().maxCoeff();
}

inline double max_abs_diff(const Eigen::MatrixXcd& a, const Eigen::MatrixXcd& b) {
    return (a - b).cwiseAbs().maxCoeff();
}

/// Random normalized pure state of dimension n.
inline Eigen::VectorXcd random_state(spinpair::rng::Stream& rng, int n) {
    Eigen::VectorXcd psi(n);
    for (int i = 0; i < n; ++i) psi(i) = Complex(rng.next_gaussian(), rng.next_gaussian());
    psi.normalize();
    return psi;
}

/// Random density matrix of dimension n (mixture of a few random pure states).
inline Eigen::MatrixXcd random_density(spinpair::rng::Stream& rng, int n, int rank = 3) {
    Eigen::MatrixXcd rho = Eigen::MatrixXcd::Zero(n, n);
    double total = 0.0;
    for (int r = 0; r < rank; ++r) {
        const double w = rng.next_open_unit();
        const Eigen::VectorXcd psi = random_state(rng, n);
        rho += w * psi * psi.adjoint();
        total += w;
    }
    return rho / total;
}

}  // namespace testutil

#include "spinpair/fields.hpp"
#include "spinpair/integrator.hpp"

namespace testutil {

/// Asymptotic sweep amplitudes extracted from a finite window [-T, T].
/// Re-expressing the propagator in the instantaneous eigenbasis of the window
/// edges cancels the O(1/T) truncation oscillation of the raw populations;
/// what remains decays like 1/T^2.
inline spinpair::SU2Propagator lz_asymptotic_amplitudes(double gamma, double alpha, double window,
                                                        const spinpair::IntegrationConfig& cfg = {}) {
    using namespace spinpair;
    const double delta = 2.0 * std::sqrt(gamma * alpha);
    const FieldDriver driver = LandauZenerDriver{delta, alpha};
    const std::vector<double> grid{window};
    const Su2Trajectory traj = solve_su2(driver, nullptr, -window, window, grid, cfg);

    auto frame = [&](double t) {
        const FieldSample f = sample(driver, t);
        Eigen::Matrix2cd h;
        h << 0.5 * f.z, 0.5 * Complex(f.x, -f.y), 0.5 * Complex(f.x, f.y), -0.5 * f.z;
        Eigen::SelfAdjointEigenSolver<Eigen::Matrix2cd> es(h);
        Eigen::Matrix2cd v = es.eigenvectors();  // columns: ascending eigenvalues
        // fix gauge: dominant component real positive, diabatic-like ordering
        if (std::abs(v(0, 0)) < std::abs(v(0, 1))) {
            v.col(0).swap(v.col(1));
        }
        for (int c = 0; c < 2; ++c) {
            const Complex lead = v(c, c);
            if (std::abs(lead) > 0) v.col(c) *= std::conj(lead) / std::abs(lead);
        }
        return v;
    };
    const Eigen::Matrix2cd v_in = frame(-window);
    const Eigen::Matrix2cd v_out = frame(window);
    const Eigen::Matrix2cd u_frame = v_out.adjoint() * traj.values[0].matrix() * v_in;
    // project back onto the SU(2) (a, b) form, discarding the residual phases
    return spinpair::SU2Propagator(u_frame(0, 0), u_frame(0, 1));
}

}  // namespace testutil
