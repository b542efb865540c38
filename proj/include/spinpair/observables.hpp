#pragma once

#include <Eigen/Dense>
#include <stdexcept>
#include <string>

#include "spinpair/coupling.hpp"

namespace spinpair {

/// Angular-momentum matrices for a single spin j in the descending-m basis.
struct SpinOperators {
    HalfInt j;
    Eigen::MatrixXcd jx, jy, jz;
};

inline SpinOperators spin_operators(HalfInt j) {
    if (!j.valid_magnitude()) throw std::domain_error("spin_operators: invalid magnitude");
    const int n = j.twice() + 1;
    Eigen::MatrixXcd jz = Eigen::MatrixXcd::Zero(n, n);
    Eigen::MatrixXcd jp = Eigen::MatrixXcd::Zero(n, n);
    const double jv = j.value();
    for (int i = 0; i < n; ++i) {
        const double m = jv - i;
        jz(i, i) = m;
        if (i > 0) jp(i - 1, i) = std::sqrt(jv * (jv + 1.0) - m * (m + 1.0));
    }
    const Eigen::MatrixXcd jm = jp.adjoint();
    SpinOperators ops;
    ops.j = j;
    ops.jx = 0.5 * (jp + jm);
    ops.jy = Complex(0.0, -0.5) * (jp - jm);
    ops.jz = jz;
    return ops;
}

namespace detail {

inline Eigen::MatrixXcd kron(const Eigen::MatrixXcd& a, const Eigen::MatrixXcd& b) {
    Eigen::MatrixXcd out(a.rows() * b.rows(), a.cols() * b.cols());
    for (int i = 0; i < a.rows(); ++i)
        for (int k = 0; k < a.cols(); ++k)
            out.block(i * b.rows(), k * b.cols(), b.rows(), b.cols()) = a(i, k) * b;
    return out;
}

}  // namespace detail

/// Operators of the pair in the standard basis (|m1,m2>, m1 outer).
struct PairOperators {
    Eigen::MatrixXcd j1x, j1y, j1z;
    Eigen::MatrixXcd j2x, j2y, j2z;
    Eigen::MatrixXcd Jx, Jy, Jz;
    Eigen::MatrixXcd Jsq;        // (j1 + j2)^2
    Eigen::MatrixXcd heisenberg; // j1 . j2
};

inline PairOperators pair_operators(const SpinPair& pair) {
    const SpinOperators s1 = spin_operators(pair.j1);
    const SpinOperators s2 = spin_operators(pair.j2);
    const Eigen::MatrixXcd id1 = Eigen::MatrixXcd::Identity(pair.dim1(), pair.dim1());
    const Eigen::MatrixXcd id2 = Eigen::MatrixXcd::Identity(pair.dim2(), pair.dim2());
    PairOperators ops;
    ops.j1x = detail::kron(s1.jx, id2);
    ops.j1y = detail::kron(s1.jy, id2);
    ops.j1z = detail::kron(s1.jz, id2);
    ops.j2x = detail::kron(id1, s2.jx);
    ops.j2y = detail::kron(id1, s2.jy);
    ops.j2z = detail::kron(id1, s2.jz);
    ops.Jx = ops.j1x + ops.j2x;
    ops.Jy = ops.j1y + ops.j2y;
    ops.Jz = ops.j1z + ops.j2z;
    ops.Jsq = ops.Jx * ops.Jx + ops.Jy * ops.Jy + ops.Jz * ops.Jz;
    ops.heisenberg = ops.j1x * ops.j2x + ops.j1y * ops.j2y + ops.j1z * ops.j2z;
    return ops;
}

/// Pure or mixed state of the pair, tagged with the basis its coordinates
/// refer to.
class PairState {
  public:
    static PairState pure(const SpinPair& pair, Eigen::VectorXcd psi, Basis basis) {
        if (psi.size() != pair.dim()) throw std::domain_error("PairState: dimension mismatch");
        const double n = psi.norm();
        if (n < 1e-12) throw std::domain_error("PairState: zero vector");
        PairState s;
        s.pair_ = pair;
        s.basis_ = basis;
        s.psi_ = psi / n;
        s.is_pure_ = true;
        return s;
    }

    static PairState mixed(const SpinPair& pair, Eigen::MatrixXcd rho, Basis basis) {
        if (rho.rows() != pair.dim() || rho.cols() != pair.dim())
            throw std::domain_error("PairState: dimension mismatch");
        const double tr = rho.trace().real();
        if (std::abs(tr - 1.0) > 1e-8) rho /= tr;
        if ((rho - rho.adjoint()).cwiseAbs().maxCoeff() > 1e-10)
            throw std::domain_error("PairState: density matrix not Hermitian");
        PairState s;
        s.pair_ = pair;
        s.basis_ = basis;
        s.rho_ = std::move(rho);
        s.is_pure_ = false;
        return s;
    }

    /// Standard-basis product state |m1, m2>.
    static PairState basis_state(const SpinPair& pair, HalfInt m1, HalfInt m2) {
        if (!m1.valid_projection_for(pair.j1) || !m2.valid_projection_for(pair.j2))
            throw std::domain_error("PairState: invalid projections");
        Eigen::VectorXcd psi = Eigen::VectorXcd::Zero(pair.dim());
        const int i1 = (pair.j1 - m1).twice() / 2;
        const int i2 = (pair.j2 - m2).twice() / 2;
        psi(i1 * pair.dim2() + i2) = 1.0;
        return pure(pair, psi, Basis::Standard);
    }

    static PairState stretched(const SpinPair& pair) {
        return basis_state(pair, pair.j1, pair.j2);
    }

    const SpinPair& pair() const { return pair_; }
    Basis basis() const { return basis_; }
    bool is_pure() const { return is_pure_; }
    const Eigen::VectorXcd& vector() const {
        if (!is_pure_) throw std::domain_error("PairState: not a pure state");
        return psi_;
    }

    Eigen::MatrixXcd density() const {
        if (is_pure_) return psi_ * psi_.adjoint();
        return rho_;
    }

    PairState in_basis(Basis target) const {
        if (basis_ == target) return *this;
        const Eigen::MatrixXd& g = cg_matrix(pair_);
        PairState out = *this;
        out.basis_ = target;
        if (is_pure_) {
            if (target == Basis::Standard)
                out.psi_ = g * psi_;
            else
                out.psi_ = g.transpose() * psi_;
        } else {
            if (target == Basis::Standard)
                out.rho_ = g * rho_ * g.transpose();
            else
                out.rho_ = g.transpose() * rho_ * g;
        }
        return out;
    }

    PairState evolved(const PairPropagator& u) const {
        PairState s = in_basis(u.basis);
        if (s.is_pure_)
            s.psi_ = u.matrix * s.psi_;
        else
            s.rho_ = u.matrix * s.rho_ * u.matrix.adjoint();
        return s;
    }

  private:
    SpinPair pair_;
    Basis basis_ = Basis::Standard;
    Eigen::VectorXcd psi_;
    Eigen::MatrixXcd rho_;
    bool is_pure_ = true;
};

/// |<to| U |from>|^2 for pure states.
inline double transition_probability(const PairPropagator& u, const PairState& from,
                                     const PairState& to) {
    if (!(from.pair().j1 == u.pair.j1 && from.pair().j2 == u.pair.j2 &&
          to.pair().j1 == u.pair.j1 && to.pair().j2 == u.pair.j2))
        throw std::domain_error("transition_probability: mismatched pairs");
    const Eigen::VectorXcd fi = from.in_basis(u.basis).vector();
    const Eigen::VectorXcd fo = to.in_basis(u.basis).vector();
    const Complex amp = fo.adjoint() * (u.matrix * fi);
    return std::norm(amp);
}

/// <op> in the given state. The operator matrix must be Hermitian and in the
/// state's current basis convention (standard basis for pair_operators).
inline double expectation(const PairState& state, const Eigen::MatrixXcd& op) {
    if (op.rows() != state.pair().dim() || op.cols() != state.pair().dim())
        throw std::domain_error("expectation: dimension mismatch");
    if ((op - op.adjoint()).cwiseAbs().maxCoeff() > 1e-10)
        throw std::domain_error("expectation: operator not Hermitian");
    const PairState s = state.in_basis(Basis::Standard);
    if (s.is_pure()) {
        const Complex v = s.vector().adjoint() * (op * s.vector());
        return v.real();
    }
    return (s.density() * op).trace().real();
}

/// Partial trace over the other spin; input converted to the standard basis
/// internally when needed. which = 1 keeps spin 1, which = 2 keeps spin 2.
inline Eigen::MatrixXcd reduced_density(const PairState& state, int which) {
    if (which != 1 && which != 2) throw std::domain_error("reduced_density: which must be 1 or 2");
    const PairState s = state.in_basis(Basis::Standard);
    const Eigen::MatrixXcd rho = s.density();
    const int n1 = state.pair().dim1();
    const int n2 = state.pair().dim2();
    if (which == 1) {
        Eigen::MatrixXcd out = Eigen::MatrixXcd::Zero(n1, n1);
        for (int i = 0; i < n1; ++i)
            for (int k = 0; k < n1; ++k)
                for (int q = 0; q < n2; ++q) out(i, k) += rho(i * n2 + q, k * n2 + q);
        return out;
    }
    Eigen::MatrixXcd out = Eigen::MatrixXcd::Zero(n2, n2);
    for (int i = 0; i < n2; ++i)
        for (int k = 0; k < n2; ++k)
            for (int q = 0; q < n1; ++q) out(i, k) += rho(q * n2 + i, q * n2 + k);
    return out;
}

/// True iff the coupled-basis representation has no coherence between
/// different total-spin blocks (all inter-block entries below tol). Such
/// states evolve as if the exchange coupling were absent.
inline bool is_ife_state(const PairState& state, double tol = 1e-10) {
    const Eigen::MatrixXcd rho = state.in_basis(Basis::Coupled).density();
    int row_off = 0;
    const auto labels = state.pair().block_labels();
    for (size_t bi = 0; bi < labels.size(); ++bi) {
        const int ni = labels[bi].twice() + 1;
        int col_off = 0;
        for (size_t bk = 0; bk < labels.size(); ++bk) {
            const int nk = labels[bk].twice() + 1;
            if (bi != bk &&
                rho.block(row_off, col_off, ni, nk).cwiseAbs().maxCoeff() > tol)
                return false;
            col_off += nk;
        }
        row_off += ni;
    }
    return true;
}

}  // namespace spinpair
