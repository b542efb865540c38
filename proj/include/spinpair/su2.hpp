#pragma once

#include <Eigen/Dense>
#include <complex>
#include <stdexcept>

#include "spinpair/half_int.hpp"

namespace spinpair {

using Complex = std::complex<double>;

namespace detail {

/// z^n for n >= 0 with the convention 0^0 = 1, which the finite
/// representation sum relies on (identity case a=1, b=0).
inline Complex ipow(Complex z, int n) {
    Complex r(1.0, 0.0);
    for (int k = 0; k < n; ++k) r *= z;
    return r;
}

inline double ipow(double x, int n) {
    double r = 1.0;
    for (int k = 0; k < n; ++k) r *= x;
    return r;
}

}  // namespace detail

/// The pair (a, b) defining the special-unitary 2x2 evolution operator
///   [[a, b], [-conj(b), conj(a)]],  |a|^2 + |b|^2 = 1.
/// Renormalized on construction to absorb integrator roundoff.
class SU2Propagator {
  public:
    SU2Propagator() : a_(1.0, 0.0), b_(0.0, 0.0) {}
    SU2Propagator(Complex a, Complex b) : a_(a), b_(b) {
        double n2 = std::norm(a_) + std::norm(b_);
        if (n2 < 1e-16) throw std::domain_error("SU2Propagator: zero amplitude pair");
        double n = std::sqrt(n2);
        a_ /= n;
        b_ /= n;
    }

    Complex a() const { return a_; }
    Complex b() const { return b_; }

    Eigen::Matrix2cd matrix() const {
        Eigen::Matrix2cd u;
        u << a_, b_, -std::conj(b_), std::conj(a_);
        return u;
    }

    /// Group product: the pair of matrix() of `later` times matrix() of `earlier`.
    static SU2Propagator compose(const SU2Propagator& later, const SU2Propagator& earlier) {
        Complex a = later.a_ * earlier.a_ - later.b_ * std::conj(earlier.b_);
        Complex b = later.a_ * earlier.b_ + later.b_ * std::conj(earlier.a_);
        return SU2Propagator(a, b);
    }

  private:
    Complex a_, b_;
};

/// (2j+1)-dimensional propagator block in the descending-m basis
/// {|j>, |j-1>, ..., |-j>}; rows index the final projection, columns the
/// initial one.
struct PropagatorBlock {
    HalfInt j;
    Eigen::MatrixXcd matrix;

    int dim() const { return j.twice() + 1; }
};

namespace detail {

inline void require_jmm(HalfInt j, HalfInt m, HalfInt m_prime) {
    if (!j.valid_magnitude()) throw std::domain_error("invalid spin magnitude");
    if (!m.valid_projection_for(j) || !m_prime.valid_projection_for(j))
        throw std::domain_error("invalid projection for given spin magnitude");
}

inline double wigner_coeff_unchecked(HalfInt j, HalfInt m, HalfInt m_prime, int mu) {
    const double num = std::sqrt(factorial_of(j + m) * factorial_of(j - m) *
                                 factorial_of(j + m_prime) * factorial_of(j - m_prime));
    const int jpmp = (j + m_prime).twice() / 2;
    const int jmm = (j - m).twice() / 2;
    const int mmmp = (m - m_prime).twice() / 2;
    const double den = factorial(mu) * factorial(jpmp - mu) * factorial(jmm - mu) *
                       factorial(mmmp + mu);
    const double sign = (mu % 2 != 0) ? -1.0 : 1.0;
    return sign * num / den;
}

}  // namespace detail

/// Coefficient of the mu-th monomial in the (m, m') entry of the lifted
/// spin-j propagator, mu restricted to Max[0, m'-m] <= mu <= Min[j+m', j-m].
inline double wigner_coeff(HalfInt j, HalfInt m, HalfInt m_prime, int mu) {
    detail::require_jmm(j, m, m_prime);
    const int lo = std::max(0, (m_prime - m).twice() / 2);
    const int hi = std::min((j + m_prime).twice() / 2, (j - m).twice() / 2);
    if (mu < lo || mu > hi) throw std::domain_error("wigner_coeff: mu outside admissible range");
    return detail::wigner_coeff_unchecked(j, m, m_prime, mu);
}

/// Lift the spin-1/2 amplitudes (a, b) to the (2j+1)-dimensional block.
/// `phase` is the accumulated constant-energy angle (K' * t) supplied by the
/// caller; the whole block is multiplied by exp(-i * phase).
inline PropagatorBlock propagator_block(HalfInt j, const SU2Propagator& u, double phase = 0.0) {
    if (!j.valid_magnitude()) throw std::domain_error("invalid spin magnitude");
    const int dim = j.twice() + 1;
    const Complex a = u.a(), b = u.b();
    const Complex ac = std::conj(a), bc = std::conj(b);
    const Complex global = std::exp(Complex(0.0, -phase));

    Eigen::MatrixXcd mat(dim, dim);
    for (int r = 0; r < dim; ++r) {
        const HalfInt m = j - HalfInt::from_int(r);
        for (int c = 0; c < dim; ++c) {
            const HalfInt mp = j - HalfInt::from_int(c);
            const int lo = std::max(0, (mp - m).twice() / 2);
            const int hi = std::min((j + mp).twice() / 2, (j - m).twice() / 2);
            const int jpmp = (j + mp).twice() / 2;
            const int jmm = (j - m).twice() / 2;
            const int mmmp = (m - mp).twice() / 2;
            Complex entry(0.0, 0.0);
            for (int mu = lo; mu <= hi; ++mu) {
                const double coeff = detail::wigner_coeff_unchecked(j, m, mp, mu);
                entry += coeff * detail::ipow(a, jpmp - mu) * detail::ipow(ac, jmm - mu) *
                         detail::ipow(b, mmmp + mu) * detail::ipow(bc, mu);
            }
            mat(r, c) = global * entry;
        }
    }
    return PropagatorBlock{j, std::move(mat)};
}

}  // namespace spinpair
