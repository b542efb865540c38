#pragma once

#include <Eigen/Dense>
#include <map>
#include <mutex>
#include <utility>
#include <vector>

#include "spinpair/su2.hpp"

namespace spinpair {

/// Two exchange-coupled spins; lambda is the isotropic Heisenberg strength
/// in angular-frequency units (hbar = 1).
struct SpinPair {
    HalfInt j1;
    HalfInt j2;
    double lambda = 0.0;

    SpinPair() = default;
    SpinPair(HalfInt j1_, HalfInt j2_, double lambda_) : j1(j1_), j2(j2_), lambda(lambda_) {
        if (!j1.valid_magnitude() || !j2.valid_magnitude())
            throw std::domain_error("SpinPair: spin magnitudes must be non-negative");
    }

    int dim1() const { return j1.twice() + 1; }
    int dim2() const { return j2.twice() + 1; }
    int dim() const { return dim1() * dim2(); }

    /// Total-spin block labels j1+j2, j1+j2-1, ..., |j1-j2| (descending).
    std::vector<HalfInt> block_labels() const {
        std::vector<HalfInt> out;
        for (int tj = (j1 + j2).twice(); tj >= std::abs((j1 - j2).twice()); tj -= 2)
            out.push_back(HalfInt(tj));
        return out;
    }

    bool valid_block(HalfInt j) const {
        return j.twice() <= (j1 + j2).twice() && j.twice() >= std::abs((j1 - j2).twice()) &&
               ((j1 + j2).twice() - j.twice()) % 2 == 0;
    }
};

enum class Basis { Standard, Coupled };

/// Ordered standard (product) basis: |m1, m2> with m1 descending outer,
/// m2 descending inner.
inline std::vector<std::pair<HalfInt, HalfInt>> standard_states(const SpinPair& pair) {
    std::vector<std::pair<HalfInt, HalfInt>> out;
    out.reserve(pair.dim());
    for (int t1 = pair.j1.twice(); t1 >= -pair.j1.twice(); t1 -= 2)
        for (int t2 = pair.j2.twice(); t2 >= -pair.j2.twice(); t2 -= 2)
            out.emplace_back(HalfInt(t1), HalfInt(t2));
    return out;
}

/// Ordered coupled basis: blocks in descending total spin j, m descending
/// within each block.
inline std::vector<std::pair<HalfInt, HalfInt>> coupled_states(const SpinPair& pair) {
    std::vector<std::pair<HalfInt, HalfInt>> out;
    out.reserve(pair.dim());
    for (HalfInt j : pair.block_labels())
        for (int tm = j.twice(); tm >= -j.twice(); tm -= 2) out.emplace_back(j, HalfInt(tm));
    return out;
}

/// Condon-Shortley Clebsch-Gordan coefficient <j1 m1; j2 m2 | J M>.
/// Returns 0 for M != m1+m2 or J outside the triangle range.
inline double cg_coefficient(HalfInt j1, HalfInt m1, HalfInt j2, HalfInt m2, HalfInt J,
                             HalfInt M) {
    if (!j1.valid_magnitude() || !j2.valid_magnitude() || !J.valid_magnitude())
        throw std::domain_error("cg_coefficient: invalid spin magnitude");
    if (!m1.valid_projection_for(j1) || !m2.valid_projection_for(j2))
        throw std::domain_error("cg_coefficient: invalid projection");
    if ((M.twice() + J.twice()) % 2 != 0)
        throw std::domain_error("cg_coefficient: M has wrong parity for J");
    if (m1.twice() + m2.twice() != M.twice()) return 0.0;
    if (J.twice() > (j1 + j2).twice() || J.twice() < std::abs((j1 - j2).twice())) return 0.0;
    if (((j1 + j2).twice() - J.twice()) % 2 != 0) return 0.0;
    if (!M.valid_projection_for(J)) return 0.0;

    using detail::factorial_of;
    const double delta = factorial_of(j1 + j2 - J) * factorial_of(j1 - j2 + J) *
                         factorial_of(J + j2 - j1) / factorial_of(j1 + j2 + J + HalfInt::from_int(1));
    const double pref = std::sqrt((J.twice() + 1.0) * delta * factorial_of(J + M) *
                                  factorial_of(J - M) * factorial_of(j1 - m1) *
                                  factorial_of(j1 + m1) * factorial_of(j2 - m2) *
                                  factorial_of(j2 + m2));

    const int k_lo = std::max({0, (j2 - J - m1).twice() / 2, (j1 - J + m2).twice() / 2});
    const int k_hi = std::min({(j1 + j2 - J).twice() / 2, (j1 - m1).twice() / 2,
                               (j2 + m2).twice() / 2});
    using detail::factorial;
    double sum = 0.0;
    for (int k = k_lo; k <= k_hi; ++k) {
        const double den = factorial(k) * factorial((j1 + j2 - J).twice() / 2 - k) *
                           factorial((j1 - m1).twice() / 2 - k) *
                           factorial((j2 + m2).twice() / 2 - k) *
                           factorial((J - j2 + m1).twice() / 2 + k) *
                           factorial((J - j1 - m2).twice() / 2 + k);
        sum += ((k % 2 != 0) ? -1.0 : 1.0) / den;
    }
    return pref * sum;
}

/// Unitary (real orthogonal) matrix mapping coupled-basis coordinates to
/// standard-basis coordinates: rows run over standard_states, columns over
/// coupled_states, entry = <m1, m2 | J, M>. Memoized per (j1, j2).
inline const Eigen::MatrixXd& cg_matrix(const SpinPair& pair) {
    static std::map<std::pair<int, int>, Eigen::MatrixXd> cache;
    static std::mutex mutex;
    std::lock_guard<std::mutex> lock(mutex);
    const auto key = std::make_pair(pair.j1.twice(), pair.j2.twice());
    auto it = cache.find(key);
    if (it != cache.end()) return it->second;

    const auto std_states = standard_states(pair);
    const auto cpl_states = coupled_states(pair);
    Eigen::MatrixXd g(pair.dim(), pair.dim());
    for (int r = 0; r < pair.dim(); ++r)
        for (int c = 0; c < pair.dim(); ++c)
            g(r, c) = cg_coefficient(pair.j1, std_states[r].first, pair.j2, std_states[r].second,
                                     cpl_states[c].first, cpl_states[c].second);
    return cache.emplace(key, std::move(g)).first->second;
}

/// Constant energy of block j: K'(j) = (lambda/2)[j1(j1+1) + j2(j2+1) - j(j+1)].
inline double k_prime(const SpinPair& pair, HalfInt j) {
    if (!pair.valid_block(j)) throw std::domain_error("k_prime: j is not a block label");
    auto casimir = [](HalfInt s) { return s.twice() * (s.twice() + 2) / 4.0; };
    return 0.5 * pair.lambda * (casimir(pair.j1) + casimir(pair.j2) - casimir(j));
}

/// Block-diagonal two-spin evolution operator at time t.
struct PairPropagator {
    SpinPair pair;
    double t = 0.0;
    std::vector<PropagatorBlock> blocks;
    Basis basis = Basis::Coupled;
    Eigen::MatrixXcd matrix;
};

/// Build the full two-spin propagator from the spin-1/2 amplitudes for the
/// common field over [0, t]: the direct sum of exp(-i K'(j) t) times the
/// lifted block for every j, optionally conjugated into the standard basis.
inline PairPropagator assemble_pair_propagator(const SpinPair& pair, double t,
                                               const SU2Propagator& u, Basis basis) {
    PairPropagator out;
    out.pair = pair;
    out.t = t;
    out.basis = basis;

    const int d = pair.dim();
    Eigen::MatrixXcd cb = Eigen::MatrixXcd::Zero(d, d);
    int offset = 0;
    for (HalfInt j : pair.block_labels()) {
        PropagatorBlock block = propagator_block(j, u, k_prime(pair, j) * t);
        const int n = block.dim();
        cb.block(offset, offset, n, n) = block.matrix;
        out.blocks.push_back(std::move(block));
        offset += n;
    }
    if (basis == Basis::Coupled) {
        out.matrix = std::move(cb);
    } else {
        const Eigen::MatrixXd& g = cg_matrix(pair);
        out.matrix = g * cb * g.transpose();
    }
    return out;
}

/// Re-express a pair propagator in the other basis.
inline PairPropagator convert_basis(const PairPropagator& u, Basis target) {
    if (u.basis == target) return u;
    PairPropagator out = u;
    out.basis = target;
    const Eigen::MatrixXd& g = cg_matrix(u.pair);
    if (target == Basis::Standard)
        out.matrix = g * u.matrix * g.transpose();
    else
        out.matrix = g.transpose() * u.matrix * g;
    return out;
}

}  // namespace spinpair
