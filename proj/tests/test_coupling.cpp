#include <catch2/catch_amalgamated.hpp>

#include "spinpair/coupling.hpp"
#include "test_util.hpp"

using namespace spinpair;
using testutil::max_abs_diff;
using testutil::random_su2;

namespace {

const HalfInt h0(0), h12(1), h1(2), h32(3), h2(4);

/// Closed-form standard-basis propagator for two spin 1/2's.
Eigen::Matrix4cd two_half_propagator(const SU2Propagator& u, double lambda, double t) {
    const Complex a = u.a(), b = u.b();
    const Complex ac = std::conj(a), bc = std::conj(b);
    const double pa = std::norm(a), pb = std::norm(b);
    const Complex ph = std::exp(Complex(0, lambda * t / 4.0));
    const Complex e = std::exp(Complex(0, -lambda * t));
    Eigen::Matrix4cd m;
    m << a * a, a * b, a * b, b * b,
        -a * bc, 0.5 * (e + pa - pb), 0.5 * (-e + pa - pb), ac * b,
        -a * bc, 0.5 * (-e + pa - pb), 0.5 * (e + pa - pb), ac * b,
        bc * bc, -ac * bc, -ac * bc, ac * ac;
    return ph * m;
}

/// Closed-form 5x5 block of a spin 2.
Eigen::MatrixXcd spin2_block(const SU2Propagator& u) {
    const Complex a = u.a(), b = u.b();
    const Complex ac = std::conj(a), bc = std::conj(b);
    const double pa = std::norm(a), pb = std::norm(b);
    const double s6 = std::sqrt(6.0);
    Eigen::MatrixXcd m(5, 5);
    m << a * a * a * a, 2.0 * a * a * a * b, s6 * a * a * b * b, 2.0 * a * b * b * b,
        b * b * b * b,
        -2.0 * a * a * a * bc, (pa - 3.0 * pb) * a * a, s6 * (pa - pb) * a * b,
        (3.0 * pa - pb) * b * b, 2.0 * ac * b * b * b,
        s6 * a * a * bc * bc, -s6 * (pa - pb) * a * bc, 1.0 - 6.0 * pa * pb,
        s6 * (pa - pb) * ac * b, s6 * ac * ac * b * b,
        -2.0 * a * bc * bc * bc, (3.0 * pa - pb) * bc * bc, -s6 * (pa - pb) * ac * bc,
        (pa - 3.0 * pb) * ac * ac, 2.0 * ac * ac * ac * b,
        bc * bc * bc * bc, -2.0 * ac * bc * bc * bc, s6 * ac * ac * bc * bc,
        -2.0 * ac * ac * ac * bc, ac * ac * ac * ac;
    return m;
}

}  // namespace

TEST_CASE("cg_coefficient known values") {
    const double s2 = 1.0 / std::sqrt(2.0);
    CHECK(cg_coefficient(h12, h12, h12, -h12, h1, h0) == Catch::Approx(s2).margin(1e-15));
    CHECK(cg_coefficient(h12, h12, h12, -h12, h0, h0) == Catch::Approx(s2).margin(1e-15));
    CHECK(cg_coefficient(h12, -h12, h12, h12, h0, h0) == Catch::Approx(-s2).margin(1e-15));
    CHECK(cg_coefficient(h1, h1, h1, h1, h2, h2) == Catch::Approx(1.0).margin(1e-15));
    CHECK(cg_coefficient(h1, h0, h1, h0, h1, h0) == 0.0);
    // selection rules return zero rather than throwing
    CHECK(cg_coefficient(h12, h12, h12, h12, h1, h0) == 0.0);
    CHECK(cg_coefficient(h12, h12, h12, h12, HalfInt(6), h1 + h1) == 0.0);
    CHECK_THROWS_AS(cg_coefficient(h12, h1, h12, h12, h1, h1), std::domain_error);
}

TEST_CASE("cg_matrix of (1/2,1/2) is the known 4x4 transform") {
    const SpinPair pair(h12, h12, 0.0);
    const double s2 = 1.0 / std::sqrt(2.0);
    Eigen::Matrix4d expected;
    expected << 1, 0, 0, 0,
        0, s2, 0, s2,
        0, s2, 0, -s2,
        0, 0, 1, 0;
    CHECK((cg_matrix(pair) - expected).cwiseAbs().maxCoeff() < 1e-15);
}

TEST_CASE("cg_matrix of (1,1/2) is the known 6x6 transform") {
    const SpinPair pair(h1, h12, 0.0);
    const double r13 = 1.0 / std::sqrt(3.0), r23 = std::sqrt(2.0 / 3.0);
    Eigen::MatrixXd expected(6, 6);
    expected << 1, 0, 0, 0, 0, 0,
        0, r13, 0, 0, r23, 0,
        0, r23, 0, 0, -r13, 0,
        0, 0, r23, 0, 0, r13,
        0, 0, r13, 0, 0, -r23,
        0, 0, 0, 1, 0, 0;
    CHECK((cg_matrix(pair) - expected).cwiseAbs().maxCoeff() < 1e-15);
}

TEST_CASE("cg_matrix of (1,1) is the known 9x9 transform") {
    const SpinPair pair(h1, h1, 0.0);
    const double r2 = 1.0 / std::sqrt(2.0), r3 = 1.0 / std::sqrt(3.0), r6 = 1.0 / std::sqrt(6.0);
    const double r23 = std::sqrt(2.0 / 3.0);
    Eigen::MatrixXd expected(9, 9);
    expected << 1, 0, 0, 0, 0, 0, 0, 0, 0,
        0, r2, 0, 0, 0, r2, 0, 0, 0,
        0, 0, r6, 0, 0, 0, r2, 0, r3,
        0, r2, 0, 0, 0, -r2, 0, 0, 0,
        0, 0, r23, 0, 0, 0, 0, 0, -r3,
        0, 0, 0, r2, 0, 0, 0, r2, 0,
        0, 0, r6, 0, 0, 0, -r2, 0, r3,
        0, 0, 0, r2, 0, 0, 0, -r2, 0,
        0, 0, 0, 0, 1, 0, 0, 0, 0;
    CHECK((cg_matrix(pair) - expected).cwiseAbs().maxCoeff() < 1e-15);
}

TEST_CASE("cg_matrix columns are orthonormal and respect m1+m2 = M") {
    for (const SpinPair pair : {SpinPair(h32, h1, 0.0), SpinPair(h2, h12, 0.0)}) {
        const Eigen::MatrixXd& g = cg_matrix(pair);
        CHECK((g * g.transpose() - Eigen::MatrixXd::Identity(pair.dim(), pair.dim()))
                  .cwiseAbs()
                  .maxCoeff() < 1e-12);
        const auto std_states = standard_states(pair);
        const auto cpl_states = coupled_states(pair);
        for (int r = 0; r < pair.dim(); ++r)
            for (int c = 0; c < pair.dim(); ++c)
                if (std_states[r].first + std_states[r].second != cpl_states[c].second)
                    CHECK(g(r, c) == 0.0);
    }
}

TEST_CASE("k_prime block energies") {
    const SpinPair half_half(h12, h12, 2.0);
    CHECK(k_prime(half_half, h1) == Catch::Approx(-2.0 / 4.0));
    CHECK(k_prime(half_half, h0) == Catch::Approx(3.0 * 2.0 / 4.0));
    const SpinPair one_one(h1, h1, 1.5);
    CHECK(k_prime(one_one, h2) == Catch::Approx(-1.5));
    CHECK(k_prime(one_one, h1) == Catch::Approx(1.5));
    CHECK(k_prime(one_one, h0) == Catch::Approx(3.0));
    const SpinPair zero(h1, h12, 0.0);
    for (HalfInt j : zero.block_labels()) CHECK(k_prime(zero, j) == 0.0);
    CHECK_THROWS_AS(k_prime(one_one, h12), std::domain_error);
    CHECK_THROWS_AS(k_prime(one_one, HalfInt(8)), std::domain_error);
}

TEST_CASE("assembled (1/2,1/2) propagator reproduces the closed form") {
    rng::Stream rng(21);
    for (int trial = 0; trial < 50; ++trial) {
        const SU2Propagator u = random_su2(rng);
        const double lambda = 4.0 * rng.next_unit() - 2.0;
        const double t = 3.0 * rng.next_unit();
        const SpinPair pair(h12, h12, lambda);
        const PairPropagator up = assemble_pair_propagator(pair, t, u, Basis::Standard);
        CHECK(max_abs_diff(up.matrix, two_half_propagator(u, lambda, t)) < 1e-12);
    }
}

TEST_CASE("assembled (1,1) propagator has the right block phases and blocks") {
    rng::Stream rng(22);
    for (int trial = 0; trial < 20; ++trial) {
        const SU2Propagator u = random_su2(rng);
        const double lambda = 4.0 * rng.next_unit() - 2.0;
        const double t = 3.0 * rng.next_unit();
        const SpinPair pair(h1, h1, lambda);
        const PairPropagator cb = assemble_pair_propagator(pair, t, u, Basis::Coupled);

        const Complex p2 = std::exp(Complex(0, lambda * t));
        const Complex p1 = std::exp(Complex(0, -lambda * t));
        const Complex p0 = std::exp(Complex(0, -2.0 * lambda * t));
        CHECK(max_abs_diff(cb.matrix.block(0, 0, 5, 5), p2 * spin2_block(u)) < 1e-12);
        CHECK(max_abs_diff(cb.matrix.block(5, 5, 3, 3),
                           p1 * propagator_block(h1, u).matrix) < 1e-12);
        CHECK(std::abs(cb.matrix(8, 8) - p0) < 1e-12);
        // off-block entries vanish identically
        CHECK(cb.matrix.block(0, 5, 5, 4).cwiseAbs().maxCoeff() == 0.0);
        CHECK(cb.matrix.block(5, 0, 4, 5).cwiseAbs().maxCoeff() == 0.0);

        const PairPropagator sb = assemble_pair_propagator(pair, t, u, Basis::Standard);
        const Eigen::MatrixXd& g = cg_matrix(pair);
        CHECK(max_abs_diff(sb.matrix, g * cb.matrix * g.transpose()) < 1e-12);
    }
}

TEST_CASE("assembled (1,1/2) propagator spot entries") {
    rng::Stream rng(23);
    for (int trial = 0; trial < 20; ++trial) {
        const SU2Propagator u = random_su2(rng);
        const double lambda = 4.0 * rng.next_unit() - 2.0;
        const double t = 3.0 * rng.next_unit();
        const SpinPair pair(h1, h12, lambda);
        const PairPropagator sb = assemble_pair_propagator(pair, t, u, Basis::Standard);

        const Complex a = u.a(), b = u.b();
        const Complex ac = std::conj(a), bc = std::conj(b);
        const double pa = std::norm(a), pb = std::norm(b);
        const Complex ph = std::exp(Complex(0, lambda * t / 2.0));
        const Complex e32 = std::exp(Complex(0, -1.5 * lambda * t));

        CHECK(std::abs(sb.matrix(0, 0) - ph * a * a * a) < 1e-12);
        CHECK(std::abs(sb.matrix(0, 1) - ph * a * a * b) < 1e-12);
        CHECK(std::abs(sb.matrix(1, 1) - ph * (a / 3.0) * (pa - 2.0 * pb + 2.0 * e32)) < 1e-12);
        CHECK(std::abs(sb.matrix(2, 1) - ph * (std::sqrt(2.0) / 3.0) * a * (pa - 2.0 * pb - e32)) <
              1e-12);
        CHECK(std::abs(sb.matrix(3, 4) - ph * (std::sqrt(2.0) / 3.0) * ac * (pa - 2.0 * pb - e32)) <
              1e-12);
        CHECK(std::abs(sb.matrix(4, 4) - ph * (ac / 3.0) * (pa - 2.0 * pb + 2.0 * e32)) < 1e-12);
        CHECK(std::abs(sb.matrix(5, 0) + ph * bc * bc * bc) < 1e-12);
        CHECK(std::abs(sb.matrix(5, 5) - ph * ac * ac * ac) < 1e-12);
    }
}

TEST_CASE("trivial pair propagator is the identity") {
    const SU2Propagator id(Complex(1, 0), Complex(0, 0));
    for (const SpinPair pair : {SpinPair(h12, h12, 0.0), SpinPair(h32, h1, 0.0)}) {
        const PairPropagator up = assemble_pair_propagator(pair, 1.7, id, Basis::Standard);
        CHECK(max_abs_diff(up.matrix, Eigen::MatrixXcd::Identity(pair.dim(), pair.dim())) <
              1e-14);
    }
}

TEST_CASE("pair propagator is unitary and commutes with J^2") {
    rng::Stream rng(24);
    for (const SpinPair pair :
         {SpinPair(h12, h12, 1.3), SpinPair(h1, h12, -0.7), SpinPair(h32, h1, 0.9)}) {
        const SU2Propagator u = random_su2(rng);
        for (Basis basis : {Basis::Coupled, Basis::Standard}) {
            const PairPropagator up = assemble_pair_propagator(pair, 2.1, u, basis);
            CHECK(testutil::unitarity_defect(up.matrix) < 1e-10);
        }
        // J^2 in the coupled basis is diagonal with j(j+1) per block
        const PairPropagator cb = assemble_pair_propagator(pair, 2.1, u, Basis::Coupled);
        Eigen::MatrixXcd jsq = Eigen::MatrixXcd::Zero(pair.dim(), pair.dim());
        int off = 0;
        for (HalfInt j : pair.block_labels()) {
            const int n = j.twice() + 1;
            jsq.block(off, off, n, n) =
                j.value() * (j.value() + 1.0) * Eigen::MatrixXcd::Identity(n, n);
            off += n;
        }
        CHECK(max_abs_diff(cb.matrix * jsq, jsq * cb.matrix) < 1e-10);
        const Eigen::MatrixXd& g = cg_matrix(pair);
        const PairPropagator sb = assemble_pair_propagator(pair, 2.1, u, Basis::Standard);
        const Eigen::MatrixXcd jsq_sb = g * jsq * g.transpose();
        CHECK(max_abs_diff(sb.matrix * jsq_sb, jsq_sb * sb.matrix) < 1e-10);
    }
}

TEST_CASE("standard/coupled round trip is the identity") {
    rng::Stream rng(25);
    const SpinPair pair(h32, h1, 0.4);
    const PairPropagator cb =
        assemble_pair_propagator(pair, 1.1, random_su2(rng), Basis::Coupled);
    const PairPropagator back = convert_basis(convert_basis(cb, Basis::Standard), Basis::Coupled);
    CHECK(max_abs_diff(back.matrix, cb.matrix) < 1e-12);
}

TEST_CASE("block labels tile the full dimension") {
    for (const SpinPair pair :
         {SpinPair(h12, h12, 0.0), SpinPair(h2, h32, 0.0), SpinPair(h32, h0, 0.0)}) {
        int total = 0;
        for (HalfInt j : pair.block_labels()) total += j.twice() + 1;
        CHECK(total == pair.dim());
    }
}
