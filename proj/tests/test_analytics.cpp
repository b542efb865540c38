#include <catch2/catch_amalgamated.hpp>

#include "spinpair/analytics.hpp"
#include "test_util.hpp"

using namespace spinpair;

namespace {
const HalfInt h12(1), h1(2);
}

TEST_CASE("joint inversion probability") {
    CHECK(joint_inversion_probability(h12, h12, Complex(0, 1)) == Catch::Approx(1.0));
    CHECK(joint_inversion_probability(h12, h12, Complex(0, 0)) == 0.0);
    rng::Stream rng(51);
    for (int trial = 0; trial < 20; ++trial) {
        const SU2Propagator u = testutil::random_su2(rng);
        const double pb = std::norm(u.b());
        CHECK(joint_inversion_probability(h12, h12, u.b()) == Catch::Approx(pb * pb));
        CHECK(joint_inversion_probability(h1, h1, u.b()) ==
              Catch::Approx(std::pow(pb, 4)).margin(1e-15));
    }
}

TEST_CASE("single and joint sweep probabilities") {
    CHECK(lz_probability(0.0) == 0.0);
    CHECK(lz_probability(1e9) == Catch::Approx(1.0));
    CHECK(lz_probability(0.3) == Catch::Approx(1.0 - std::exp(-0.6 * M_PI)));
    CHECK(lz_probability(0.3) == Catch::Approx(0.848).margin(5e-4));

    CHECK(joint_lz_probability(h12, h12, 0.0) == 0.0);
    CHECK(joint_lz_probability(h12, h12, 0.4) ==
          Catch::Approx(std::pow(lz_probability(0.4), 2)));
    // exponent 2(j1+j2): the flip probability of the lifted spin 3/2
    CHECK(joint_lz_probability(h1, h12, 0.2) ==
          Catch::Approx(std::pow(1.0 - std::exp(-0.4 * M_PI), 3)));
    // theta = 0 closes the loop with the noisy populations
    for (double gamma : {0.05, 0.2, 0.7}) {
        CHECK(noisy_lz_populations(LZParams(gamma, 0.0)).p_mm ==
              Catch::Approx(joint_lz_probability(h12, h12, gamma)).margin(1e-14));
    }
}

TEST_CASE("noisy populations normalize and stay in range") {
    for (int ig = 0; ig <= 100; ++ig) {
        for (int it = 0; it <= 100; ++it) {
            const LZParams p(0.03 * ig, 0.12 * it);
            for (TripletInitial init :
                 {TripletInitial::PlusPlus, TripletInitial::MinusMinus, TripletInitial::PsiPlus}) {
                const TripletPopulations pop = noisy_lz_populations(p, init);
                CHECK(pop.p_pp >= 0.0);
                CHECK(pop.p_pp <= 1.0);
                CHECK(pop.p_psi_plus >= 0.0);
                CHECK(pop.p_psi_plus <= 1.0);
                CHECK(pop.p_mm >= 0.0);
                CHECK(pop.p_mm <= 1.0);
                CHECK(pop.p_pp + pop.p_psi_plus + pop.p_mm == Catch::Approx(1.0).margin(1e-12));
            }
        }
    }
}

TEST_CASE("noisy population special points") {
    const TripletPopulations quiet = noisy_lz_populations(LZParams(0.0, 0.0));
    CHECK(quiet.p_pp == Catch::Approx(1.0).margin(1e-14));
    CHECK(quiet.p_psi_plus == Catch::Approx(0.0).margin(1e-14));
    CHECK(quiet.p_mm == Catch::Approx(0.0).margin(1e-14));

    const TripletPopulations strong = noisy_lz_populations(LZParams(1.0, 6.0));
    for (double p : {strong.p_pp, strong.p_psi_plus, strong.p_mm}) {
        CHECK(p > 0.30);
        CHECK(p < 0.37);
    }
    CHECK(strong.p_pp + strong.p_psi_plus + strong.p_mm == Catch::Approx(1.0).margin(1e-14));

    // symmetric initial state keeps the outer populations equal
    for (double gamma : {0.0, 0.15, 0.8}) {
        for (double theta : {0.0, 1.0, 4.0}) {
            const TripletPopulations p =
                noisy_lz_populations(LZParams(gamma, theta), TripletInitial::PsiPlus);
            CHECK(p.p_pp == p.p_mm);
        }
    }

    // preparation in the flipped state swaps the outer populations
    const LZParams pars(0.23, 1.7);
    const TripletPopulations up = noisy_lz_populations(pars, TripletInitial::PlusPlus);
    const TripletPopulations down = noisy_lz_populations(pars, TripletInitial::MinusMinus);
    CHECK(up.p_pp == down.p_mm);
    CHECK(up.p_mm == down.p_pp);
    CHECK(up.p_psi_plus == down.p_psi_plus);
    CHECK(up.p_pm() == Catch::Approx(0.5 * up.p_psi_plus));
}

TEST_CASE("asymptotic magnetization") {
    CHECK(asymptotic_jz(LZParams(0.0, 0.0)) == Catch::Approx(1.0));
    CHECK(asymptotic_jz(LZParams(0.2, 500.0)) == Catch::Approx(0.0).margin(1e-12));
    CHECK(asymptotic_jz(LZParams(0.2, 2.0)) ==
          Catch::Approx(std::exp(-1.0) * (2.0 * std::exp(-0.4 * M_PI) - 1.0)));
    // equals the population difference everywhere
    for (double gamma : {0.0, 0.11, 0.5, 1.3}) {
        for (double theta : {0.0, 0.7, 3.0, 9.0}) {
            const TripletPopulations p = noisy_lz_populations(LZParams(gamma, theta));
            CHECK(asymptotic_jz(LZParams(gamma, theta)) ==
                  Catch::Approx(p.p_pp - p.p_mm).margin(1e-12));
        }
    }
}

TEST_CASE("magnetization factorizes into noise and sweep factors") {
    for (double gamma : {0.05, 0.3, 0.9}) {
        const double base = asymptotic_jz(LZParams(gamma, 0.0));
        for (double theta : {0.5, 2.0, 5.0}) {
            const double ratio = asymptotic_jz(LZParams(gamma, theta)) / base;
            CHECK(ratio == Catch::Approx(std::exp(-0.5 * theta)).margin(1e-12));
        }
    }
}

TEST_CASE("gamma regime classification") {
    CHECK(gamma_regime(0.05) == GammaRegime::NoiseFavors);
    CHECK(gamma_regime(0.15) == GammaRegime::NonMonotone);
    CHECK(gamma_regime(1.0) == GammaRegime::NoiseHinders);
    CHECK(gamma_regime_lower_threshold() == Catch::Approx(0.137066).margin(1e-6));
    CHECK(gamma_regime_upper_threshold() == Catch::Approx(0.174850).margin(1e-6));
    CHECK(gamma_regime_lower_threshold() < gamma_regime_upper_threshold());
}

TEST_CASE("regime boundaries match the sign of the theta response") {
    auto dp = [](double gamma, double theta) {
        const double h = 1e-6;
        return (noisy_lz_populations(LZParams(gamma, theta + h)).p_mm -
                noisy_lz_populations(LZParams(gamma, theta)).p_mm) / h;
    };
    const double lo = gamma_regime_lower_threshold();
    const double hi = gamma_regime_upper_threshold();

    // below the lower threshold: P(theta) never dips below P(0)
    for (double theta = 0.0; theta <= 10.0; theta += 0.1) {
        const double base = noisy_lz_populations(LZParams(lo - 0.01, 0.0)).p_mm;
        CHECK(noisy_lz_populations(LZParams(lo - 0.01, theta)).p_mm >= base - 1e-12);
    }
    // above the upper threshold: P(theta) never rises above P(0)
    for (double theta = 0.0; theta <= 10.0; theta += 0.1) {
        const double base = noisy_lz_populations(LZParams(hi + 0.01, 0.0)).p_mm;
        CHECK(noisy_lz_populations(LZParams(hi + 0.01, theta)).p_mm <= base + 1e-12);
    }
    // in between the slope changes sign
    bool positive = false, negative = false;
    for (double theta = 0.0; theta <= 10.0; theta += 0.05) {
        const double slope = dp(0.15, theta);
        positive = positive || slope > 1e-6;
        negative = negative || slope < -1e-6;
    }
    CHECK(positive);
    CHECK(negative);
}

TEST_CASE("closed-form magnetization curves for the worked pairs") {
    rng::Stream rng(52);
    const SU2Propagator id(Complex(1, 0), Complex(0, 0));
    // trivial amplitudes
    CHECK(j1z_expectation(h1, h12, id, 2.0, 1.1) ==
          Catch::Approx((5.0 + 4.0 * std::cos(1.5 * 2.0 * 1.1)) / 9.0));
    CHECK(jz_expectation(h1, h1, id) == Catch::Approx(1.0));
    CHECK(jz_expectation(h12, h12, testutil::random_su2(rng)) == 0.0);
    // lambda = 0 removes the oscillation
    const SU2Propagator u = testutil::random_su2(rng);
    const double d = std::norm(u.a()) - std::norm(u.b());
    CHECK(j1z_expectation(h12, h12, u, 0.0, 5.0) == Catch::Approx(0.5 * d));
    CHECK_THROWS_AS(j1z_expectation(HalfInt(3), h1, u, 1.0, 1.0), std::domain_error);
    CHECK_THROWS_AS(jz_expectation(HalfInt(3), h1, u), std::domain_error);
}
