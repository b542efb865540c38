#pragma once

#include <cmath>
#include <stdexcept>
#include <string>

#include "spinpair/su2.hpp"

namespace spinpair {

/// Dimensionless Landau-Zener sweep parameters: gamma = delta^2 / (4 alpha),
/// theta = 4 pi R(0) / alpha.
struct LZParams {
    double gamma = 0.0;
    double theta = 0.0;

    LZParams() = default;
    LZParams(double g, double th) : gamma(g), theta(th) {
        if (g < 0 || th < 0) throw std::domain_error("LZParams: gamma and theta must be >= 0");
    }
};

/// Asymptotic populations of the symmetric triplet manifold of two spin
/// 1/2's. p_pm and p_mp are each half of p_psi_plus.
struct TripletPopulations {
    double p_pp = 0.0;
    double p_psi_plus = 0.0;
    double p_mm = 0.0;

    double p_pm() const { return 0.5 * p_psi_plus; }
    double p_mp() const { return 0.5 * p_psi_plus; }
};

enum class TripletInitial { PlusPlus, MinusMinus, PsiPlus };

enum class GammaRegime { NoiseFavors, NonMonotone, NoiseHinders };

inline const char* to_string(GammaRegime r) {
    switch (r) {
        case GammaRegime::NoiseFavors: return "NoiseFavors";
        case GammaRegime::NonMonotone: return "NonMonotone";
        case GammaRegime::NoiseHinders: return "NoiseHinders";
    }
    return "?";
}

/// Probability |b|^{4(j1+j2)} of the simultaneous inversion
/// |j1, j2> -> |-j1, -j2| for any field producing amplitudes (a, b).
inline double joint_inversion_probability(HalfInt j1, HalfInt j2, Complex b) {
    if (!j1.valid_magnitude() || !j2.valid_magnitude())
        throw std::domain_error("joint_inversion_probability: invalid spins");
    return detail::ipow(std::norm(b), j1.twice() + j2.twice());
}

/// Single spin-1/2 Landau-Zener flip probability 1 - exp(-2 pi gamma).
inline double lz_probability(double gamma) {
    if (gamma < 0) throw std::domain_error("lz_probability: gamma must be >= 0");
    return 1.0 - std::exp(-2.0 * M_PI * gamma);
}

/// Joint noiseless sweep inversion: [1 - exp(-2 pi gamma)]^{2(j1+j2)}.
inline double joint_lz_probability(HalfInt j1, HalfInt j2, double gamma) {
    if (!j1.valid_magnitude() || !j2.valid_magnitude())
        throw std::domain_error("joint_lz_probability: invalid spins");
    return detail::ipow(lz_probability(gamma), j1.twice() + j2.twice());
}

/// Asymptotic triplet populations for a fast transverse-noise sweep. The
/// MinusMinus case follows from the PlusPlus one by swapping the outer
/// populations.
inline TripletPopulations noisy_lz_populations(const LZParams& params,
                                               TripletInitial initial = TripletInitial::PlusPlus) {
    const double e1 = std::exp(-2.0 * M_PI * params.gamma);
    const double x = 1.0 - 4.0 * e1 + 3.0 * e1 * e1;
    const double y = 3.0 * e1 * e1 - 2.0 * e1;
    const double va = 1.5 * std::exp(-0.5 * params.theta);
    const double vb = 0.5 * std::exp(-1.5 * params.theta);

    TripletPopulations p;
    switch (initial) {
        case TripletInitial::PlusPlus:
        case TripletInitial::MinusMinus: {
            p.p_mm = (1.0 + (va + vb) * x - (va - vb) * y) / 3.0;
            p.p_psi_plus = (1.0 - 2.0 * vb * x - 2.0 * vb * y) / 3.0;
            p.p_pp = (1.0 - (va - vb) * x + (va + vb) * y) / 3.0;
            if (initial == TripletInitial::MinusMinus) std::swap(p.p_pp, p.p_mm);
            break;
        }
        case TripletInitial::PsiPlus: {
            const double z = 6.0 * e1 - 6.0 * e1 * e1 - 1.0;
            const double w = std::exp(-1.5 * params.theta) * z;
            p.p_pp = (1.0 + w) / 3.0;
            p.p_mm = p.p_pp;
            p.p_psi_plus = (1.0 - 2.0 * w) / 3.0;
            break;
        }
    }
    return p;
}

/// Asymptotic magnetization of two spin 1/2's prepared in |++>:
/// exp(-theta/2) [2 exp(-2 pi gamma) - 1]; equals p_pp - p_mm.
inline double asymptotic_jz(const LZParams& params) {
    return std::exp(-0.5 * params.theta) * (2.0 * std::exp(-2.0 * M_PI * params.gamma) - 1.0);
}

/// Lower and upper gamma thresholds separating the three noise-response
/// regimes of the joint inversion probability, in closed form.
inline double gamma_regime_lower_threshold() {
    return std::log(0.5 * (3.0 + std::sqrt(3.0))) / (2.0 * M_PI);
}

inline double gamma_regime_upper_threshold() { return std::log(3.0) / (2.0 * M_PI); }

/// Whether noise raises the joint inversion probability for every theta,
/// lowers it for every theta, or first raises then lowers it.
inline GammaRegime gamma_regime(double gamma) {
    if (gamma < 0) throw std::domain_error("gamma_regime: gamma must be >= 0");
    if (gamma <= gamma_regime_lower_threshold()) return GammaRegime::NoiseFavors;
    if (gamma >= gamma_regime_upper_threshold()) return GammaRegime::NoiseHinders;
    return GammaRegime::NonMonotone;
}

/// Closed-form <j1^z(t)> for the initial product state |j1, j2 - 1>, available
/// for the three worked pairs (1/2,1/2), (1,1/2), (1,1). Other pairs go
/// through the numerical observables path.
inline double j1z_expectation(HalfInt j1, HalfInt j2, const SU2Propagator& u, double lambda,
                              double t) {
    const double pa = std::norm(u.a());
    const double pb = std::norm(u.b());
    const double d = pa - pb;
    if (j1.twice() == 1 && j2.twice() == 1) return 0.5 * d * std::cos(lambda * t);
    if (j1.twice() == 2 && j2.twice() == 1)
        return d * (5.0 + 4.0 * std::cos(1.5 * lambda * t)) / 9.0;
    if (j1.twice() == 2 && j2.twice() == 2) return 0.5 * d * (1.0 + std::cos(2.0 * lambda * t));
    throw std::domain_error("j1z_expectation: closed form available only for (1/2,1/2), (1,1/2), (1,1)");
}

/// Closed-form <J^z(t)> for the initial product state |j1, j2 - 1>; does not
/// depend on the coupling strength.
inline double jz_expectation(HalfInt j1, HalfInt j2, const SU2Propagator& u) {
    const double d = std::norm(u.a()) - std::norm(u.b());
    if (j1.twice() == 1 && j2.twice() == 1) return 0.0;
    if (j1.twice() == 2 && j2.twice() == 1) return 0.5 * d;
    if (j1.twice() == 2 && j2.twice() == 2) return d;
    throw std::domain_error("jz_expectation: closed form available only for (1/2,1/2), (1,1/2), (1,1)");
}

}  // namespace spinpair
