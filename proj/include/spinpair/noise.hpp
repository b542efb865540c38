#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <vector>

namespace spinpair {

/// Stationary Gaussian field with exponential correlations (Ornstein-
/// Uhlenbeck), independent per axis:
///   <eta_i(t) eta_i(t')> = sigma_i^2 exp(-Lambda |t - t'|),
/// cross-correlations zero. R(0) is the summed equal-time transverse
/// variance entering theta = 4 pi R(0) / alpha.
struct NoiseModel {
    std::array<double, 3> sigma_sq{0.0, 0.0, 0.0};  // x, y, z variances
    double lambda_corr = 1.0;                       // inverse correlation time

    NoiseModel() = default;
    NoiseModel(double sx2, double sy2, double sz2, double lambda)
        : sigma_sq{sx2, sy2, sz2}, lambda_corr(lambda) {
        if (sx2 < 0 || sy2 < 0 || sz2 < 0)
            throw std::domain_error("NoiseModel: variances must be non-negative");
        if (!(lambda > 0)) throw std::domain_error("NoiseModel: Lambda must be positive");
    }

    double r0() const { return sigma_sq[0] + sigma_sq[1]; }
    double theta(double alpha) const { return 4.0 * M_PI * r0() / alpha; }
    bool is_zero() const { return sigma_sq[0] == 0 && sigma_sq[1] == 0 && sigma_sq[2] == 0; }
};

struct EnsembleConfig {
    long n_trajectories = 1;
    std::uint64_t master_seed = 0;
    double path_step = 0.0;  // 0 = derive from the noise model (1 / (20 Lambda))

    EnsembleConfig() = default;
    EnsembleConfig(long n, std::uint64_t seed, double step)
        : n_trajectories(n), master_seed(seed), path_step(step) {
        if (n < 1) throw std::domain_error("EnsembleConfig: need at least one trajectory");
    }
};

namespace rng {

inline std::uint64_t mix64(std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

/// Counter-based per-trajectory stream: trajectory k of a run always sees
/// the same sequence regardless of which worker executes it.
inline std::uint64_t trajectory_seed(std::uint64_t master_seed, std::uint64_t index) {
    return mix64(master_seed ^ mix64(index + 0x632be59bd9b4e019ULL));
}

/// SplitMix64 stream with a portable Box-Muller Gaussian on top; avoids the
/// implementation-defined std::normal_distribution.
class Stream {
  public:
    explicit Stream(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next_u64() {
        state_ += 0x9e3779b97f4a7c15ULL;
        std::uint64_t z = state_;
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    /// Uniform on (0, 1].
    double next_open_unit() { return (static_cast<double>(next_u64() >> 11) + 1.0) * 0x1.0p-53; }

    /// Uniform on [0, 1).
    double next_unit() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    double next_gaussian() {
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        const double u1 = next_open_unit();
        const double u2 = next_unit();
        const double r = std::sqrt(-2.0 * std::log(u1));
        const double phi = 2.0 * M_PI * u2;
        spare_ = r * std::sin(phi);
        have_spare_ = true;
        return r * std::cos(phi);
    }

  private:
    std::uint64_t state_;
    double spare_ = 0.0;
    bool have_spare_ = false;
};

}  // namespace rng

/// One realization of the random field, tabulated on a uniform grid and
/// interpolated linearly by the integrators.
struct NoisePath {
    double t0 = 0.0;
    double dt = 0.0;
    std::array<std::vector<double>, 3> eta;  // per-axis samples

    std::size_t size() const { return eta[0].size(); }
    double t_end() const { return t0 + dt * (size() - 1); }

    std::array<double, 3> at(double t) const {
        const double s = (t - t0) / dt;
        double fl = std::floor(s);
        if (fl < 0) fl = 0;
        std::size_t lo = static_cast<std::size_t>(fl);
        if (lo >= size() - 1) lo = size() - 2;
        const double w = s - static_cast<double>(lo);
        std::array<double, 3> out;
        for (int i = 0; i < 3; ++i) {
            const auto& e = eta[i];
            out[i] = e[lo] + w * (e[lo + 1] - e[lo]);
        }
        return out;
    }

    /// Next sample point strictly after t (clamped to the path end).
    double next_breakpoint(double t) const {
        const double s = std::floor((t - t0) / dt + 1e-9) + 1.0;
        return std::min(t0 + s * dt, t_end());
    }
};

/// Draw one exact-discretization OU realization per axis on the uniform grid
/// [t0, t0 + (n-1) dt]. The first sample comes from the stationary
/// distribution. Deterministic for a fixed seed.
inline NoisePath sample_noise_path(const NoiseModel& model, double t0, double dt, std::size_t n,
                                   std::uint64_t seed) {
    if (!(dt > 0) || n < 2) throw std::domain_error("sample_noise_path: invalid grid");
    if (dt > 1.0 / (10.0 * model.lambda_corr))
        throw std::domain_error("sample_noise_path: grid step must be <= 1/(10 Lambda)");
    NoisePath path;
    path.t0 = t0;
    path.dt = dt;
    rng::Stream stream(seed);
    const double decay = std::exp(-model.lambda_corr * dt);
    const double renew = std::sqrt(1.0 - decay * decay);
    for (int axis = 0; axis < 3; ++axis) {
        const double sigma = std::sqrt(model.sigma_sq[axis]);
        auto& e = path.eta[axis];
        e.resize(n);
        // Draws are consumed even for sigma = 0 so that enabling one axis
        // never changes the samples of another.
        double value = sigma * stream.next_gaussian();
        e[0] = value;
        for (std::size_t k = 1; k < n; ++k) {
            value = value * decay + sigma * renew * stream.next_gaussian();
            e[k] = value;
        }
    }
    return path;
}

}  // namespace spinpair
