#pragma once

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <variant>
#include <vector>

#include "spinpair/su2.hpp"

namespace spinpair {

/// One sample of the effective field Omega(t), in angular-frequency units.
/// Gyromagnetic factors never appear separately: drivers are specified
/// directly in Omega units.
struct FieldSample {
    double x = 0.0, y = 0.0, z = 0.0;
};

/// Transverse field of fixed magnitude precessing about z at omega_rot,
/// plus a static z component: (w_perp cos(w_rot t), w_perp sin(w_rot t), w0).
struct RabiDriver {
    double omega_perp = 0.0;
    double omega_rot = 0.0;
    double omega_0 = 0.0;
};

/// Linear sweep through an avoided crossing: (delta, 0, alpha * t), alpha > 0.
struct LandauZenerDriver {
    double delta = 0.0;
    double alpha = 1.0;
};

struct ConstantDriver {
    FieldSample value;
};

/// Linearly interpolated samples on a strictly increasing time grid.
struct TabulatedDriver {
    std::vector<double> times;
    std::vector<FieldSample> samples;

    TabulatedDriver() = default;
    TabulatedDriver(std::vector<double> t, std::vector<FieldSample> s)
        : times(std::move(t)), samples(std::move(s)) {
        if (times.size() != samples.size() || times.size() < 2)
            throw std::domain_error("TabulatedDriver: need >= 2 matching time/sample rows");
        for (size_t i = 1; i < times.size(); ++i)
            if (!(times[i] > times[i - 1]))
                throw std::domain_error("TabulatedDriver: time grid must be strictly increasing");
    }
};

using FieldDriver = std::variant<RabiDriver, LandauZenerDriver, ConstantDriver, TabulatedDriver>;

inline FieldSample sample(const FieldDriver& driver, double t) {
    return std::visit(
        [t](const auto& d) -> FieldSample {
            using T = std::decay_t<decltype(d)>;
            if constexpr (std::is_same_v<T, RabiDriver>) {
                return {d.omega_perp * std::cos(d.omega_rot * t),
                        d.omega_perp * std::sin(d.omega_rot * t), d.omega_0};
            } else if constexpr (std::is_same_v<T, LandauZenerDriver>) {
                return {d.delta, 0.0, d.alpha * t};
            } else if constexpr (std::is_same_v<T, ConstantDriver>) {
                return d.value;
            } else {
                if (t < d.times.front() || t > d.times.back())
                    throw std::range_error("TabulatedDriver: sample time outside grid");
                auto it = std::upper_bound(d.times.begin(), d.times.end(), t);
                if (it == d.times.end()) --it;
                size_t hi = static_cast<size_t>(it - d.times.begin());
                if (hi == 0) hi = 1;
                const size_t lo = hi - 1;
                const double w = (t - d.times[lo]) / (d.times[hi] - d.times[lo]);
                const FieldSample& s0 = d.samples[lo];
                const FieldSample& s1 = d.samples[hi];
                return {s0.x + w * (s1.x - s0.x), s0.y + w * (s1.y - s0.y),
                        s0.z + w * (s1.z - s0.z)};
            }
        },
        driver);
}

/// Earliest interpolation breakpoint strictly after t, if the driver has one.
/// Lets steppers avoid straddling kinks of tabulated fields.
inline std::optional<double> next_breakpoint(const FieldDriver& driver, double t) {
    if (const auto* tab = std::get_if<TabulatedDriver>(&driver)) {
        auto it = std::upper_bound(tab->times.begin(), tab->times.end(), t);
        if (it != tab->times.end()) return *it;
    }
    return std::nullopt;
}

/// Closed-form spin-1/2 amplitudes for the resonant Rabi driver
/// (omega_rot = omega_0), in the lab frame:
///   a(t) = exp(-i w0 t / 2) cos(w_perp t / 2)
///   b(t) = -i exp(-i w0 t / 2) sin(w_perp t / 2)
/// |b|^2 = sin^2(w_perp t / 2) is periodic with full inversion at
/// t = pi / w_perp. Validated against the numerical integrator in the tests.
inline SU2Propagator rabi_resonance_ab(double omega_perp, double omega_0, double t) {
    const Complex frame = std::exp(Complex(0.0, -0.5 * omega_0 * t));
    const double half = 0.5 * omega_perp * t;
    return SU2Propagator(frame * std::cos(half), frame * Complex(0.0, -1.0) * std::sin(half));
}

/// Rotating-frame form (omega_0 = 0); moduli are independent of omega_0.
inline SU2Propagator rabi_resonance_ab(double omega_perp, double t) {
    return rabi_resonance_ab(omega_perp, 0.0, t);
}

}  // namespace spinpair
