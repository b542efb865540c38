#pragma once

#include "spinpair/analytics.hpp"
#include "spinpair/fields.hpp"
#include "spinpair/scenario.hpp"

namespace spinpair {

/// Data tables behind the reference plots, evaluated from the closed forms.
/// fig1: joint inversion under the resonant precessing driver vs the
///       dimensionless time tau = lambda_R t (lambda_R = omega_perp / 2).
/// fig2: asymptotic joint inversion vs gamma, one column per theta.
/// fig3, fig4: the same vs theta, one column per gamma (fig4 adds the 1/3
///       reference line).
/// fig5: asymptotic magnetization vs gamma, one column per theta; the grid
///       includes gamma = ln(2)/(2 pi), the common zero of every column.
inline SeriesOutput figure_series(const std::string& id) {
    SeriesOutput s;
    auto linspace = [](double a, double b, int n) {
        std::vector<double> g(n);
        for (int i = 0; i < n; ++i) g[i] = a + (b - a) * i / (n - 1);
        g.back() = b;
        return g;
    };

    if (id == "fig1") {
        const double omega_perp = 1.0;
        const double lambda_r = 0.5 * omega_perp;  // lambda_R = gamma B_perp / 2 convention
        s.comments.push_back("joint inversion probability under the resonant precessing driver");
        s.comments.push_back("tau = lambda_R * t with lambda_R = gamma*B_perp/2 = omega_perp/2");
        s.columns = {"tau", "p_half_half", "p_one_half", "p_one_one"};
        const HalfInt half(1), one(2);
        for (double tau : linspace(0.0, 2.0 * M_PI, 1257)) {
            const SU2Propagator u = rabi_resonance_ab(omega_perp, tau / lambda_r);
            s.rows.push_back({tau, joint_inversion_probability(half, half, u.b()),
                              joint_inversion_probability(one, half, u.b()),
                              joint_inversion_probability(one, one, u.b())});
        }
        return s;
    }
    if (id == "fig2") {
        const std::vector<double> thetas = {0.0, 0.5, 1.0, 2.0, 5.0};
        s.comments.push_back("asymptotic joint inversion of two spin 1/2's vs gamma");
        s.columns = {"gamma"};
        for (double th : thetas) s.columns.push_back("theta" + detail::fmt_sig12(th));
        for (double gamma : linspace(0.0, 1.0, 201)) {
            std::vector<double> row{gamma};
            for (double th : thetas)
                row.push_back(noisy_lz_populations(LZParams(gamma, th)).p_mm);
            s.rows.push_back(std::move(row));
        }
        return s;
    }
    if (id == "fig3" || id == "fig4") {
        const bool fig4 = id == "fig4";
        const std::vector<double> gammas =
            fig4 ? std::vector<double>{0.16, 0.15, 0.14}
                 : std::vector<double>{1.0, 0.5, 0.3, 0.2, 0.1, 0.05, 0.0};
        s.comments.push_back("asymptotic joint inversion of two spin 1/2's vs theta");
        s.columns = {"theta"};
        for (double g : gammas) s.columns.push_back("gamma" + detail::fmt_sig12(g));
        if (fig4) s.columns.push_back("one_third");
        const int n = fig4 ? 801 : 1001;
        const double theta_max = fig4 ? 8.0 : 10.0;
        for (double theta : linspace(0.0, theta_max, n)) {
            std::vector<double> row{theta};
            for (double g : gammas)
                row.push_back(noisy_lz_populations(LZParams(g, theta)).p_mm);
            if (fig4) row.push_back(1.0 / 3.0);
            s.rows.push_back(std::move(row));
        }
        return s;
    }
    if (id == "fig5") {
        const std::vector<double> thetas = {0.0, 1.0, 3.0, 7.0};
        s.comments.push_back("asymptotic magnetization of two spin 1/2's vs gamma");
        s.columns = {"gamma"};
        for (double th : thetas) s.columns.push_back("theta" + detail::fmt_sig12(th));
        std::vector<double> gammas = linspace(0.0, 1.0, 201);
        gammas.push_back(std::log(2.0) / (2.0 * M_PI));  // common zero of all columns
        std::sort(gammas.begin(), gammas.end());
        for (double gamma : gammas) {
            std::vector<double> row{gamma};
            for (double th : thetas) row.push_back(asymptotic_jz(LZParams(gamma, th)));
            s.rows.push_back(std::move(row));
        }
        return s;
    }
    throw std::domain_error("unknown figure id '" + id + "' (expected fig1..fig5)");
}

}  // namespace spinpair
