#include <CLI11.hpp>
#include <fstream>
#include <iostream>

#include "spinpair/figures.hpp"
#include "spinpair/run.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 2;
constexpr int kExitIntegration = 3;
constexpr int kExitEnsemble = 4;

bool write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) return false;
    out << content;
    return static_cast<bool>(out);
}

std::string fmt12(double x) { return spinpair::detail::fmt_sig12(x); }

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"spinpair: dynamics of two exchange-coupled spins in controllable and noisy fields"};
    app.require_subcommand(1);

    std::string scenario_path, out_path, figure_id;
    double tol = 1e-6;
    long trajectories_override = -1;
    std::uint64_t seed_override = 0;
    bool seed_given = false;
    bool corrupt_cg = false;

    auto* simulate = app.add_subcommand("simulate", "run a scenario file and write a CSV series");
    simulate->add_option("--scenario", scenario_path, "scenario file")->required();
    simulate->add_option("--out", out_path, "output CSV path")->required();
    simulate->add_option("--trajectories", trajectories_override, "override ensemble size");
    simulate->add_option("--seed", seed_override, "override ensemble master seed")
        ->each([&](const std::string&) { seed_given = true; });

    auto* figure = app.add_subcommand("figure", "emit the data table behind a reference plot");
    figure->add_option("--figure", figure_id, "one of fig1..fig5")->required();
    figure->add_option("--out", out_path, "output CSV path")->required();

    auto* oracle = app.add_subcommand(
        "oracle-check", "compare the block construction against full-space integration");
    oracle->add_option("--scenario", scenario_path, "scenario file")->required();
    oracle->add_option("--tol", tol, "maximum allowed entrywise deviation");
    oracle->add_flag("--corrupt-cg", corrupt_cg,
                     "negative control: corrupt the basis transform on purpose");

    auto* analytic = app.add_subcommand("analytic", "evaluate a closed-form expression");
    std::string formula, initial_name = "++";
    double gamma = 0.0, theta = 0.0;
    std::string j1_text = "1/2", j2_text = "1/2";
    analytic->add_option("formula", formula,
                         "one of: lz, joint-lz, noisy-lz, asymptotic-jz, gamma-regime")
        ->required();
    analytic->add_option("--gamma", gamma, "Landau-Zener parameter");
    analytic->add_option("--theta", theta, "dimensionless noise strength");
    analytic->add_option("--j1", j1_text, "first spin magnitude");
    analytic->add_option("--j2", j2_text, "second spin magnitude");
    analytic->add_option("--initial", initial_name, "one of: ++, --, psi+");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitUsage;
    }

    try {
        if (simulate->parsed()) {
            spinpair::Scenario sc = spinpair::load_scenario(scenario_path);
            if (trajectories_override > 0 || seed_given) {
                if (!sc.ensemble) {
                    std::cerr << "error: scenario has no [ensemble] section to override\n";
                    return kExitUsage;
                }
                if (trajectories_override > 0) sc.ensemble->n_trajectories = trajectories_override;
                if (seed_given) sc.ensemble->master_seed = seed_override;
            }
            const spinpair::SeriesOutput series = spinpair::simulate_series(sc);
            if (!write_file(out_path, spinpair::to_csv(series))) {
                std::cerr << "error: cannot write '" << out_path << "'\n";
                return kExitUsage;
            }
            return kExitOk;
        }

        if (figure->parsed()) {
            const spinpair::SeriesOutput series = spinpair::figure_series(figure_id);
            if (!write_file(out_path, spinpair::to_csv(series))) {
                std::cerr << "error: cannot write '" << out_path << "'\n";
                return kExitUsage;
            }
            return kExitOk;
        }

        if (oracle->parsed()) {
            const spinpair::Scenario sc = spinpair::load_scenario(scenario_path);
            const spinpair::OracleReport report = spinpair::oracle_check(sc, tol, corrupt_cg);
            std::cout << "max entrywise deviation: " << fmt12(report.max_deviation)
                      << " (tolerance " << fmt12(report.tolerance) << ")\n";
            std::cout << (report.pass() ? "PASS" : "FAIL") << "\n";
            return report.pass() ? kExitOk : 1;
        }

        if (analytic->parsed()) {
            using namespace spinpair;
            if (formula == "lz") {
                std::cout << fmt12(lz_probability(gamma)) << "\n";
            } else if (formula == "joint-lz") {
                const auto j1 = parse_half_int(j1_text);
                const auto j2 = parse_half_int(j2_text);
                if (!j1 || !j2) {
                    std::cerr << "error: bad spin magnitude\n";
                    return kExitUsage;
                }
                std::cout << fmt12(joint_lz_probability(*j1, *j2, gamma)) << "\n";
            } else if (formula == "noisy-lz") {
                TripletInitial initial;
                if (initial_name == "++")
                    initial = TripletInitial::PlusPlus;
                else if (initial_name == "--")
                    initial = TripletInitial::MinusMinus;
                else if (initial_name == "psi+")
                    initial = TripletInitial::PsiPlus;
                else {
                    std::cerr << "error: --initial must be one of ++, --, psi+\n";
                    return kExitUsage;
                }
                const TripletPopulations p = noisy_lz_populations(LZParams(gamma, theta), initial);
                std::cout << "p_pp " << fmt12(p.p_pp) << "\n";
                std::cout << "p_psi_plus " << fmt12(p.p_psi_plus) << "\n";
                std::cout << "p_mm " << fmt12(p.p_mm) << "\n";
            } else if (formula == "asymptotic-jz") {
                std::cout << fmt12(asymptotic_jz(LZParams(gamma, theta))) << "\n";
            } else if (formula == "gamma-regime") {
                std::cout << to_string(gamma_regime(gamma)) << "\n";
            } else {
                std::cerr << "error: unknown formula '" << formula << "'\n";
                return kExitUsage;
            }
            return kExitOk;
        }
    } catch (const spinpair::ScenarioParseError& e) {
        std::cerr << "parse error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const spinpair::EnsembleError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitEnsemble;
    } catch (const spinpair::IntegrationError& e) {
        std::cerr << "error: " << e.what() << " (reached t = " << e.t_reached() << ")\n";
        return kExitIntegration;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    }
    return kExitUsage;
}
