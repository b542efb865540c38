#pragma once

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "spinpair/analytics.hpp"
#include "spinpair/integrator.hpp"
#include "spinpair/noise.hpp"
#include "spinpair/observables.hpp"

namespace spinpair {

/// Scenario / CSV syntax error with 1-based line and column.
class ScenarioParseError : public std::runtime_error {
  public:
    ScenarioParseError(int line, int col, const std::string& msg)
        : std::runtime_error("line " + std::to_string(line) + ", col " + std::to_string(col) +
                             ": " + msg),
          line_(line),
          col_(col) {}
    int line() const { return line_; }
    int col() const { return col_; }

  private:
    int line_, col_;
};

struct Observable {
    enum class Kind { Jz, J1z, J2z, Jsq, Projection };
    Kind kind = Kind::Jz;
    enum class Target { None, Stretched, Flipped, PsiPlus, PsiMinus, MPair };
    Target target = Target::None;
    HalfInt m1, m2;     // for MPair targets
    std::string name;   // column header, as configured
};

struct InitialStateSpec {
    enum class Kind { Stretched, MPair, PsiPlus, PsiMinus, Custom };
    Kind kind = Kind::Stretched;
    HalfInt m1, m2;
    std::vector<Complex> custom;  // standard-basis amplitudes
};

enum class Engine { Block, Full };

struct Scenario {
    SpinPair pair;
    FieldDriver driver = ConstantDriver{};
    std::string tabulated_path;  // set when the driver came from a CSV file
    std::optional<NoiseModel> noise;
    double t_start = 0.0;
    double t_end = 1.0;
    int points = 2;
    InitialStateSpec initial;
    std::vector<Observable> observables;
    std::optional<EnsembleConfig> ensemble;
    IntegrationConfig integration;
    Engine engine = Engine::Block;

    std::vector<double> grid() const {
        std::vector<double> g(points);
        if (points == 1) {
            g[0] = t_end;
        } else {
            for (int i = 0; i < points; ++i)
                g[i] = t_start + (t_end - t_start) * i / (points - 1);
            g.back() = t_end;
        }
        return g;
    }

    PairState initial_state() const {
        switch (initial.kind) {
            case InitialStateSpec::Kind::Stretched: return PairState::stretched(pair);
            case InitialStateSpec::Kind::MPair:
                return PairState::basis_state(pair, initial.m1, initial.m2);
            case InitialStateSpec::Kind::PsiPlus:
            case InitialStateSpec::Kind::PsiMinus: {
                const double sign = initial.kind == InitialStateSpec::Kind::PsiPlus ? 1.0 : -1.0;
                Eigen::VectorXcd psi = Eigen::VectorXcd::Zero(pair.dim());
                psi(1) = 1.0 / std::sqrt(2.0);
                psi(2) = sign / std::sqrt(2.0);
                return PairState::pure(pair, psi, Basis::Standard);
            }
            case InitialStateSpec::Kind::Custom: {
                Eigen::VectorXcd psi(pair.dim());
                for (int i = 0; i < pair.dim(); ++i) psi(i) = initial.custom[i];
                return PairState::pure(pair, psi, Basis::Standard);
            }
        }
        throw std::logic_error("unreachable");
    }
};

namespace detail {

struct IniValue {
    std::string text;
    int line = 0;
    int col = 0;
};

struct IniSection {
    std::map<std::string, IniValue> values;
    int line = 0;
};

inline std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

inline std::map<std::string, IniSection> parse_ini(const std::string& text) {
    std::map<std::string, IniSection> sections;
    std::istringstream in(text);
    std::string raw;
    std::string current;
    int line_no = 0;
    while (std::getline(in, raw)) {
        ++line_no;
        const std::string line = trim(raw);
        if (line.empty() || line[0] == '#' || line[0] == ';') continue;
        if (line.front() == '[') {
            if (line.back() != ']')
                throw ScenarioParseError(line_no, 1, "unterminated section header");
            current = trim(line.substr(1, line.size() - 2));
            if (current.empty()) throw ScenarioParseError(line_no, 2, "empty section name");
            if (sections.count(current))
                throw ScenarioParseError(line_no, 1, "duplicate section [" + current + "]");
            sections[current].line = line_no;
            continue;
        }
        const auto eq = raw.find('=');
        if (eq == std::string::npos)
            throw ScenarioParseError(line_no, 1, "expected 'key = value' or '[section]'");
        if (current.empty())
            throw ScenarioParseError(line_no, 1, "key outside of any section");
        const std::string key = trim(raw.substr(0, eq));
        if (key.empty()) throw ScenarioParseError(line_no, 1, "empty key");
        auto vstart = raw.find_first_not_of(" \t", eq + 1);
        IniValue v;
        v.text = trim(raw.substr(eq + 1));
        v.line = line_no;
        v.col = vstart == std::string::npos ? static_cast<int>(eq) + 2
                                            : static_cast<int>(vstart) + 1;
        if (sections[current].values.count(key))
            throw ScenarioParseError(line_no, 1, "duplicate key '" + key + "'");
        sections[current].values[key] = std::move(v);
    }
    return sections;
}

inline double parse_double(const IniValue& v) {
    try {
        size_t used = 0;
        const double x = std::stod(v.text, &used);
        if (used != v.text.size()) throw std::invalid_argument("");
        return x;
    } catch (const std::exception&) {
        throw ScenarioParseError(v.line, v.col, "expected a number, got '" + v.text + "'");
    }
}

inline long parse_long(const IniValue& v) {
    try {
        size_t used = 0;
        const long x = std::stol(v.text, &used);
        if (used != v.text.size()) throw std::invalid_argument("");
        return x;
    } catch (const std::exception&) {
        throw ScenarioParseError(v.line, v.col, "expected an integer, got '" + v.text + "'");
    }
}

inline std::uint64_t parse_u64(const IniValue& v) {
    try {
        size_t used = 0;
        const unsigned long long x = std::stoull(v.text, &used);
        if (used != v.text.size()) throw std::invalid_argument("");
        return x;
    } catch (const std::exception&) {
        throw ScenarioParseError(v.line, v.col, "expected an unsigned integer, got '" + v.text + "'");
    }
}

inline HalfInt parse_spin(const IniValue& v) {
    const auto h = parse_half_int(v.text);
    if (!h) throw ScenarioParseError(v.line, v.col, "expected a half-integer, got '" + v.text + "'");
    return *h;
}

inline std::vector<std::string> split_list(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::string item;
    std::istringstream in(s);
    while (std::getline(in, item, sep)) {
        item = trim(item);
        if (!item.empty()) out.push_back(item);
    }
    return out;
}

}  // namespace detail

/// Load a tabulated field table: header `t,omega_x,omega_y,omega_z`, one
/// sample per row, times strictly increasing.
inline TabulatedDriver load_field_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ScenarioParseError(0, 0, "cannot open field table '" + path + "'");
    std::string line;
    int line_no = 0;
    if (!std::getline(in, line)) throw ScenarioParseError(1, 1, "empty field table '" + path + "'");
    ++line_no;
    if (detail::trim(line) != "t,omega_x,omega_y,omega_z")
        throw ScenarioParseError(1, 1, "field table header must be 't,omega_x,omega_y,omega_z'");
    std::vector<double> times;
    std::vector<FieldSample> samples;
    while (std::getline(in, line)) {
        ++line_no;
        const std::string row = detail::trim(line);
        if (row.empty()) continue;
        const auto cells = detail::split_list(row, ',');
        if (cells.size() != 4)
            throw ScenarioParseError(line_no, 1, "expected 4 comma-separated values");
        double vals[4];
        for (int i = 0; i < 4; ++i) {
            try {
                size_t used = 0;
                vals[i] = std::stod(cells[i], &used);
                if (used != cells[i].size()) throw std::invalid_argument("");
            } catch (const std::exception&) {
                throw ScenarioParseError(line_no, 1, "bad number '" + cells[i] + "'");
            }
        }
        times.push_back(vals[0]);
        samples.push_back(FieldSample{vals[1], vals[2], vals[3]});
    }
    try {
        return TabulatedDriver(std::move(times), std::move(samples));
    } catch (const std::domain_error& e) {
        throw ScenarioParseError(line_no, 1, std::string(e.what()) + " in '" + path + "'");
    }
}

inline Observable parse_observable_name(const std::string& name, int line, int col) {
    Observable obs;
    obs.name = name;
    if (name == "jz") {
        obs.kind = Observable::Kind::Jz;
    } else if (name == "j1z") {
        obs.kind = Observable::Kind::J1z;
    } else if (name == "j2z") {
        obs.kind = Observable::Kind::J2z;
    } else if (name == "jsq") {
        obs.kind = Observable::Kind::Jsq;
    } else if (name == "joint_inversion" || name == "p_flipped") {
        obs.kind = Observable::Kind::Projection;
        obs.target = Observable::Target::Flipped;
    } else if (name == "p_stretched") {
        obs.kind = Observable::Kind::Projection;
        obs.target = Observable::Target::Stretched;
    } else if (name == "p_psi_plus") {
        obs.kind = Observable::Kind::Projection;
        obs.target = Observable::Target::PsiPlus;
    } else if (name == "p_psi_minus") {
        obs.kind = Observable::Kind::Projection;
        obs.target = Observable::Target::PsiMinus;
    } else if (name.rfind("p_m:", 0) == 0) {
        const auto parts = detail::split_list(name.substr(4), ':');
        if (parts.size() != 2)
            throw ScenarioParseError(line, col, "projection observable needs 'p_m:<m1>:<m2>'");
        const auto m1 = parse_half_int(parts[0]);
        const auto m2 = parse_half_int(parts[1]);
        if (!m1 || !m2)
            throw ScenarioParseError(line, col, "bad projections in observable '" + name + "'");
        obs.kind = Observable::Kind::Projection;
        obs.target = Observable::Target::MPair;
        obs.m1 = *m1;
        obs.m2 = *m2;
    } else {
        throw ScenarioParseError(line, col, "unknown observable '" + name + "'");
    }
    return obs;
}

/// Parse a scenario from text. Relative tabulated-driver paths are resolved
/// against base_dir.
inline Scenario parse_scenario(const std::string& text, const std::string& base_dir = "") {
    auto sections = detail::parse_ini(text);
    Scenario sc;

    auto require_section = [&](const std::string& name) -> detail::IniSection& {
        auto it = sections.find(name);
        if (it == sections.end())
            throw ScenarioParseError(0, 0, "missing required section [" + name + "]");
        return it->second;
    };
    auto get = [&](detail::IniSection& sec, const std::string& key) -> detail::IniValue& {
        auto it = sec.values.find(key);
        if (it == sec.values.end())
            throw ScenarioParseError(sec.line, 1, "missing key '" + key + "'");
        return it->second;
    };
    auto get_opt = [&](detail::IniSection& sec, const std::string& key) -> detail::IniValue* {
        auto it = sec.values.find(key);
        return it == sec.values.end() ? nullptr : &it->second;
    };
    auto check_known = [&](detail::IniSection& sec, std::initializer_list<const char*> keys) {
        for (const auto& [k, v] : sec.values) {
            bool known = false;
            for (const char* key : keys)
                if (k == key) known = true;
            if (!known) throw ScenarioParseError(v.line, 1, "unknown key '" + k + "'");
        }
    };

    {
        auto& sec = require_section("pair");
        check_known(sec, {"j1", "j2", "lambda"});
        const HalfInt j1 = detail::parse_spin(get(sec, "j1"));
        const HalfInt j2 = detail::parse_spin(get(sec, "j2"));
        double lambda = 0.0;
        if (auto* v = get_opt(sec, "lambda")) lambda = detail::parse_double(*v);
        if (!j1.valid_magnitude() || !j2.valid_magnitude())
            throw ScenarioParseError(sec.line, 1, "spin magnitudes must be non-negative");
        sc.pair = SpinPair(j1, j2, lambda);
        if (sc.pair.dim() > 64)
            throw ScenarioParseError(sec.line, 1, "pair dimension above the supported cap (64)");
    }

    {
        auto& sec = require_section("driver");
        const std::string kind = get(sec, "kind").text;
        if (kind == "rabi") {
            check_known(sec, {"kind", "omega_perp", "omega_rot", "omega_0"});
            RabiDriver d;
            d.omega_perp = detail::parse_double(get(sec, "omega_perp"));
            d.omega_rot = detail::parse_double(get(sec, "omega_rot"));
            d.omega_0 = detail::parse_double(get(sec, "omega_0"));
            sc.driver = d;
        } else if (kind == "landau_zener") {
            check_known(sec, {"kind", "delta", "alpha"});
            LandauZenerDriver d;
            d.delta = detail::parse_double(get(sec, "delta"));
            d.alpha = detail::parse_double(get(sec, "alpha"));
            if (!(d.alpha > 0)) {
                auto& v = get(sec, "alpha");
                throw ScenarioParseError(v.line, v.col, "sweep rate alpha must be positive");
            }
            sc.driver = d;
        } else if (kind == "constant") {
            check_known(sec, {"kind", "omega_x", "omega_y", "omega_z"});
            ConstantDriver d;
            if (auto* v = get_opt(sec, "omega_x")) d.value.x = detail::parse_double(*v);
            if (auto* v = get_opt(sec, "omega_y")) d.value.y = detail::parse_double(*v);
            if (auto* v = get_opt(sec, "omega_z")) d.value.z = detail::parse_double(*v);
            sc.driver = d;
        } else if (kind == "tabulated") {
            check_known(sec, {"kind", "file"});
            auto& v = get(sec, "file");
            std::filesystem::path p(v.text);
            if (p.is_relative() && !base_dir.empty()) p = std::filesystem::path(base_dir) / p;
            sc.tabulated_path = p.string();
            sc.driver = load_field_csv(sc.tabulated_path);
        } else {
            auto& v = get(sec, "kind");
            throw ScenarioParseError(v.line, v.col, "unknown driver kind '" + kind + "'");
        }
    }

    {
        auto& sec = require_section("time");
        check_known(sec, {"start", "end", "points"});
        sc.t_start = detail::parse_double(get(sec, "start"));
        sc.t_end = detail::parse_double(get(sec, "end"));
        sc.points = static_cast<int>(detail::parse_long(get(sec, "points")));
        if (!(sc.t_end > sc.t_start))
            throw ScenarioParseError(sec.line, 1, "need end > start");
        if (sc.points < 1) throw ScenarioParseError(sec.line, 1, "need points >= 1");
    }

    {
        auto& sec = require_section("initial");
        const std::string state = get(sec, "state").text;
        if (state == "stretched") {
            check_known(sec, {"state"});
            sc.initial.kind = InitialStateSpec::Kind::Stretched;
        } else if (state == "m_pair") {
            check_known(sec, {"state", "m1", "m2"});
            sc.initial.kind = InitialStateSpec::Kind::MPair;
            sc.initial.m1 = detail::parse_spin(get(sec, "m1"));
            sc.initial.m2 = detail::parse_spin(get(sec, "m2"));
            if (!sc.initial.m1.valid_projection_for(sc.pair.j1) ||
                !sc.initial.m2.valid_projection_for(sc.pair.j2))
                throw ScenarioParseError(sec.line, 1, "m1/m2 not valid projections for the pair");
        } else if (state == "psi_plus" || state == "psi_minus") {
            check_known(sec, {"state"});
            if (sc.pair.j1.twice() != 1 || sc.pair.j2.twice() != 1)
                throw ScenarioParseError(sec.line, 1,
                                         "psi states are defined for the (1/2, 1/2) pair");
            sc.initial.kind = state == "psi_plus" ? InitialStateSpec::Kind::PsiPlus
                                                  : InitialStateSpec::Kind::PsiMinus;
        } else if (state == "custom") {
            check_known(sec, {"state", "vector"});
            auto& v = get(sec, "vector");
            std::istringstream in(v.text);
            std::vector<double> nums;
            double x;
            while (in >> x) nums.push_back(x);
            if (!in.eof() || nums.size() != 2 * static_cast<size_t>(sc.pair.dim()))
                throw ScenarioParseError(v.line, v.col,
                                         "custom vector needs " + std::to_string(2 * sc.pair.dim()) +
                                             " numbers (re im per amplitude)");
            sc.initial.kind = InitialStateSpec::Kind::Custom;
            for (size_t i = 0; i < nums.size(); i += 2)
                sc.initial.custom.emplace_back(nums[i], nums[i + 1]);
        } else {
            auto& v = get(sec, "state");
            throw ScenarioParseError(v.line, v.col, "unknown initial state '" + state + "'");
        }
    }

    {
        auto& sec = require_section("observables");
        check_known(sec, {"list"});
        auto& v = get(sec, "list");
        const auto names = detail::split_list(v.text, ',');
        if (names.empty())
            throw ScenarioParseError(v.line, v.col, "observable list must not be empty");
        for (const auto& n : names) sc.observables.push_back(parse_observable_name(n, v.line, v.col));
        for (const auto& obs : sc.observables) {
            const bool psi_target = obs.target == Observable::Target::PsiPlus ||
                                    obs.target == Observable::Target::PsiMinus;
            if (psi_target && (sc.pair.j1.twice() != 1 || sc.pair.j2.twice() != 1))
                throw ScenarioParseError(v.line, v.col,
                                         "'" + obs.name + "' is defined for the (1/2, 1/2) pair");
            if (obs.target == Observable::Target::MPair &&
                (!obs.m1.valid_projection_for(sc.pair.j1) ||
                 !obs.m2.valid_projection_for(sc.pair.j2)))
                throw ScenarioParseError(v.line, v.col,
                                         "'" + obs.name + "' projections invalid for the pair");
        }
    }

    if (auto it = sections.find("noise"); it != sections.end()) {
        auto& sec = it->second;
        check_known(sec, {"sigma_x_sq", "sigma_y_sq", "sigma_z_sq", "lambda_corr"});
        double sx = 0, sy = 0, sz = 0;
        if (auto* v = get_opt(sec, "sigma_x_sq")) sx = detail::parse_double(*v);
        if (auto* v = get_opt(sec, "sigma_y_sq")) sy = detail::parse_double(*v);
        if (auto* v = get_opt(sec, "sigma_z_sq")) sz = detail::parse_double(*v);
        const double lam = detail::parse_double(get(sec, "lambda_corr"));
        try {
            sc.noise = NoiseModel(sx, sy, sz, lam);
        } catch (const std::domain_error& e) {
            throw ScenarioParseError(sec.line, 1, e.what());
        }
    }

    if (auto it = sections.find("ensemble"); it != sections.end()) {
        auto& sec = it->second;
        check_known(sec, {"trajectories", "seed", "path_step"});
        EnsembleConfig cfg;
        cfg.n_trajectories = detail::parse_long(get(sec, "trajectories"));
        if (cfg.n_trajectories < 1)
            throw ScenarioParseError(sec.line, 1, "need at least one trajectory");
        if (auto* v = get_opt(sec, "seed")) cfg.master_seed = detail::parse_u64(*v);
        if (auto* v = get_opt(sec, "path_step")) cfg.path_step = detail::parse_double(*v);
        sc.ensemble = cfg;
    }

    if (sc.noise && !sc.noise->is_zero() && !sc.ensemble)
        throw ScenarioParseError(0, 0, "[ensemble] section required when noise is present");
    if (sc.ensemble && !sc.noise)
        throw ScenarioParseError(0, 0, "[ensemble] section requires a [noise] section");

    if (auto it = sections.find("integration"); it != sections.end()) {
        auto& sec = it->second;
        check_known(sec, {"rel_tol", "abs_tol", "max_step", "method", "engine"});
        if (auto* v = get_opt(sec, "rel_tol")) sc.integration.rel_tol = detail::parse_double(*v);
        if (auto* v = get_opt(sec, "abs_tol")) sc.integration.abs_tol = detail::parse_double(*v);
        if (auto* v = get_opt(sec, "max_step")) sc.integration.max_step = detail::parse_double(*v);
        if (!(sc.integration.rel_tol > 0) || !(sc.integration.abs_tol > 0))
            throw ScenarioParseError(sec.line, 1, "tolerances must be positive");
        if (auto* v = get_opt(sec, "method")) {
            if (v->text == "rk45")
                sc.integration.method = IntegrationConfig::Method::AdaptiveRk;
            else if (v->text == "magnus2")
                sc.integration.method = IntegrationConfig::Method::ExponentialMidpoint;
            else
                throw ScenarioParseError(v->line, v->col, "unknown method '" + v->text + "'");
        }
        if (auto* v = get_opt(sec, "engine")) {
            if (v->text == "block")
                sc.engine = Engine::Block;
            else if (v->text == "full")
                sc.engine = Engine::Full;
            else
                throw ScenarioParseError(v->line, v->col, "unknown engine '" + v->text + "'");
        }
    }

    for (const auto& [name, sec] : sections) {
        if (name != "pair" && name != "driver" && name != "time" && name != "initial" &&
            name != "observables" && name != "noise" && name != "ensemble" &&
            name != "integration")
            throw ScenarioParseError(sec.line, 1, "unknown section [" + name + "]");
    }
    return sc;
}

inline Scenario load_scenario(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ScenarioParseError(0, 0, "cannot open scenario file '" + path + "'");
    std::stringstream buf;
    buf << in.rdbuf();
    return parse_scenario(buf.str(), std::filesystem::path(path).parent_path().string());
}

namespace detail {

inline std::string fmt_full(double x) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", x);
    return buf;
}

}  // namespace detail

/// Canonical text form; re-parsing reproduces an equivalent scenario.
inline std::string emit_scenario(const Scenario& sc) {
    std::ostringstream out;
    out << "[pair]\n";
    out << "j1 = " << sc.pair.j1.str() << "\n";
    out << "j2 = " << sc.pair.j2.str() << "\n";
    out << "lambda = " << detail::fmt_full(sc.pair.lambda) << "\n\n";

    out << "[driver]\n";
    if (const auto* d = std::get_if<RabiDriver>(&sc.driver)) {
        out << "kind = rabi\n";
        out << "omega_perp = " << detail::fmt_full(d->omega_perp) << "\n";
        out << "omega_rot = " << detail::fmt_full(d->omega_rot) << "\n";
        out << "omega_0 = " << detail::fmt_full(d->omega_0) << "\n";
    } else if (const auto* d = std::get_if<LandauZenerDriver>(&sc.driver)) {
        out << "kind = landau_zener\n";
        out << "delta = " << detail::fmt_full(d->delta) << "\n";
        out << "alpha = " << detail::fmt_full(d->alpha) << "\n";
    } else if (const auto* d = std::get_if<ConstantDriver>(&sc.driver)) {
        out << "kind = constant\n";
        out << "omega_x = " << detail::fmt_full(d->value.x) << "\n";
        out << "omega_y = " << detail::fmt_full(d->value.y) << "\n";
        out << "omega_z = " << detail::fmt_full(d->value.z) << "\n";
    } else {
        out << "kind = tabulated\n";
        out << "file = " << sc.tabulated_path << "\n";
    }
    out << "\n[time]\n";
    out << "start = " << detail::fmt_full(sc.t_start) << "\n";
    out << "end = " << detail::fmt_full(sc.t_end) << "\n";
    out << "points = " << sc.points << "\n";

    out << "\n[initial]\n";
    switch (sc.initial.kind) {
        case InitialStateSpec::Kind::Stretched: out << "state = stretched\n"; break;
        case InitialStateSpec::Kind::MPair:
            out << "state = m_pair\n";
            out << "m1 = " << sc.initial.m1.str() << "\n";
            out << "m2 = " << sc.initial.m2.str() << "\n";
            break;
        case InitialStateSpec::Kind::PsiPlus: out << "state = psi_plus\n"; break;
        case InitialStateSpec::Kind::PsiMinus: out << "state = psi_minus\n"; break;
        case InitialStateSpec::Kind::Custom: {
            out << "state = custom\n";
            out << "vector =";
            for (const Complex& c : sc.initial.custom)
                out << " " << detail::fmt_full(c.real()) << " " << detail::fmt_full(c.imag());
            out << "\n";
            break;
        }
    }

    out << "\n[observables]\n";
    out << "list = ";
    for (size_t i = 0; i < sc.observables.size(); ++i) {
        if (i) out << ", ";
        out << sc.observables[i].name;
    }
    out << "\n";

    if (sc.noise) {
        out << "\n[noise]\n";
        out << "sigma_x_sq = " << detail::fmt_full(sc.noise->sigma_sq[0]) << "\n";
        out << "sigma_y_sq = " << detail::fmt_full(sc.noise->sigma_sq[1]) << "\n";
        out << "sigma_z_sq = " << detail::fmt_full(sc.noise->sigma_sq[2]) << "\n";
        out << "lambda_corr = " << detail::fmt_full(sc.noise->lambda_corr) << "\n";
    }
    if (sc.ensemble) {
        out << "\n[ensemble]\n";
        out << "trajectories = " << sc.ensemble->n_trajectories << "\n";
        out << "seed = " << sc.ensemble->master_seed << "\n";
        out << "path_step = " << detail::fmt_full(sc.ensemble->path_step) << "\n";
    }

    out << "\n[integration]\n";
    out << "rel_tol = " << detail::fmt_full(sc.integration.rel_tol) << "\n";
    out << "abs_tol = " << detail::fmt_full(sc.integration.abs_tol) << "\n";
    out << "max_step = " << detail::fmt_full(sc.integration.max_step) << "\n";
    out << "method = "
        << (sc.integration.method == IntegrationConfig::Method::AdaptiveRk ? "rk45" : "magnus2")
        << "\n";
    out << "engine = " << (sc.engine == Engine::Block ? "block" : "full") << "\n";
    return out.str();
}

/// Table of results: a header, optional leading '#' comment lines, and rows
/// printed with 12 significant digits.
struct SeriesOutput {
    std::vector<std::string> comments;
    std::vector<std::string> columns;
    std::vector<std::vector<double>> rows;
};

namespace detail {

inline std::string fmt_sig12(double x) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.12g", x);
    return buf;
}

}  // namespace detail

inline std::string to_csv(const SeriesOutput& series) {
    std::ostringstream out;
    for (const auto& c : series.comments) out << "# " << c << "\n";
    for (size_t i = 0; i < series.columns.size(); ++i) {
        if (i) out << ",";
        out << series.columns[i];
    }
    out << "\n";
    for (const auto& row : series.rows) {
        for (size_t i = 0; i < row.size(); ++i) {
            if (i) out << ",";
            out << detail::fmt_sig12(row[i]);
        }
        out << "\n";
    }
    return out.str();
}

}  // namespace spinpair
