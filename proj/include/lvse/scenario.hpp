#pragma once

// Scenario configuration and the pipelines behind the `box`, `harmonic`,
// `free` and `batch` subcommands.

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <future>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "lvse/analytic.hpp"
#include "lvse/eigensolve.hpp"
#include "lvse/io.hpp"
#include "lvse/observables.hpp"
#include "lvse/operators.hpp"
#include "lvse/report.hpp"

namespace lvse {

inline constexpr const char* kReportVersion = "1";

inline constexpr const char* kAlphaNote =
    "alpha defaults to 0.1. The reference oscillator plots are also quoted with alpha = 10; "
    "that value is not the default and can be selected with --alpha 10.";

enum class System { Box, Harmonic, Free };

inline std::string to_string(System s) {
    switch (s) {
        case System::Box: return "box";
        case System::Harmonic: return "harmonic";
        case System::Free: return "free";
    }
    return "box";
}

inline System parse_system(std::string_view s) {
    if (s == "box") return System::Box;
    if (s == "harmonic") return System::Harmonic;
    if (s == "free") return System::Free;
    throw ConfigError("unknown system '" + std::string(s) + "' (expected box|harmonic|free)");
}

struct Formats {
    bool csv = true;
    bool json = true;
    bool svg = true;
};

inline Formats parse_formats(std::string_view list) {
    Formats f{false, false, false};
    std::size_t start = 0;
    while (start <= list.size()) {
        const auto end = std::min(list.find(',', start), list.size());
        const auto item = list.substr(start, end - start);
        if (item == "csv")
            f.csv = true;
        else if (item == "json")
            f.json = true;
        else if (item == "svg")
            f.svg = true;
        else
            throw ConfigError("unknown format '" + std::string(item) + "' (expected csv, json, svg)");
        start = end + 1;
    }
    return f;
}

inline std::string to_string(const Formats& f) {
    std::vector<std::string> parts;
    if (f.csv) parts.push_back("csv");
    if (f.json) parts.push_back("json");
    if (f.svg) parts.push_back("svg");
    std::string s;
    for (const auto& p : parts) s += (s.empty() ? "" : ",") + p;
    return s;
}

/// Output directory used when neither --out nor a config file names one.
inline fs::path default_output_dir() {
    if (const char* env = std::getenv("LVSE_OUT"); env && *env) return env;
    return "lvse_out";
}

struct ScenarioConfig {
    std::string name;
    System system = System::Box;
    double m = 1.0;
    double alpha = 0.1;
    double omega = 1.0;
    double L = 10.0;
    double k = 1.0;
    std::optional<std::size_t> n_points;
    std::optional<int> n_states;
    std::optional<double> x_min, x_max;
    Scheme scheme = Scheme::GaugeExact;
    std::optional<Solver> solver;
    fs::path output_dir;
    Formats formats;
    std::uint64_t seed = 42;
    double tol = 1e-10;
    std::optional<std::size_t> max_iter;

    Solver solver_or_default() const {
        return solver.value_or(system == System::Free ? Solver::Analytic : Solver::Tridiag);
    }
    int states_or_default() const {
        return n_states.value_or(system == System::Box ? 4 : system == System::Harmonic ? 3 : 1);
    }
    std::size_t points_or_default() const { return n_points.value_or(2001); }

    ModelParams params() const {
        switch (system) {
            case System::Box: return ModelParams::box(m, alpha, L);
            case System::Harmonic: return ModelParams::harmonic(m, alpha, omega);
            case System::Free: return ModelParams::free(m, alpha);
        }
        return ModelParams::free(m, alpha);
    }

    Grid grid() const {
        switch (system) {
            case System::Box: return make_grid(0.0, L, points_or_default());
            case System::Harmonic: {
                const double half = analytic::oscillator_half_width(states_or_default() - 1, m, omega);
                return make_grid(x_min.value_or(-half), x_max.value_or(half), points_or_default());
            }
            case System::Free: return make_grid(x_min.value_or(0.0), x_max.value_or(20.0), points_or_default());
        }
        return make_grid(0.0, 1.0, 3);
    }

    /// Throws ConfigError for missing, out-of-range or contradictory settings.
    void validate() const {
        const auto positive = [](double v, const char* what) {
            if (!(std::isfinite(v) && v > 0.0)) throw ConfigError(std::string(what) + " must be a positive number");
        };
        positive(m, "m");
        if (!std::isfinite(alpha)) throw ConfigError("alpha must be finite");
        if (system == System::Box) positive(L, "L");
        if (system == System::Harmonic) positive(omega, "omega");
        if (system == System::Free) positive(k, "k");
        if (points_or_default() < 3) throw ConfigError("n_points must be at least 3");
        if (states_or_default() < 1) throw ConfigError("n_states must be at least 1");
        if (!(tol > 0.0)) throw ConfigError("tol must be positive");
        if (system == System::Box && (x_min || x_max))
            throw ConfigError("the box domain is [0, L]; x_min/x_max cannot be set for system box");
        if (x_min && x_max && !(*x_min < *x_max)) throw ConfigError("x_min must be below x_max");
        const Solver s = solver_or_default();
        if (system == System::Free) {
            if (s != Solver::Analytic)
                throw ConfigError("the free particle has a continuous spectrum; use --solver analytic");
            if (states_or_default() != 1) throw ConfigError("the free-particle scenario has exactly one state");
            if (k * k <= alpha * alpha) throw ConditionError("free particle needs k^2 > alpha^2");
        }
        if (s == Solver::RQDescent && states_or_default() != 1)
            throw ConfigError("rq-descent computes the ground state only; use --n-states 1");
        if (s == Solver::Analytic && system == System::Harmonic && states_or_default() - 1 > analytic::kMaxOscillatorLevel)
            throw ConfigError("analytic oscillator states are limited to n <= 170");
        if (s != Solver::Analytic && static_cast<std::size_t>(states_or_default()) > points_or_default() - 2)
            throw ConfigError("n_states exceeds the number of interior grid points");
    }
};

/// Applies the keys of a JSON object to `cfg`; unknown keys are an error.
inline void apply_json(ScenarioConfig& cfg, const json& j) {
    if (!j.is_object()) throw ConfigError("scenario config must be a JSON object");
    try {
        for (const auto& [key, v] : j.items()) {
            if (key == "name")
                cfg.name = v.get<std::string>();
            else if (key == "system")
                cfg.system = parse_system(v.get<std::string>());
            else if (key == "m")
                cfg.m = v.get<double>();
            else if (key == "alpha")
                cfg.alpha = v.get<double>();
            else if (key == "omega")
                cfg.omega = v.get<double>();
            else if (key == "L")
                cfg.L = v.get<double>();
            else if (key == "k")
                cfg.k = v.get<double>();
            else if (key == "n_points")
                cfg.n_points = v.get<std::size_t>();
            else if (key == "n_states")
                cfg.n_states = v.get<int>();
            else if (key == "x_min")
                cfg.x_min = v.get<double>();
            else if (key == "x_max")
                cfg.x_max = v.get<double>();
            else if (key == "scheme")
                cfg.scheme = parse_scheme(v.get<std::string>());
            else if (key == "solver")
                cfg.solver = parse_solver(v.get<std::string>());
            else if (key == "out")
                cfg.output_dir = v.get<std::string>();
            else if (key == "formats") {
                if (v.is_array()) {
                    std::string list;
                    for (const auto& f : v) list += (list.empty() ? "" : ",") + f.get<std::string>();
                    cfg.formats = parse_formats(list);
                } else {
                    cfg.formats = parse_formats(v.get<std::string>());
                }
            } else if (key == "seed")
                cfg.seed = v.get<std::uint64_t>();
            else if (key == "tol")
                cfg.tol = v.get<double>();
            else if (key == "max_iter")
                cfg.max_iter = v.get<std::size_t>();
            else
                throw ConfigError("unknown config key '" + key + "'");
        }
    } catch (const json::exception& e) {
        throw ConfigError(std::string("bad config value: ") + e.what());
    }
}

inline json read_json_file(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open config file " + path.string());
    try {
        return json::parse(in);
    } catch (const json::parse_error& e) {
        throw ConfigError("config file " + path.string() + " is not valid JSON: " + e.what());
    }
}

// ---------------------------------------------------------------------------
// Invariant checks recorded in reports

struct Check {
    std::string name;
    double value = 0.0;
    double bound = 0.0;
    bool upper = true;  // value <= bound when set, value >= bound otherwise

    bool pass() const { return std::isfinite(value) && (upper ? value <= bound : value >= bound); }
};

inline json to_json(const Check& c) {
    return {{"name", c.name}, {"value", c.value}, {"bound", c.bound}, {"relation", c.upper ? "<=" : ">="},
            {"pass", c.pass()}};
}

inline std::string format_param(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%g", v);
    return buf;
}

// ---------------------------------------------------------------------------
// Scenario pipeline

struct ScenarioResult {
    json report;
    Spectrum spectrum;
    std::vector<std::string> files;  // relative to the output directory
};

namespace detail {

inline Spectrum analytic_states(const ScenarioConfig& cfg, const Grid& g, double alpha) {
    Spectrum s;
    s.solver = Solver::Analytic;
    s.seed = cfg.seed;
    const int n = cfg.states_or_default();
    for (int i = 0; i < n; ++i) {
        switch (cfg.system) {
            case System::Box:
                s.pairs.push_back({analytic::box_energy(i + 1, cfg.m, cfg.L), analytic::box_state(i + 1, cfg.L, alpha, g),
                                   i + 1});
                break;
            case System::Harmonic:
                s.pairs.push_back({analytic::ho_energy(i, cfg.omega), analytic::ho_state(i, cfg.m, cfg.omega, alpha, g), i});
                break;
            case System::Free:
                s.pairs.push_back({analytic::free_energy(cfg.k, cfg.m),
                                   analytic::free_particle(cfg.k, alpha, 1.0, 0.0, g), 1});
                break;
        }
    }
    return s;
}

inline SolveOptions solve_options(const ScenarioConfig& cfg, std::size_t k) {
    SolveOptions o;
    o.k = k;
    o.tol = cfg.tol;
    o.seed = cfg.seed;
    o.max_iter = cfg.max_iter;
    return o;
}

inline WaveFunction descent_seed(const ScenarioConfig& cfg, const Grid& g) {
    if (cfg.system == System::Box) {
        std::vector<cplx> a(g.size());
        for (std::size_t j = 0; j < g.size(); ++j) a[j] = g.x(j) * (cfg.L - g.x(j));
        return WaveFunction(g, std::move(a));
    }
    const double scale = 1.0 / std::sqrt(cfg.m * cfg.omega);
    return measures::gaussian(g, 1.5 * scale, 0.25 * scale);
}

inline Spectrum numeric_states(const ScenarioConfig& cfg, const TridiagonalHermitianOperator& op, Solver solver) {
    const auto n = static_cast<std::size_t>(cfg.states_or_default());
    const int base = cfg.system == System::Box ? 1 : 0;
    if (solver == Solver::Tridiag) {
        Spectrum s = eigen_lowest(op, solve_options(cfg, n));
        for (auto& p : s.pairs) p.label += base;
        return s;
    }
    const DescentResult r = rq_descent(op, descent_seed(cfg, op.grid()), solve_options(cfg, 1));
    Spectrum s;
    s.scheme = op.scheme();
    s.solver = Solver::RQDescent;
    s.seed = cfg.seed;
    s.residuals.push_back(detail::residual_norm(op, detail::rows_of(op, r.wf), r.energy.value, op.grid().h()));
    s.pairs.push_back({r.energy, r.wf, base});
    return s;
}

inline double reference_energy(const ScenarioConfig& cfg, int label) {
    switch (cfg.system) {
        case System::Box: return analytic::box_energy(label, cfg.m, cfg.L).value;
        case System::Harmonic: return analytic::ho_energy(label, cfg.omega).value;
        case System::Free: return analytic::free_energy(cfg.k, cfg.m).value;
    }
    return 0.0;
}

inline double max_density_difference(const Spectrum& a, const Spectrum& b) {
    double worst = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t j = 0; j < a.pairs[i].wf.size(); ++j)
            worst = std::max(worst, std::abs(std::norm(a.pairs[i].wf[j]) - std::norm(b.pairs[i].wf[j])));
    return worst;
}

inline std::string system_title(const ScenarioConfig& cfg) {
    switch (cfg.system) {
        case System::Box:
            return "Particle in a box, alpha=" + format_param(cfg.alpha) + ", L=" + format_param(cfg.L) +
                   ", m=" + format_param(cfg.m);
        case System::Harmonic:
            return "Harmonic oscillator, alpha=" + format_param(cfg.alpha) + ", m=" + format_param(cfg.m) +
                   ", omega=" + format_param(cfg.omega);
        case System::Free:
            return "Free particle, alpha=" + format_param(cfg.alpha) + ", k=" + format_param(cfg.k) +
                   ", m=" + format_param(cfg.m);
    }
    return "";
}

}  // namespace detail

/// Runs one scenario, writes the requested files into cfg.output_dir and
/// returns the (schema-validated) report.
inline ScenarioResult run_scenario(const ScenarioConfig& cfg) {
    cfg.validate();
    const ModelParams params = cfg.params();
    const Grid g = cfg.grid();
    const Solver solver = cfg.solver_or_default();
    const auto op = hamiltonian(g, params, cfg.scheme);

    ScenarioResult out;
    std::vector<Check> checks;
    std::vector<std::string> notes{kAlphaNote};

    // States at the requested alpha and, for the invariance checks, at alpha = 0.
    Spectrum states, states0;
    if (solver == Solver::Analytic) {
        states = detail::analytic_states(cfg, g, cfg.alpha);
        states0 = detail::analytic_states(cfg, g, 0.0);
        states.scheme = cfg.scheme;
        for (const auto& p : states.pairs) {
            if (cfg.system == System::Free) {
                states.residuals.push_back(measures::free_particle_residual(cfg.k, cfg.alpha, cfg.m, cfg.scheme)(g));
            } else {
                states.residuals.push_back(
                    detail::residual_norm(op, detail::rows_of(op, p.wf), p.energy.value, g.h()));
            }
        }
    } else {
        states = detail::numeric_states(cfg, op, solver);
        if (solver == Solver::Tridiag && cfg.scheme == Scheme::GaugeExact)
            states0 = detail::numeric_states(cfg, hamiltonian(g, params.with_alpha(0.0), cfg.scheme), solver);
    }

    if (cfg.system != System::Free) {
        double worst = 0.0;
        for (const auto& p : states.pairs) worst = std::max(worst, std::abs(norm_squared(p.wf) - 1.0));
        checks.push_back({"normalization", worst, 1e-10, true});
    }
    const bool exact_gauge = solver == Solver::Analytic || cfg.scheme == Scheme::GaugeExact;
    if (!states0.pairs.empty() && exact_gauge) {
        const double density_tol = solver == Solver::Analytic ? 1e-10 : cfg.tol;
        checks.push_back({"density_alpha_invariance", detail::max_density_difference(states, states0), density_tol, true});
        double gauge = 0.0;
        for (std::size_t i = 0; i < states.size(); ++i)
            gauge = std::max(gauge, gauge_residual(states.pairs[i].wf, states0.pairs[i].wf, cfg.alpha));
        checks.push_back({"gauge_residual", gauge, solver == Solver::Analytic ? 1e-12 : 1e-9, true});
    }
    if (solver == Solver::Tridiag && cfg.scheme == Scheme::GaugeExact) {
        double worst = 0.0;
        for (std::size_t i = 0; i < states.size(); ++i)
            worst = std::max(worst, std::abs(states.pairs[i].energy.value - states0.pairs[i].energy.value) /
                                        std::abs(states0.pairs[i].energy.value));
        checks.push_back({"energy_alpha_invariance", worst, 1e-12, true});
    }
    if (solver == Solver::RQDescent) {
        const Spectrum ref = eigen_lowest(op, detail::solve_options(cfg, 1));
        checks.push_back({"cross_solver", std::abs(states.pairs[0].energy.value - ref.pairs[0].energy.value),
                          10 * cfg.tol, true});
    }

    std::vector<double> products;
    if (cfg.system != System::Free) {
        double lowest = INFINITY;
        for (const auto& p : states.pairs) {
            products.push_back(uncertainty_product(p.wf, cfg.alpha));
            lowest = std::min(lowest, products.back());
        }
        // The discrete momentum underestimates Delta p by O((1 + alpha^2) h^2) for smooth states.
        const double allowance = 0.5 * (1 + cfg.alpha * cfg.alpha) * g.h() * g.h();
        checks.push_back({"heisenberg_bound", lowest, 0.5 - 1e-9 - allowance, false});
    }

    const fs::path dir = cfg.output_dir.empty() ? default_output_dir() : cfg.output_dir;
    std::vector<std::string> csv_names;
    if (cfg.formats.csv) {
        csv_names = emit_csv(states, dir);
        out.files.insert(out.files.end(), csv_names.begin(), csv_names.end());
    }
    if (cfg.formats.svg) {
        PlotOptions opt;
        opt.title = detail::system_title(cfg);
        if (cfg.system == System::Free) opt.legend_prefix = "k=" + format_param(cfg.k) + ", state ";
        std::vector<Part> parts{Part::Re};
        if (cfg.system != System::Box) parts.push_back(Part::Im);
        if (cfg.system == System::Harmonic) {
            const double half = 6.0 / std::sqrt(cfg.m * cfg.omega);
            opt.x_range = std::pair{-half, half};
            opt.description = "plot range x in [-6, 6]/sqrt(m omega) (six decay lengths); data grid [" +
                              format_param(g.x_min()) + ", " + format_param(g.x_max()) + "]";
            notes.push_back("oscillator plots show x in [-6, 6]/sqrt(m omega); the CSV data cover the full grid");
        }
        for (Part part : parts) {
            PlotOptions po = opt;
            po.title = (part == Part::Re ? "Re psi_n: " : "Im psi_n: ") + opt.title;
            const std::string name = "psi_" + to_string(part) + ".svg";
            emit_svg(states, part, dir / name, po);
            out.files.push_back(name);
        }
    }
    if (cfg.formats.json) out.files.push_back("report.json");

    json report;
    report["kind"] = "scenario";
    report["version"] = kReportVersion;
    if (!cfg.name.empty()) report["name"] = cfg.name;
    report["system"] = to_string(cfg.system);
    json p = {{"m", cfg.m}, {"alpha", cfg.alpha}};
    if (cfg.system == System::Box) p["L"] = cfg.L;
    if (cfg.system == System::Harmonic) p["omega"] = cfg.omega;
    if (cfg.system == System::Free) p["k"] = cfg.k;
    report["params"] = p;
    report["grid"] = {{"x_min", g.x_min()}, {"x_max", g.x_max()}, {"n_points", g.size()}, {"h", g.h()}};
    report["scheme"] = to_string(cfg.scheme);
    report["solver"] = to_string(solver);
    report["seed"] = cfg.seed;
    report["tol"] = cfg.tol;
    json jstates = json::array();
    for (std::size_t i = 0; i < states.size(); ++i) {
        const auto& pr = states.pairs[i];
        json js = {{"label", pr.label},
                   {"energy", pr.energy.value},
                   {"reference_energy", detail::reference_energy(cfg, pr.label)},
                   {"residual", states.residuals[i]}};
        if (i < products.size()) js["uncertainty_product"] = products[i];
        if (cfg.formats.csv) js["csv"] = csv_names[i];
        jstates.push_back(js);
    }
    report["states"] = jstates;
    json jchecks = json::array();
    for (const auto& c : checks) jchecks.push_back(to_json(c));
    report["invariants"] = jchecks;
    report["files"] = out.files;
    report["warnings"] = states.warnings;
    report["notes"] = notes;
    validate_report(report);

    if (cfg.formats.json) {
        detail::ensure_dir(dir);
        detail::write_file(dir / "report.json", report.dump(2) + "\n");
    }
    out.report = std::move(report);
    out.spectrum = std::move(states);
    return out;
}

// ---------------------------------------------------------------------------
// Batch

/// Process exit code for an exception escaping a pipeline.
inline int exit_code_for(const std::exception& e) {
    if (dynamic_cast<const ConfigError*>(&e) || dynamic_cast<const ConditionError*>(&e) ||
        dynamic_cast<const DomainError*>(&e) || dynamic_cast<const OverflowError*>(&e) ||
        dynamic_cast<const SymmetryError*>(&e))
        return 2;
    if (dynamic_cast<const ConvergenceError*>(&e)) return 3;
    if (dynamic_cast<const IoError*>(&e)) return 4;
    return 1;
}

struct BatchResult {
    json report;
    int exit_code = 0;
};

/// Runs every scenario in `batch["scenarios"]` concurrently, each in
/// out/<name>/, and merges the reports in name order.
inline BatchResult run_batch(const json& batch, const fs::path& out, const ScenarioConfig& defaults = {}) {
    if (!batch.is_object() || !batch.contains("scenarios") || !batch["scenarios"].is_array())
        throw ConfigError("batch config needs a \"scenarios\" array");
    for (const auto& [key, v] : batch.items())
        if (key != "scenarios" && key != "out") throw ConfigError("unknown batch key '" + key + "'");

    std::vector<ScenarioConfig> configs;
    std::set<std::string> names;
    for (const auto& item : batch["scenarios"]) {
        ScenarioConfig cfg = defaults;
        apply_json(cfg, item);
        if (cfg.name.empty()) throw ConfigError("every batch scenario needs a name");
        if (cfg.name.find_first_of("/\\") != std::string::npos || cfg.name == "." || cfg.name == "..")
            throw ConfigError("scenario name '" + cfg.name + "' is not a plain directory name");
        if (!names.insert(cfg.name).second) throw ConfigError("duplicate scenario name '" + cfg.name + "'");
        cfg.output_dir = out / cfg.name;
        cfg.validate();
        configs.push_back(std::move(cfg));
    }
    std::sort(configs.begin(), configs.end(), [](const auto& a, const auto& b) { return a.name < b.name; });

    std::vector<std::future<ScenarioResult>> running;
    for (const auto& cfg : configs) running.push_back(std::async(std::launch::async, run_scenario, cfg));

    BatchResult result;
    json entries = json::array();
    for (std::size_t i = 0; i < configs.size(); ++i) {
        json entry = {{"name", configs[i].name}};
        try {
            entry["status"] = "ok";
            entry["exit_code"] = 0;
            entry["report"] = running[i].get().report;
        } catch (const std::exception& e) {
            const int code = exit_code_for(e);
            entry["status"] = "error";
            entry["exit_code"] = code;
            entry["error"] = e.what();
            if (result.exit_code == 0) result.exit_code = code;
        }
        entries.push_back(std::move(entry));
    }
    result.report = {{"kind", "batch"}, {"version", kReportVersion}, {"scenarios", entries}, {"notes", {kAlphaNote}}};
    validate_report(result.report);
    detail::ensure_dir(out);
    detail::write_file(out / "batch_report.json", result.report.dump(2) + "\n");
    return result;
}

}  // namespace lvse
