// lvse: bound states of the modified-momentum Schrodinger equation.
//
//   lvse box      --alpha 0.1 --L 10 --n-states 4 --solver analytic --formats csv,svg
//   lvse harmonic --alpha 0.1 --m 1 --omega 1 --n-states 3 --formats svg
//   lvse free     --k 1 --alpha 0.1
//   lvse verify   --suite parity --alpha 0.1
//   lvse batch    --config scenarios.json --out runs
//
// Exit codes: 0 success, 1 failed verification or internal error, 2 invalid
// configuration, 3 solver did not converge, 4 file I/O failure.

#include <cstdio>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "lvse/lvse.hpp"

namespace {

struct ScenarioFlags {
    double alpha = 0.1, m = 1, omega = 1, L = 10, k = 1, tol = 1e-10, x_min = 0, x_max = 0;
    std::size_t n_points = 0, max_iter = 0;
    int n_states = 0;
    std::string scheme, solver, formats, out, config;
    std::uint64_t seed = 42;
};

struct Options {
    std::vector<std::pair<std::string, CLI::Option*>> opts;
    CLI::Option* get(const std::string& name) const {
        for (const auto& [n, o] : opts)
            if (n == name) return o;
        return nullptr;
    }
    bool given(const std::string& name) const {
        const auto* o = get(name);
        return o && o->count() > 0;
    }
};

Options add_scenario_flags(CLI::App* app, ScenarioFlags& f) {
    Options o;
    o.opts.push_back({"alpha", app->add_option("--alpha", f.alpha, "background field alpha (default 0.1)")});
    o.opts.push_back({"m", app->add_option("--m", f.m, "mass (default 1)")});
    o.opts.push_back({"omega", app->add_option("--omega", f.omega, "oscillator frequency (harmonic, default 1)")});
    o.opts.push_back({"L", app->add_option("--L", f.L, "box width (box, default 10)")});
    o.opts.push_back({"k", app->add_option("--k", f.k, "wavenumber (free, default 1)")});
    o.opts.push_back({"n_points", app->add_option("--n-points", f.n_points, "grid points (default 2001)")});
    o.opts.push_back({"n_states", app->add_option("--n-states", f.n_states, "number of states")});
    o.opts.push_back({"x_min", app->add_option("--x-min", f.x_min, "left end of the grid (harmonic, free)")});
    o.opts.push_back({"x_max", app->add_option("--x-max", f.x_max, "right end of the grid (harmonic, free)")});
    o.opts.push_back({"scheme", app->add_option("--scheme", f.scheme, "naive | gauge-exact (default gauge-exact)")});
    o.opts.push_back({"solver", app->add_option("--solver", f.solver, "tridiag | rq-descent | analytic")});
    o.opts.push_back({"formats", app->add_option("--formats", f.formats, "comma list of csv,json,svg (default all)")});
    o.opts.push_back({"out", app->add_option("--out", f.out, "output directory (default $LVSE_OUT or lvse_out)")});
    o.opts.push_back({"seed", app->add_option("--seed", f.seed, "seed for start vectors (default 42)")});
    o.opts.push_back({"tol", app->add_option("--tol", f.tol, "eigenpair residual tolerance (default 1e-10)")});
    o.opts.push_back({"max_iter", app->add_option("--max-iter", f.max_iter, "iteration limit (default 10 * n-points)")});
    o.opts.push_back({"config", app->add_option("--config", f.config, "JSON config file; flags override its values")});
    return o;
}

lvse::ScenarioConfig scenario_from_flags(lvse::System system, const ScenarioFlags& f, const Options& o) {
    lvse::ScenarioConfig cfg;
    cfg.system = system;
    if (o.given("config")) {
        const auto j = lvse::read_json_file(f.config);
        if (j.contains("system") && j["system"] != lvse::to_string(system))
            throw lvse::ConfigError("config file system '" + j["system"].dump() + "' contradicts subcommand " +
                                    lvse::to_string(system));
        lvse::apply_json(cfg, j);
    }
    const auto reject = [&](const char* flag, bool applies) {
        if (o.given(flag) && !applies)
            throw lvse::ConfigError(std::string("--") + flag + " does not apply to " + lvse::to_string(system));
    };
    reject("L", system == lvse::System::Box);
    reject("omega", system == lvse::System::Harmonic);
    reject("k", system == lvse::System::Free);

    if (o.given("alpha")) cfg.alpha = f.alpha;
    if (o.given("m")) cfg.m = f.m;
    if (o.given("omega")) cfg.omega = f.omega;
    if (o.given("L")) cfg.L = f.L;
    if (o.given("k")) cfg.k = f.k;
    if (o.given("n_points")) cfg.n_points = f.n_points;
    if (o.given("n_states")) cfg.n_states = f.n_states;
    if (o.given("x_min")) cfg.x_min = f.x_min;
    if (o.given("x_max")) cfg.x_max = f.x_max;
    if (o.given("scheme")) cfg.scheme = lvse::parse_scheme(f.scheme);
    if (o.given("solver")) cfg.solver = lvse::parse_solver(f.solver);
    if (o.given("formats")) cfg.formats = lvse::parse_formats(f.formats);
    if (o.given("out")) cfg.output_dir = f.out;
    if (o.given("seed")) cfg.seed = f.seed;
    if (o.given("tol")) cfg.tol = f.tol;
    if (o.given("max_iter")) cfg.max_iter = f.max_iter;
    if (cfg.output_dir.empty()) cfg.output_dir = lvse::default_output_dir();
    return cfg;
}

void print_scenario(const lvse::ScenarioResult& r, const lvse::ScenarioConfig& cfg) {
    const auto& rep = r.report;
    std::printf("%s  scheme=%s  solver=%s  grid=[%g, %g] n=%zu\n", rep["system"].get<std::string>().c_str(),
                rep["scheme"].get<std::string>().c_str(), rep["solver"].get<std::string>().c_str(),
                rep["grid"]["x_min"].get<double>(), rep["grid"]["x_max"].get<double>(),
                rep["grid"]["n_points"].get<std::size_t>());
    for (const auto& s : rep["states"])
        std::printf("  n=%-3d E=%.12g  (reference %.12g)  residual=%.3g\n", s["label"].get<int>(),
                    s["energy"].get<double>(), s["reference_energy"].get<double>(), s["residual"].get<double>());
    for (const auto& c : rep["invariants"])
        std::printf("  [%s] %s = %.3g %s %.3g\n", c["pass"].get<bool>() ? "ok" : "FAIL",
                    c["name"].get<std::string>().c_str(), c["value"].is_number() ? c["value"].get<double>() : NAN,
                    c["relation"].get<std::string>().c_str(), c["bound"].get<double>());
    for (const auto& w : rep["warnings"]) std::printf("  warning: %s\n", w.get<std::string>().c_str());
    if (!r.files.empty()) std::printf("  wrote %zu file(s) to %s\n", r.files.size(), cfg.output_dir.string().c_str());
}

std::vector<std::string> split_list(const std::vector<std::string>& items) {
    std::vector<std::string> out;
    for (const auto& item : items) {
        std::size_t start = 0;
        while (start <= item.size()) {
            const auto end = std::min(item.find(',', start), item.size());
            if (end > start) out.push_back(item.substr(start, end - start));
            start = end + 1;
        }
    }
    return out;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Bound states of the Schrodinger equation with momentum p = -i(d/dx + i alpha)"};
    app.require_subcommand(1);

    ScenarioFlags box_f, ho_f, free_f;
    auto* box = app.add_subcommand("box", "particle in a box on [0, L]");
    auto* harmonic = app.add_subcommand("harmonic", "harmonic oscillator");
    auto* free = app.add_subcommand("free", "free particle plane wave");
    const Options box_o = add_scenario_flags(box, box_f);
    const Options ho_o = add_scenario_flags(harmonic, ho_f);
    const Options free_o = add_scenario_flags(free, free_f);

    auto* verify = app.add_subcommand("verify", "run verification suites");
    std::vector<std::string> suites;
    std::string v_system, v_scheme, v_out;
    lvse::VerifyConfig vcfg;
    verify->add_option("--suite", suites, "gauge, parity, commutator, uncertainty, convergence, cross-solver (default all)");
    verify->add_option("--system", v_system, "box | harmonic | free (suite-dependent default)");
    verify->add_option("--scheme", v_scheme, "naive | gauge-exact (default gauge-exact)");
    verify->add_option("--alpha", vcfg.alpha, "background field alpha (default 0.1)");
    verify->add_option("--m", vcfg.m, "mass (default 1)");
    verify->add_option("--omega", vcfg.omega, "oscillator frequency (default 1)");
    verify->add_option("--L", vcfg.L, "box width (default 10)");
    verify->add_option("--seed", vcfg.seed, "seed for random directions (default 42)");
    verify->add_option("--out", v_out, "write verify_report.json into this directory");

    auto* batch = app.add_subcommand("batch", "run the scenarios of a JSON batch file concurrently");
    std::string b_config, b_out;
    batch->add_option("--config", b_config, "batch file: {\"scenarios\": [{\"name\": ..., \"system\": ...}, ...]}")
        ->required();
    batch->add_option("--out", b_out, "output root; each scenario writes to <out>/<name>");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (box->parsed() || harmonic->parsed() || free->parsed()) {
            const lvse::System system = box->parsed()        ? lvse::System::Box
                                        : harmonic->parsed() ? lvse::System::Harmonic
                                                             : lvse::System::Free;
            const auto& f = box->parsed() ? box_f : harmonic->parsed() ? ho_f : free_f;
            const auto& o = box->parsed() ? box_o : harmonic->parsed() ? ho_o : free_o;
            const auto cfg = scenario_from_flags(system, f, o);
            const auto result = lvse::run_scenario(cfg);
            print_scenario(result, cfg);
            return 0;
        }
        if (verify->parsed()) {
            vcfg.suites = split_list(suites);
            if (!v_system.empty()) vcfg.system = lvse::parse_system(v_system);
            if (!v_scheme.empty()) vcfg.scheme = lvse::parse_scheme(v_scheme);
            const auto result = lvse::run_verify(vcfg);
            for (const auto& s : result.report["suites"]) {
                std::printf("%s %s\n", s["pass"].get<bool>() ? "PASS" : "FAIL", s["name"].get<std::string>().c_str());
                for (const auto& c : s["checks"])
                    std::printf("  [%s] %s = %.6g %s %.3g\n", c["pass"].get<bool>() ? "ok" : "FAIL",
                                c["name"].get<std::string>().c_str(),
                                c["value"].is_number() ? c["value"].get<double>() : NAN,
                                c["relation"].get<std::string>().c_str(), c["bound"].get<double>());
            }
            if (!v_out.empty()) {
                lvse::detail::ensure_dir(v_out);
                lvse::detail::write_file(lvse::fs::path(v_out) / "verify_report.json", result.report.dump(2) + "\n");
            }
            return result.pass ? 0 : 1;
        }
        const auto j = lvse::read_json_file(b_config);
        lvse::fs::path out = b_out;
        if (out.empty() && j.contains("out") && j["out"].is_string()) out = j["out"].get<std::string>();
        if (out.empty()) out = lvse::default_output_dir();
        const auto result = lvse::run_batch(j, out);
        for (const auto& s : result.report["scenarios"]) {
            std::printf("%-20s %s", s["name"].get<std::string>().c_str(), s["status"].get<std::string>().c_str());
            if (s.contains("error")) std::printf(" (exit %d): %s", s["exit_code"].get<int>(), s["error"].get<std::string>().c_str());
            std::printf("\n");
        }
        std::printf("batch report: %s\n", (out / "batch_report.json").string().c_str());
        return result.exit_code;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "lvse: error: %s\n", e.what());
        return lvse::exit_code_for(e);
    }
}
