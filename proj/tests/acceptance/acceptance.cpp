// Acceptance checks 1-10. Prints one PASS/FAIL line per criterion.
//
//   acceptance          run every criterion
//   acceptance 3 7      run the listed criteria
//
// Exit status is 0 only if every selected criterion passes.

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "lvse/lvse.hpp"

using namespace lvse;

namespace {

struct Outcome {
    bool pass = true;
    std::string detail;

    void require(bool ok, const std::string& what) {
        pass = pass && ok;
        if (!detail.empty()) detail += "; ";
        detail += what + (ok ? "" : " [FAIL]");
    }
};

std::string num(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3g", v);
    return buf;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

Spectrum lowest(const Grid& g, const ModelParams& p, Scheme scheme, std::size_t k) {
    SolveOptions opts;
    opts.k = k;
    return eigen_lowest(hamiltonian(g, p, scheme), opts);
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

fs::path scratch(const std::string& name) {
    const fs::path p = fs::temp_directory_path() / ("lvse_acceptance_" + name);
    fs::remove_all(p);
    return p;
}

bool checks_pass(const SuiteResult& s, Outcome& o) {
    for (const auto& c : s.checks) o.require(c.pass(), c.name + " " + num(c.value) + (c.upper ? " <= " : " >= ") + num(c.bound));
    return s.pass();
}

Outcome box_energies() {
    Outcome o;
    const auto t0 = std::chrono::steady_clock::now();
    const auto s = lowest(make_grid(0, 10, 2001), ModelParams::box(1, 0.1, 10), Scheme::GaugeExact, 4);
    const double elapsed = seconds_since(t0);
    double worst = 0.0;
    for (int n = 1; n <= 4; ++n) {
        const double exact = n * n * M_PI * M_PI / 200.0;
        worst = std::max(worst, std::abs(s.pairs[n - 1].energy.value - exact) / exact);
    }
    o.require(worst <= 1e-4, "max relative error " + num(worst) + " <= 1e-4");
    o.require(elapsed < 5.0, "runtime " + num(elapsed) + " s < 5 s");
    return o;
}

Outcome oscillator_energies() {
    Outcome o;
    const auto t0 = std::chrono::steady_clock::now();
    const auto s = lowest(make_grid(-12, 12, 2401), ModelParams::harmonic(1, 0.1, 1), Scheme::GaugeExact, 3);
    const double elapsed = seconds_since(t0);
    for (int n = 0; n < 3; ++n) {
        const double err = std::abs(s.pairs[n].energy.value - (n + 0.5));
        o.require(err <= 1e-5, "|E" + std::to_string(n) + " - " + num(n + 0.5) + "| = " + num(err) + " <= 1e-5");
    }
    o.require(elapsed < 5.0, "runtime " + num(elapsed) + " s < 5 s");
    return o;
}

Outcome alpha_invariance() {
    Outcome o;
    struct Case {
        Grid g;
        ModelParams p;
    };
    const std::vector<Case> cases{{make_grid(0, 10, 2001), ModelParams::box(1, 0, 10)},
                                  {make_grid(-12, 12, 2401), ModelParams::harmonic(1, 0, 1)}};
    double worst = 0.0;
    for (const auto& c : cases) {
        std::vector<Spectrum> spectra;
        for (double alpha : {0.0, 0.1, 1.0}) spectra.push_back(lowest(c.g, c.p.with_alpha(alpha), Scheme::GaugeExact, 4));
        for (std::size_t a = 0; a < spectra.size(); ++a)
            for (std::size_t b = a + 1; b < spectra.size(); ++b)
                for (std::size_t n = 0; n < 4; ++n) {
                    const double ea = spectra[a].pairs[n].energy.value, eb = spectra[b].pairs[n].energy.value;
                    worst = std::max(worst, std::abs(ea - eb) / std::abs(eb));
                }
    }
    o.require(worst <= 1e-12, "gauge-exact pairwise relative spread " + num(worst) + " <= 1e-12");

    const auto grids = halving_grids(0, 10, 201, 3);
    const auto study = convergence_study(measures::alpha_deviation(ModelParams::box(1, 0.1, 10), Scheme::NaiveStencil, 0), grids);
    o.require(study.order >= 1.8 && study.order <= 2.2, "naive deviation order " + num(study.order) + " in [1.8, 2.2]");
    return o;
}

Outcome gauge_equivalence() {
    Outcome o;
    VerifyConfig cfg;
    for (System system : {System::Box, System::Harmonic}) {
        cfg.system = system;
        checks_pass(run_suite("gauge", cfg), o);
    }
    // Quartering is checked over every halving, not just the finest pair.
    const auto grids = halving_grids(0, 10, 201, 3);
    const auto s = convergence_study(measures::numeric_gauge_residual(ModelParams::box(1, 0.1, 10), Scheme::NaiveStencil, 0), grids);
    for (std::size_t i = 0; i + 1 < s.errors.size(); ++i) {
        const double ratio = s.errors[i] / s.errors[i + 1];
        o.require(ratio >= 3.5 && ratio <= 4.5, "naive residual ratio " + num(ratio) + " in [3.5, 4.5]");
    }
    return o;
}

Outcome parity() {
    Outcome o;
    for (double alpha : {0.1, 0.0}) {
        VerifyConfig cfg;
        cfg.alpha = alpha;
        for (System system : {System::Harmonic, System::Free}) {
            cfg.system = system;
            const auto s = run_suite("parity", cfg);
            for (const auto& c : s.checks)
                o.require(c.pass(), to_string(system) + " alpha=" + num(alpha) + " " + c.name + " " + num(c.value));
        }
    }
    return o;
}

Outcome ladder_algebra() {
    Outcome o;
    checks_pass(run_suite("commutator", VerifyConfig{}), o);
    return o;
}

Outcome uncertainty() {
    Outcome o;
    checks_pass(run_suite("uncertainty", VerifyConfig{}), o);
    return o;
}

Outcome cross_solver() {
    Outcome o;
    checks_pass(run_suite("cross-solver", VerifyConfig{}), o);
    return o;
}

Outcome figures() {
    Outcome o;
    ScenarioConfig box;
    box.system = System::Box;
    box.formats = parse_formats("csv,svg");
    ScenarioConfig osc = box;
    osc.system = System::Harmonic;

    for (const auto& [name, cfg0] : {std::pair{"fig1", box}, std::pair{"fig23", osc}}) {
        auto a = cfg0, b = cfg0;
        a.output_dir = scratch(std::string(name) + "_a");
        b.output_dir = scratch(std::string(name) + "_b");
        const auto ra = run_scenario(a);
        const auto rb = run_scenario(b);
        bool csv = false, svg = false, same = ra.files == rb.files;
        for (const auto& f : ra.files) {
            csv = csv || fs::path(f).extension() == ".csv";
            svg = svg || fs::path(f).extension() == ".svg";
            same = same && slurp(a.output_dir / f) == slurp(b.output_dir / f);
        }
        o.require(csv && svg, std::string(name) + " emits csv and svg");
        o.require(same, std::string(name) + " byte-identical across runs");
        if (cfg0.system == System::Harmonic) {
            const bool im = std::find(ra.files.begin(), ra.files.end(), "psi_im.svg") != ra.files.end();
            o.require(im, "fig23 emits an imaginary-part plot");
        }
    }

    const fs::path golden = fs::path(LVSE_SOURCE_DIR) / "tests" / "golden";
    auto gbox = box;
    gbox.solver = Solver::Analytic;
    gbox.n_points = 201;
    gbox.formats = parse_formats("csv");
    auto gosc = osc;
    gosc.n_points = 241;
    gosc.formats = parse_formats("csv");
    bool golden_ok = true;
    for (auto& [dir, cfg] : {std::pair{"box_analytic", gbox}, std::pair{"harmonic_tridiag", gosc}}) {
        auto run = cfg;
        run.output_dir = scratch(std::string("golden_") + dir);
        for (const auto& f : run_scenario(run).files)
            golden_ok = golden_ok && slurp(run.output_dir / f) == slurp(golden / dir / f);
    }
    o.require(golden_ok, "golden csv files match");

    bool iff = true;
    for (double alpha : {0.0, 0.1})
        for (auto cfg : {box, osc})
            for (auto solver : {Solver::Analytic, Solver::Tridiag}) {
                cfg.alpha = alpha;
                cfg.solver = solver;
                cfg.formats = parse_formats("csv");
                cfg.output_dir = scratch("iff");
                const auto r = run_scenario(cfg);
                for (const auto& p : r.spectrum.pairs) {
                    bool any = false;
                    for (const auto& z : p.wf.amp) any = any || z.imag() != 0.0;
                    iff = iff && any == (alpha != 0.0);
                }
            }
    o.require(iff, "imaginary parts zero iff alpha = 0");
    return o;
}

Outcome free_particle() {
    Outcome o;
    const auto grids = halving_grids(0, 20, 401, 4);
    for (Scheme scheme : {Scheme::GaugeExact, Scheme::NaiveStencil}) {
        const auto s = convergence_study(measures::free_particle_residual(1, 0.1, 1, scheme), grids);
        o.require(s.order >= 1.8 && s.order <= 2.2, to_string(scheme) + " residual order " + num(s.order) + " in [1.8, 2.2]");
    }
    bool rejected = false;
    try {
        analytic::free_particle(0.05, 0.1, 1.0, 0.0, make_grid(0, 1, 11));
    } catch (const ConditionError&) {
        rejected = true;
    }
    o.require(rejected, "k = 0.05, alpha = 0.1 raises ConditionError");
    return o;
}

const std::vector<std::pair<const char*, std::function<Outcome()>>> kCriteria{
    {"box energies", box_energies},
    {"oscillator energies", oscillator_energies},
    {"alpha invariance of the spectrum", alpha_invariance},
    {"gauge equivalence", gauge_equivalence},
    {"parity relation", parity},
    {"ladder algebra", ladder_algebra},
    {"uncertainty preservation", uncertainty},
    {"solver cross-check", cross_solver},
    {"figure reproduction", figures},
    {"free-particle residual", free_particle},
};

}  // namespace

int main(int argc, char** argv) {
    std::vector<int> selected;
    for (int i = 1; i < argc; ++i) {
        const int c = std::atoi(argv[i]);
        if (c < 1 || c > static_cast<int>(kCriteria.size())) {
            std::fprintf(stderr, "acceptance: no criterion '%s'\n", argv[i]);
            return 2;
        }
        selected.push_back(c);
    }
    if (selected.empty())
        for (int c = 1; c <= static_cast<int>(kCriteria.size()); ++c) selected.push_back(c);

    bool all = true;
    for (int c : selected) {
        const auto& [title, run] = kCriteria[c - 1];
        Outcome o;
        try {
            o = run();
        } catch (const std::exception& e) {
            o.pass = false;
            o.detail = std::string("exception: ") + e.what();
        }
        std::printf("%s %2d %s: %s\n", o.pass ? "PASS" : "FAIL", c, title, o.detail.c_str());
        std::fflush(stdout);
        all = all && o.pass;
    }
    return all ? 0 : 1;
}
