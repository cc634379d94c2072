#pragma once

// Verification suites behind the `verify` subcommand. Each suite measures a
// set of residuals or convergence orders and records them as checks.

#include <random>
#include <string>
#include <vector>

#include "lvse/scenario.hpp"

namespace lvse {

inline const std::vector<std::string>& verify_suite_names() {
    static const std::vector<std::string> names{"gauge",       "parity",      "commutator",
                                                "uncertainty", "convergence", "cross-solver"};
    return names;
}

struct VerifyConfig {
    std::vector<std::string> suites;  // empty means all
    std::optional<System> system;
    Scheme scheme = Scheme::GaugeExact;
    double alpha = 0.1;
    double m = 1.0;
    double omega = 1.0;
    double L = 10.0;
    std::uint64_t seed = 42;
};

struct SuiteResult {
    std::string name;
    std::vector<Check> checks;
    std::vector<std::string> details;

    bool pass() const {
        return std::all_of(checks.begin(), checks.end(), [](const Check& c) { return c.pass(); });
    }
};

namespace detail {

inline void check_order(SuiteResult& r, const std::string& name, const ConvergenceStudy& s) {
    r.checks.push_back({name + "_order_min", s.order, 1.8, false});
    r.checks.push_back({name + "_order_max", s.order, 2.2, true});
}

inline ModelParams verify_params(const VerifyConfig& cfg, System system) {
    return system == System::Box ? ModelParams::box(cfg.m, cfg.alpha, cfg.L)
                                 : ModelParams::harmonic(cfg.m, cfg.alpha, cfg.omega);
}

inline std::vector<Grid> verify_grids(const VerifyConfig& cfg, System system, std::size_t n0, std::size_t count) {
    if (system == System::Box) return halving_grids(0.0, cfg.L, n0, count);
    const double half = 10.0 / std::sqrt(cfg.m * cfg.omega);
    return halving_grids(-half, half, n0, count);
}

inline SuiteResult suite_gauge(const VerifyConfig& cfg) {
    SuiteResult r{"gauge", {}, {}};
    const System system = cfg.system.value_or(System::Harmonic);
    if (system == System::Free) throw ConfigError("the gauge suite needs a bound-state system (box or harmonic)");
    const ModelParams params = verify_params(cfg, system);
    const Grid g = system == System::Box ? make_grid(0.0, cfg.L, 1001)
                                         : make_grid(-8 / std::sqrt(cfg.m * cfg.omega), 8 / std::sqrt(cfg.m * cfg.omega), 801);
    double analytic_worst = 0.0;
    for (int n = 0; n < 3; ++n) {
        const auto a = system == System::Box ? analytic::box_state(n + 1, cfg.L, cfg.alpha, g)
                                             : analytic::ho_state(n, cfg.m, cfg.omega, cfg.alpha, g);
        const auto z = system == System::Box ? analytic::box_state(n + 1, cfg.L, 0.0, g)
                                             : analytic::ho_state(n, cfg.m, cfg.omega, 0.0, g);
        analytic_worst = std::max(analytic_worst, gauge_residual(a, z, cfg.alpha));
    }
    r.checks.push_back({"analytic_gauge_residual", analytic_worst, 1e-12, true});

    if (cfg.scheme == Scheme::GaugeExact) {
        double worst = 0.0;
        for (int level = 0; level < 3; ++level)
            worst = std::max(worst, measures::numeric_gauge_residual(params, cfg.scheme, level)(g));
        r.checks.push_back({"numeric_gauge_residual", worst, 1e-9, true});
    } else {
        const auto grids = verify_grids(cfg, System::Box, 201, 3);
        const auto study =
            convergence_study(measures::numeric_gauge_residual(ModelParams::box(cfg.m, cfg.alpha, cfg.L), cfg.scheme, 0), grids);
        check_order(r, "naive_gauge_residual", study);
        const double ratio = study.errors[1] / study.errors[2];
        r.checks.push_back({"naive_gauge_ratio_min", ratio, 3.5, false});
        r.checks.push_back({"naive_gauge_ratio_max", ratio, 4.5, true});
    }
    return r;
}

inline SuiteResult suite_parity(const VerifyConfig& cfg) {
    SuiteResult r{"parity", {}, {}};
    const System system = cfg.system.value_or(System::Harmonic);
    if (system == System::Box)
        throw ConfigError("the parity suite needs a potential symmetric about x = 0 (harmonic or free)");
    const Grid g = make_grid(-8, 8, 801);
    const auto params = system == System::Harmonic ? ModelParams::harmonic(cfg.m, cfg.alpha, cfg.omega)
                                                   : ModelParams::free(cfg.m, cfg.alpha);
    for (Scheme scheme : {Scheme::NaiveStencil, Scheme::GaugeExact}) {
        const auto rep = parity_relation_residual(g, params, scheme);
        r.checks.push_back({"relation_residual_" + to_string(scheme), rep.relation_residual, 0.0, true});
        if (cfg.alpha == 0.0) {
            r.checks.push_back({"commutator_norm_" + to_string(scheme), rep.commutator_norm, 0.0, true});
        } else {
            const double floor = std::nextafter(0.0, 1.0);
            r.checks.push_back({"commutator_norm_" + to_string(scheme), rep.commutator_norm, floor, false});
        }
    }
    return r;
}

inline SuiteResult suite_commutator(const VerifyConfig& cfg) {
    SuiteResult r{"commutator", {}, {}};
    const double m = cfg.m, w = cfg.omega;
    const double width = 1.0 / std::sqrt(m * w);
    const auto grids = halving_grids(-10 * width, 10 * width, 201, 3);
    const auto comm = convergence_study(measures::commutator_residual(m, w, cfg.alpha, width), grids);
    for (std::size_t i = 0; i + 1 < grids.size(); ++i) {
        const double ratio = comm.errors[i] / comm.errors[i + 1];
        r.checks.push_back({"commutator_ratio_" + std::to_string(i) + "_min", ratio, 3.5, false});
        r.checks.push_back({"commutator_ratio_" + std::to_string(i) + "_max", ratio, 4.5, true});
    }
    for (std::size_t i = 0; i < grids.size(); ++i)
        r.checks.push_back({"commutator_residual_h" + std::to_string(i), comm.errors[i], comm.h[i] * comm.h[i], true});
    const auto ann = convergence_study(measures::annihilation_residual(m, w, cfg.alpha), grids);
    for (std::size_t i = 0; i < grids.size(); ++i)
        r.checks.push_back({"annihilation_residual_h" + std::to_string(i), ann.errors[i], 0.5 * ann.h[i] * ann.h[i], true});

    const Grid g = make_grid(-10, 10, 2001);
    const auto ladder_psi1 = analytic::ho_state_via_ladder(1, 1, 1, cfg.alpha, g);
    const auto hermite_psi1 = analytic::ho_state(1, 1, 1, cfg.alpha, g);
    double worst = 0.0;
    for (std::size_t j = 0; j < g.size(); ++j) worst = std::max(worst, std::abs(ladder_psi1[j] - hermite_psi1[j]));
    r.checks.push_back({"ladder_psi1_max_error", worst, 1e-4, true});
    return r;
}

/// Fine grid on which the discrete momentum resolves Delta p well enough for
/// the 1e-8 and 1e-9 uncertainty tolerances (h = 5e-5).
inline constexpr std::size_t kUncertaintyPoints = 400001;

inline SuiteResult suite_uncertainty(const VerifyConfig& cfg) {
    SuiteResult r{"uncertainty", {}, {}};
    const double s = 1.0 / std::sqrt(cfg.m * cfg.omega);
    const Grid g = make_grid(-10 * s, 10 * s, kUncertaintyPoints);
    const double p0 = uncertainty_product(analytic::ho_ground(cfg.m, cfg.omega, 0.0, g), 0.0);
    const double pa = uncertainty_product(analytic::ho_ground(cfg.m, cfg.omega, cfg.alpha, g), cfg.alpha);
    r.checks.push_back({"ground_product_error", std::abs(p0 - 0.5), 1e-6, true});
    r.checks.push_back({"ground_product_alpha_shift", std::abs(pa - p0), 1e-8, true});

    double lowest = INFINITY;
    for (int n = 0; n < 3; ++n)
        lowest = std::min(lowest, uncertainty_product(analytic::ho_state(n, cfg.m, cfg.omega, cfg.alpha, g), cfg.alpha));
    const Grid gb = make_grid(0.0, cfg.L, 200001);
    for (int n = 1; n <= 4; ++n)
        lowest = std::min(lowest, uncertainty_product(analytic::box_state(n, cfg.L, cfg.alpha, gb), cfg.alpha));
    r.checks.push_back({"bound_state_min_product", lowest, 0.5 - 1e-9, false});
    r.details.push_back("products on h = " + format_param(g.h()) + " (oscillator) and h = " + format_param(gb.h()) +
                        " (box) grids");
    return r;
}

inline SuiteResult suite_convergence(const VerifyConfig& cfg) {
    SuiteResult r{"convergence", {}, {}};
    const System system = cfg.system.value_or(System::Box);
    if (system == System::Free) throw ConfigError("the convergence suite needs a bound-state system (box or harmonic)");
    const ModelParams params = verify_params(cfg, system);
    const auto grids = verify_grids(cfg, system, 201, 3);
    check_order(r, "eigenvalue_error", convergence_study(measures::eigenvalue_error(params, cfg.scheme, 0), grids));
    if (cfg.alpha != 0.0) {
        if (cfg.scheme == Scheme::NaiveStencil) {
            check_order(r, "alpha_deviation",
                        convergence_study(measures::alpha_deviation(params, cfg.scheme, 0), grids));
        } else {
            double worst = 0.0;
            for (const auto& g : grids) worst = std::max(worst, measures::alpha_deviation(params, cfg.scheme, 0)(g));
            r.checks.push_back({"alpha_deviation_exact", worst, kConvergenceFloor, true});
        }
    }
    return r;
}

inline SuiteResult suite_cross_solver(const VerifyConfig& cfg) {
    SuiteResult r{"cross-solver", {}, {}};
    SolveOptions opts;
    opts.seed = cfg.seed;
    opts.max_iter = 2000000;
    for (System system : {System::Box, System::Harmonic}) {
        ScenarioConfig sc;
        sc.system = system;
        sc.m = cfg.m;
        sc.alpha = cfg.alpha;
        sc.omega = cfg.omega;
        sc.L = cfg.L;
        const double s = 1.0 / std::sqrt(cfg.m * cfg.omega);
        const Grid g = system == System::Box ? make_grid(0.0, cfg.L, 101) : make_grid(-6 * s, 6 * s, 121);
        const auto op = hamiltonian(g, sc.params(), cfg.scheme);
        const auto rq = rq_descent(op, detail::descent_seed(sc, g), opts);
        const auto tri = eigen_lowest(op, SolveOptions{});
        r.checks.push_back({"energy_difference_" + to_string(system),
                            std::abs(rq.energy.value - tri.pairs[0].energy.value), 1e-8, true});
    }

    // Gradient against central differences along random directions.
    const double s = 1.0 / std::sqrt(cfg.m * cfg.omega);
    const Grid g = make_grid(-6 * s, 6 * s, 121);
    const auto op = hamiltonian(g, ModelParams::harmonic(cfg.m, cfg.alpha, cfg.omega), cfg.scheme);
    const auto rows = interior(measures::gaussian(g, 1.2 * s, 0.4 * s));
    const auto grad = rq_gradient(op, rows);
    std::mt19937_64 gen(cfg.seed);
    std::normal_distribution<double> normal;
    double worst = 0.0;
    for (int trial = 0; trial < 5; ++trial) {
        std::vector<cplx> d(rows.size());
        for (auto& z : d) z = cplx(normal(gen), normal(gen));
        const double scale = detail::dot_norm(rows) / detail::dot_norm(d);
        for (auto& z : d) z *= scale;
        const double eps = 1e-6;
        std::vector<cplx> plus(rows), minus(rows);
        for (std::size_t j = 0; j < rows.size(); ++j) {
            plus[j] += eps * d[j];
            minus[j] -= eps * d[j];
        }
        const double fd = (rayleigh_quotient(op, embed(op, plus)) - rayleigh_quotient(op, embed(op, minus))) / (2 * eps);
        double directional = 0.0;
        for (std::size_t j = 0; j < rows.size(); ++j) directional += std::real(std::conj(grad[j]) * d[j]);
        worst = std::max(worst, std::abs(fd - directional) / std::abs(directional));
    }
    r.checks.push_back({"gradient_fd_relative_error", worst, 1e-6, true});
    return r;
}

}  // namespace detail

inline SuiteResult run_suite(const std::string& name, const VerifyConfig& cfg) {
    if (name == "gauge") return detail::suite_gauge(cfg);
    if (name == "parity") return detail::suite_parity(cfg);
    if (name == "commutator") return detail::suite_commutator(cfg);
    if (name == "uncertainty") return detail::suite_uncertainty(cfg);
    if (name == "convergence") return detail::suite_convergence(cfg);
    if (name == "cross-solver") return detail::suite_cross_solver(cfg);
    throw ConfigError("unknown verify suite '" + name + "'");
}

struct VerifyResult {
    json report;
    bool pass = true;
};

inline VerifyResult run_verify(const VerifyConfig& cfg) {
    if (!(cfg.m > 0.0) || !(cfg.omega > 0.0) || !(cfg.L > 0.0) || !std::isfinite(cfg.alpha))
        throw ConfigError("verify needs m, omega, L > 0 and a finite alpha");
    std::vector<std::string> names = cfg.suites.empty() ? verify_suite_names() : cfg.suites;
    for (const auto& n : names)
        if (std::find(verify_suite_names().begin(), verify_suite_names().end(), n) == verify_suite_names().end())
            throw ConfigError("unknown verify suite '" + n + "'");

    VerifyResult out;
    json suites = json::array();
    for (const auto& n : names) {
        const SuiteResult s = run_suite(n, cfg);
        json checks = json::array();
        for (const auto& c : s.checks) checks.push_back(to_json(c));
        suites.push_back({{"name", s.name}, {"pass", s.pass()}, {"checks", checks}, {"details", s.details}});
        out.pass = out.pass && s.pass();
    }
    out.report = {{"kind", "verify"},
                  {"version", kReportVersion},
                  {"alpha", cfg.alpha},
                  {"scheme", to_string(cfg.scheme)},
                  {"pass", out.pass},
                  {"suites", suites},
                  {"notes", {kAlphaNote}}};
    validate_report(out.report);
    return out;
}

}  // namespace lvse
