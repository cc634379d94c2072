#pragma once

// Expectation values, uncertainty products, gauge/parity residuals and grid
// refinement studies.

#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>
#include <span>
#include <vector>

#include "lvse/analytic.hpp"
#include "lvse/domain.hpp"
#include "lvse/eigensolve.hpp"
#include "lvse/operators.hpp"

namespace lvse {

namespace detail {

inline void check_hermitian_expectation(cplx value, double scale) {
    if (std::abs(value.imag()) > 1e-10 * std::max(scale, 1e-300))
        throw InvariantError("expectation of a Hermitian operator has imaginary part " +
                             std::to_string(value.imag()));
}

}  // namespace detail

/// Trapezoid-weighted <psi|A|psi>. Interior operators use interior-only weights.
inline cplx expectation(const GridOperator& op, const WaveFunction& wf) {
    if (!(op.grid() == wf.grid)) throw ShapeError("operator and wavefunction live on different grids");
    const Grid& g = wf.grid;
    std::vector<cplx> x;
    if (op.offset() == 0)
        x = wf.amp;
    else
        x = interior(wf);
    const auto ax = op.apply(x);
    cplx s{};
    double scale = 0.0;
    for (std::size_t r = 0; r < x.size(); ++r) {
        const double w = op.offset() == 0 ? trapezoid_weight(g, r) : g.h();
        const cplx term = w * std::conj(x[r]) * ax[r];
        s += term;
        scale += std::abs(term);
    }
    if (op.hermitian()) detail::check_hermitian_expectation(s, scale);
    return s;
}

inline cplx expectation(const TridiagonalHermitianOperator& op, const WaveFunction& wf) {
    const auto rows = detail::rows_of(op, wf);
    const auto hx = op.apply(rows);
    cplx s{};
    double scale = 0.0;
    for (std::size_t r = 0; r < rows.size(); ++r) {
        const cplx term = op.grid().h() * std::conj(rows[r]) * hx[r];
        s += term;
        scale += std::abs(term);
    }
    detail::check_hermitian_expectation(s, scale);
    return s;
}

struct Uncertainty {
    double dx = 0.0;
    double dp = 0.0;
    double product() const { return dx * dp; }
};

/// Delta x and Delta p for a state prepared with background field alpha, with
/// p_alpha applied twice as the interior-restricted momentum matrix.
inline Uncertainty uncertainty(const WaveFunction& wf, double alpha) {
    const double n2 = norm_squared(wf);
    if (!(n2 > 1e-300)) throw ZeroNormError("uncertainty of a zero wavefunction");
    const Grid& g = wf.grid;

    double x1 = 0.0, x2 = 0.0;
    for (std::size_t j = 0; j < g.size(); ++j) {
        const double w = trapezoid_weight(g, j) * std::norm(wf[j]);
        x1 += w * g.x(j);
        x2 += w * g.x(j) * g.x(j);
    }
    x1 /= n2;
    x2 /= n2;

    const GridOperator p = interior_momentum(g, alpha);
    const auto rows = interior(wf);
    const auto p1 = p.apply(rows);
    const auto p2 = p.apply(p1);
    cplx m1{}, m2{};
    for (std::size_t r = 0; r < rows.size(); ++r) {
        m1 += std::conj(rows[r]) * p1[r];
        m2 += std::conj(rows[r]) * p2[r];
    }
    m1 *= g.h() / n2;
    m2 *= g.h() / n2;
    return {std::sqrt(std::max(0.0, x2 - x1 * x1)), std::sqrt(std::max(0.0, m2.real() - m1.real() * m1.real()))};
}

inline double uncertainty_product(const WaveFunction& wf, double alpha) { return uncertainty(wf, alpha).product(); }

/// max_j |psi_alpha(x_j) - e^{-i alpha x_j} psi_0(x_j)|.
inline double gauge_residual(const WaveFunction& wf_alpha, const WaveFunction& wf_zero, double alpha) {
    if (!(wf_alpha.grid == wf_zero.grid)) throw ShapeError("gauge residual needs both states on the same grid");
    double worst = 0.0;
    for (std::size_t j = 0; j < wf_alpha.size(); ++j) {
        const cplx mapped = std::polar(1.0, -alpha * wf_alpha.grid.x(j)) * wf_zero[j];
        worst = std::max(worst, std::abs(wf_alpha[j] - mapped));
    }
    return worst;
}

struct ParityReport {
    double relation_residual = 0.0;  // max |P H(alpha) P - H(-alpha)|
    double commutator_norm = 0.0;    // max |P H(alpha) - H(alpha) P|
};

namespace detail {

inline double max_abs_entry(const SparseMatrix& m) {
    double worst = 0.0;
    for (Eigen::Index k = 0; k < m.outerSize(); ++k)
        for (SparseMatrix::InnerIterator it(m, k); it; ++it) worst = std::max(worst, std::abs(it.value()));
    return worst;
}

}  // namespace detail

inline ParityReport parity_relation_residual(const Grid& g, const ModelParams& params, Scheme scheme) {
    const GridOperator p = restrict_interior(parity_matrix(g), true);
    if (params.is_box()) throw SymmetryError("the box potential on [0, L] is not parity symmetric about x = 0");
    const SparseMatrix h = hamiltonian(g, params, scheme).to_sparse();
    const SparseMatrix h_neg = hamiltonian(g, params.with_alpha(-params.alpha), scheme).to_sparse();
    const SparseMatrix& pm = p.matrix();
    const SparseMatrix php = pm * h * pm;
    const SparseMatrix rel = php - h_neg;
    const SparseMatrix comm = SparseMatrix(pm * h) - SparseMatrix(h * pm);
    return {detail::max_abs_entry(rel), detail::max_abs_entry(comm)};
}

// ---------------------------------------------------------------------------
// Grid refinement

using ErrorMeasure = std::function<double(const Grid&)>;

struct ConvergenceStudy {
    std::vector<double> h;
    std::vector<double> errors;
    double order = 0.0;
};

/// Errors at or below this are treated as already at machine precision.
inline constexpr double kConvergenceFloor = 1e-13;

/// Least-squares slope of log(error) against log(h).
inline ConvergenceStudy convergence_study(const ErrorMeasure& measure, std::span<const Grid> grids,
                                          double floor = kConvergenceFloor) {
    if (grids.size() < 3) throw DomainError("a convergence study needs at least three grids");
    ConvergenceStudy s;
    for (const auto& g : grids) {
        const double e = measure(g);
        if (!(e > floor))
            throw DomainError("error " + std::to_string(e) + " is at the machine-precision floor; order undefined");
        s.h.push_back(g.h());
        s.errors.push_back(e);
    }
    const auto n = static_cast<double>(grids.size());
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < s.h.size(); ++i) {
        const double lx = std::log(s.h[i]), ly = std::log(s.errors[i]);
        sx += lx;
        sy += ly;
        sxx += lx * lx;
        sxy += lx * ly;
    }
    s.order = (n * sxy - sx * sy) / (n * sxx - sx * sx);
    return s;
}

inline double convergence_order(const ErrorMeasure& measure, std::span<const Grid> grids) {
    return convergence_study(measure, grids).order;
}

// Error measures for the refinement studies. Each takes the grid to evaluate on.
namespace measures {

/// |E_numeric - E_analytic| for one level of the box or oscillator.
inline ErrorMeasure eigenvalue_error(ModelParams params, Scheme scheme, int level) {
    return [=](const Grid& g) {
        SolveOptions opts;
        opts.k = static_cast<std::size_t>(level) + 1;
        const Spectrum s = eigen_lowest(hamiltonian(g, params, scheme), opts);
        const double exact = params.is_box() ? analytic::box_energy(level + 1, params.m, params.L()).value
                                             : analytic::ho_energy(level, params.omega()).value;
        return std::abs(s.pairs[level].energy.value - exact);
    };
}

/// |E(alpha) - E(0)| on the same grid.
inline ErrorMeasure alpha_deviation(ModelParams params, Scheme scheme, int level) {
    return [=](const Grid& g) {
        SolveOptions opts;
        opts.k = static_cast<std::size_t>(level) + 1;
        const double ea = eigen_lowest(hamiltonian(g, params, scheme), opts).pairs[level].energy.value;
        const double e0 = eigen_lowest(hamiltonian(g, params.with_alpha(0.0), scheme), opts).pairs[level].energy.value;
        return std::abs(ea - e0);
    };
}

/// gauge_residual between numeric eigenvectors at alpha and at 0.
inline ErrorMeasure numeric_gauge_residual(ModelParams params, Scheme scheme, int level) {
    return [=](const Grid& g) {
        SolveOptions opts;
        opts.k = static_cast<std::size_t>(level) + 1;
        const auto sa = eigen_lowest(hamiltonian(g, params, scheme), opts);
        const auto s0 = eigen_lowest(hamiltonian(g, params.with_alpha(0.0), scheme), opts);
        return gauge_residual(sa.pairs[level].wf, s0.pairs[level].wf, params.alpha);
    };
}

/// Gaussian test state e^{-(x-center)^2/(2 width^2)}, normalized.
inline WaveFunction gaussian(const Grid& g, double width, double center = 0.0) {
    std::vector<cplx> amp(g.size());
    for (std::size_t j = 0; j < g.size(); ++j) {
        const double u = (g.x(j) - center) / width;
        amp[j] = std::exp(-0.5 * u * u);
    }
    return normalize(WaveFunction(g, std::move(amp)));
}

namespace detail {
inline double l2(const Grid& g, std::span<const cplx> v) {
    double s = 0.0;
    for (std::size_t j = 0; j < v.size(); ++j) s += trapezoid_weight(g, j) * std::norm(v[j]);
    return std::sqrt(s);
}
}  // namespace detail

/// ||([a-, a+] - I) psi|| / ||psi|| for a Gaussian of the given width.
inline ErrorMeasure commutator_residual(double m, double omega, double alpha, double width) {
    return [=](const Grid& g) {
        const auto ops = ladder(g, m, omega, alpha);
        const auto psi = gaussian(g, width);
        const auto am_ap = ops.a_minus.apply(ops.a_plus.apply(psi.amp));
        const auto ap_am = ops.a_plus.apply(ops.a_minus.apply(psi.amp));
        std::vector<cplx> r(g.size());
        for (std::size_t j = 0; j < g.size(); ++j) r[j] = am_ap[j] - ap_am[j] - psi[j];
        return detail::l2(g, r) / detail::l2(g, psi.amp);
    };
}

/// ||a- psi_0|| / ||psi_0|| for the analytic ground state.
inline ErrorMeasure annihilation_residual(double m, double omega, double alpha) {
    return [=](const Grid& g) {
        const auto ops = ladder(g, m, omega, alpha);
        const auto psi = analytic::ho_ground(m, omega, alpha, g);
        return detail::l2(g, ops.a_minus.apply(psi.amp)) / detail::l2(g, psi.amp);
    };
}

/// ||(omega(a+ a- + 1/2) - H) psi|| / ||psi|| on interior rows for a Gaussian test state.
inline ErrorMeasure factorization_residual(double m, double omega, double alpha, double width, Scheme scheme) {
    return [=](const Grid& g) {
        const auto ops = ladder(g, m, omega, alpha);
        const auto psi = gaussian(g, width);
        const auto fac = ops.a_plus.apply(ops.a_minus.apply(psi.amp));
        const auto h = hamiltonian(g, ModelParams::harmonic(m, alpha, omega), scheme);
        const auto hpsi = h.apply(interior(psi));
        double num = 0.0, den = 0.0;
        for (std::size_t r = 0; r < hpsi.size(); ++r) {
            const cplx lhs = omega * (fac[r + 1] + 0.5 * psi[r + 1]);
            num += std::norm(lhs - hpsi[r]);
            den += std::norm(psi[r + 1]);
        }
        return std::sqrt(num / den);
    };
}

/// ||H psi - (k^2/2m) psi||_inf / ||psi||_inf for psi = e^{i(k-alpha)x}, over
/// rows whose stencil does not touch the Dirichlet truncation.
inline ErrorMeasure free_particle_residual(double k, double alpha, double m, Scheme scheme) {
    return [=](const Grid& g) {
        const auto psi = analytic::free_particle(k, alpha, 1.0, 0.0, g);
        const auto h = hamiltonian(g, ModelParams::free(m, alpha), scheme);
        const auto rows = interior(psi);
        const auto hpsi = h.apply(rows);
        const double e = analytic::free_energy(k, m).value;
        double worst = 0.0, peak = 0.0;
        for (std::size_t r = 1; r + 1 < rows.size(); ++r) worst = std::max(worst, std::abs(hpsi[r] - e * rows[r]));
        for (const auto& z : psi.amp) peak = std::max(peak, std::abs(z));
        return worst / peak;
    };
}

}  // namespace measures

}  // namespace lvse
