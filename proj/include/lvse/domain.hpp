#pragma once

// Value types shared by every module: the uniform grid, sampled wavefunctions,
// model parameters and the trapezoid quadrature used for all norms.
// Units: hbar = 1.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <span>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "lvse/errors.hpp"

namespace lvse {

using cplx = std::complex<double>;

/// Uniform 1-D mesh x_j = x_min + j*h, j = 0..n-1.
///
/// Points are evaluated as (x_min*(n-1-j) + x_max*j)/(n-1), which is the same
/// formula in exact arithmetic but makes both endpoints exact and keeps grids
/// with x_min = -x_max exactly antisymmetric (x_{n-1-j} == -x_j bitwise).
class Grid {
public:
    Grid(double x_min, double x_max, std::size_t n) : x_min_(x_min), x_max_(x_max), n_(n) {
        if (!std::isfinite(x_min) || !std::isfinite(x_max))
            throw DomainError("grid bounds must be finite");
        if (n < 3) throw DomainError("grid needs at least 3 points, got " + std::to_string(n));
        if (!(x_max > x_min)) throw DomainError("grid requires x_max > x_min");
        h_ = (x_max - x_min) / static_cast<double>(n - 1);
        points_.resize(n);
        const double last = static_cast<double>(n - 1);
        for (std::size_t j = 0; j < n; ++j) {
            const double fj = static_cast<double>(j);
            points_[j] = (x_min * (last - fj) + x_max * fj) / last;
        }
    }

    double x_min() const { return x_min_; }
    double x_max() const { return x_max_; }
    std::size_t size() const { return n_; }
    double h() const { return h_; }
    double x(std::size_t j) const { return points_[j]; }
    std::span<const double> points() const { return points_; }

    bool symmetric() const { return std::abs(x_min_ + x_max_) <= 1e-12 * std::abs(x_max_); }

    friend bool operator==(const Grid& a, const Grid& b) {
        return a.n_ == b.n_ && a.x_min_ == b.x_min_ && a.x_max_ == b.x_max_;
    }

private:
    double x_min_;
    double x_max_;
    std::size_t n_;
    double h_{};
    std::vector<double> points_;
};

inline Grid make_grid(double x_min, double x_max, std::size_t n) { return Grid(x_min, x_max, n); }

/// Grid sequence n_0, 2(n_0-1)+1, ... so that h halves at every step.
inline std::vector<Grid> halving_grids(double x_min, double x_max, std::size_t n0, std::size_t count) {
    std::vector<Grid> grids;
    std::size_t n = n0;
    for (std::size_t i = 0; i < count; ++i) {
        grids.emplace_back(x_min, x_max, n);
        n = 2 * (n - 1) + 1;
    }
    return grids;
}

struct Energy {
    double value{};
    friend auto operator<=>(const Energy&, const Energy&) = default;
};

/// Trapezoid weights: h in the interior, h/2 at both ends.
inline double trapezoid_weight(const Grid& g, std::size_t j) {
    return (j == 0 || j + 1 == g.size()) ? 0.5 * g.h() : g.h();
}

/// Complex samples psi(x_j) on a grid.
struct WaveFunction {
    Grid grid;
    std::vector<cplx> amp;
    bool normalized = false;

    WaveFunction(Grid g, std::vector<cplx> a, bool is_normalized = false)
        : grid(std::move(g)), amp(std::move(a)), normalized(is_normalized) {
        if (amp.size() != grid.size())
            throw ShapeError("wavefunction has " + std::to_string(amp.size()) + " samples for a grid of " +
                             std::to_string(grid.size()) + " points");
        for (const auto& z : amp)
            if (!std::isfinite(z.real()) || !std::isfinite(z.imag()))
                throw DomainError("wavefunction amplitudes must be finite");
    }

    std::size_t size() const { return amp.size(); }
    const cplx& operator[](std::size_t j) const { return amp[j]; }
};

/// Trapezoid-rule <a|b> = sum_j w_j conj(a_j) b_j.
inline cplx inner(const WaveFunction& a, const WaveFunction& b) {
    if (!(a.grid == b.grid)) throw ShapeError("inner product of wavefunctions on different grids");
    cplx s{};
    for (std::size_t j = 0; j < a.size(); ++j) s += trapezoid_weight(a.grid, j) * std::conj(a[j]) * b[j];
    return s;
}

inline double norm_squared(const WaveFunction& wf) {
    double s = 0.0;
    for (std::size_t j = 0; j < wf.size(); ++j) s += trapezoid_weight(wf.grid, j) * std::norm(wf[j]);
    return s;
}

inline double norm(const WaveFunction& wf) { return std::sqrt(norm_squared(wf)); }

inline WaveFunction normalize(const WaveFunction& wf) {
    const double nrm = norm(wf);
    if (!(nrm > 1e-300)) throw ZeroNormError("cannot normalize a wavefunction with zero norm");
    std::vector<cplx> amp(wf.amp);
    for (auto& z : amp) z /= nrm;
    return WaveFunction(wf.grid, std::move(amp), true);
}

/// Relative magnitude window inside which two samples count as tied for the
/// largest magnitude. Symmetric states have mirror-image peaks that agree only
/// to rounding.
inline constexpr double kPhaseTieTolerance = 1e-9;

/// Multiplies wf by the global phase that makes e^{+i alpha x_j} psi_j real and
/// positive at the largest-magnitude sample (lowest index among ties).
inline WaveFunction align_phase(const WaveFunction& wf, double alpha) {
    double peak = 0.0;
    for (const auto& z : wf.amp) peak = std::max(peak, std::abs(z));
    if (!(peak > 0.0)) throw ZeroNormError("cannot phase-align a zero wavefunction");
    std::size_t pivot = 0;
    while (std::abs(wf[pivot]) < peak * (1.0 - kPhaseTieTolerance)) ++pivot;

    const cplx v = std::polar(1.0, alpha * wf.grid.x(pivot)) * wf[pivot];
    const cplx rotation = std::conj(v) / std::abs(v);
    std::vector<cplx> amp(wf.amp);
    for (auto& z : amp) z *= rotation;
    return WaveFunction(wf.grid, std::move(amp), wf.normalized);
}

// ---------------------------------------------------------------------------
// Model parameters

namespace potential {
struct Free {};
struct Box {
    double L;
};
struct Harmonic {
    double omega;
};
/// V(x_j) sampled on the grid the operator is assembled on.
struct Tabulated {
    std::vector<double> values;
};
}  // namespace potential

using PotentialSpec = std::variant<potential::Free, potential::Box, potential::Harmonic, potential::Tabulated>;

struct ModelParams {
    double m = 1.0;
    double alpha = 0.0;
    PotentialSpec potential = potential::Free{};

    static ModelParams free(double m, double alpha) { return ModelParams{m, alpha, potential::Free{}}.validated(); }
    static ModelParams box(double m, double alpha, double L) {
        return ModelParams{m, alpha, potential::Box{L}}.validated();
    }
    static ModelParams harmonic(double m, double alpha, double omega) {
        return ModelParams{m, alpha, potential::Harmonic{omega}}.validated();
    }

    bool is_box() const { return std::holds_alternative<potential::Box>(potential); }
    bool is_harmonic() const { return std::holds_alternative<potential::Harmonic>(potential); }
    double L() const { return std::get<potential::Box>(potential).L; }
    double omega() const { return std::get<potential::Harmonic>(potential).omega; }

    ModelParams with_alpha(double a) const {
        ModelParams p = *this;
        p.alpha = a;
        return p;
    }

    const ModelParams& validate() const {
        if (!(m > 0.0) || !std::isfinite(m)) throw DomainError("mass must be positive and finite");
        if (!std::isfinite(alpha)) throw DomainError("alpha must be finite");
        if (const auto* b = std::get_if<potential::Box>(&potential); b && !(b->L > 0.0 && std::isfinite(b->L)))
            throw DomainError("box width L must be positive");
        if (const auto* ho = std::get_if<potential::Harmonic>(&potential);
            ho && !(ho->omega > 0.0 && std::isfinite(ho->omega)))
            throw DomainError("omega must be positive");
        return *this;
    }
    ModelParams validated() const {
        validate();
        return *this;
    }
};

/// True when the grid covers exactly [0, L] (to 1e-12).
inline bool spans_box(const Grid& g, double L) {
    return std::abs(g.x_min()) <= 1e-12 && std::abs(g.x_max() - L) <= 1e-12 * std::max(1.0, L);
}

/// V(x_j) for every grid point. The infinite well is zero on the grid, whose
/// endpoints carry the Dirichlet walls.
inline std::vector<double> potential_on(const Grid& g, const ModelParams& params) {
    params.validate();
    std::vector<double> v(g.size(), 0.0);
    std::visit(
        [&](const auto& pot) {
            using T = std::decay_t<decltype(pot)>;
            if constexpr (std::is_same_v<T, potential::Box>) {
                if (!spans_box(g, pot.L))
                    throw DomainError("box potential needs a grid spanning exactly [0, L]");
            } else if constexpr (std::is_same_v<T, potential::Harmonic>) {
                const double k = params.m * pot.omega * pot.omega;
                for (std::size_t j = 0; j < g.size(); ++j) v[j] = 0.5 * k * g.x(j) * g.x(j);
            } else if constexpr (std::is_same_v<T, potential::Tabulated>) {
                if (pot.values.size() != g.size()) throw ShapeError("tabulated potential does not match grid");
                v = pot.values;
            }
        },
        params.potential);
    return v;
}

}  // namespace lvse
