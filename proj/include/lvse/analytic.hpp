#pragma once

// Closed-form solutions of the modified equation. Every bound state is the
// alpha = 0 textbook state times the position-dependent phase e^{-i alpha x};
// energies carry no alpha dependence.

#include <cmath>
#include <numbers>
#include <string>
#include <vector>

#include "lvse/domain.hpp"
#include "lvse/operators.hpp"

namespace lvse::analytic {

/// psi(x) = A e^{i(k-alpha)x} + B e^{-i(k+alpha)x}, left unnormalized.
inline WaveFunction free_particle(double k, double alpha, cplx A, cplx B, const Grid& g) {
    if (!std::isfinite(k) || !std::isfinite(alpha)) throw DomainError("k and alpha must be finite");
    if (k * k <= alpha * alpha)
        throw ConditionError("free-particle solution requires k^2 > alpha^2 (k=" + std::to_string(k) +
                             ", alpha=" + std::to_string(alpha) + ")");
    if (!(k > 0.0)) throw DomainError("k must be positive");
    std::vector<cplx> amp(g.size());
    for (std::size_t j = 0; j < g.size(); ++j) {
        const double x = g.x(j);
        amp[j] = A * std::polar(1.0, (k - alpha) * x) + B * std::polar(1.0, -(k + alpha) * x);
    }
    return WaveFunction(g, std::move(amp));
}

/// E = k^2/(2m), from k = sqrt(2mE).
inline Energy free_energy(double k, double m) {
    if (!(m > 0.0)) throw DomainError("mass must be positive");
    if (!(k >= 0.0)) throw DomainError("k must be non-negative");
    return {k * k / (2.0 * m)};
}

/// sqrt(2/L) e^{-i alpha x} sin(n pi x / L) on a grid spanning [0, L].
inline WaveFunction box_state(int n, double L, double alpha, const Grid& g) {
    if (n < 1) throw DomainError("box states are numbered from n = 1");
    if (!(L > 0.0)) throw DomainError("box width must be positive");
    if (!spans_box(g, L)) throw DomainError("box state needs a grid spanning exactly [0, L]");
    const double A = std::sqrt(2.0 / L);
    const double kn = n * std::numbers::pi / L;
    std::vector<cplx> amp(g.size());
    for (std::size_t j = 1; j + 1 < g.size(); ++j) {
        const double x = g.x(j);
        amp[j] = A * std::sin(kn * x) * std::polar(1.0, -alpha * x);
    }
    // psi(0) = psi(L) = 0 exactly; sin(n pi) is only ~1e-16 in floating point.
    amp.front() = amp.back() = cplx{};
    WaveFunction wf(g, std::move(amp));
    wf.normalized = std::abs(norm_squared(wf) - 1.0) <= 1e-10;
    return wf;
}

inline Energy box_energy(int n, double m, double L) {
    if (n < 1 || !(m > 0.0) || !(L > 0.0)) throw DomainError("box energy needs n >= 1, m > 0, L > 0");
    const double pi = std::numbers::pi;
    return {static_cast<double>(n) * n * pi * pi / (2.0 * m * L * L)};
}

/// (m omega/pi)^{1/4} e^{-m omega x^2/2} e^{-i alpha x}.
inline WaveFunction ho_ground(double m, double omega, double alpha, const Grid& g) {
    if (!(m > 0.0) || !(omega > 0.0)) throw DomainError("oscillator needs m > 0 and omega > 0");
    const double mw = m * omega;
    const double A = std::pow(mw / std::numbers::pi, 0.25);
    std::vector<cplx> amp(g.size());
    for (std::size_t j = 0; j < g.size(); ++j) {
        const double x = g.x(j);
        amp[j] = A * std::exp(-0.5 * mw * x * x) * std::polar(1.0, -alpha * x);
    }
    WaveFunction wf(g, std::move(amp));
    wf.normalized = std::abs(norm_squared(wf) - 1.0) <= 1e-10;
    return wf;
}

inline constexpr int kMaxOscillatorLevel = 170;

/// Physicists' Hermite polynomial H_n(xi) by H_{n+1} = 2 xi H_n - 2n H_{n-1}.
inline double hermite(int n, double xi) {
    if (n < 0) throw DomainError("Hermite degree must be non-negative");
    double prev = 1.0;
    if (n == 0) return prev;
    double cur = 2.0 * xi;
    for (int k = 1; k < n; ++k) {
        const double next = 2.0 * xi * cur - 2.0 * k * prev;
        prev = cur;
        cur = next;
    }
    return cur;
}

/// H_n(xi) / sqrt(2^n n!), by the same recurrence divided through by the
/// normalization so that neither factor overflows separately.
inline double scaled_hermite(int n, double xi) {
    double prev = 1.0;
    if (n == 0) return prev;
    double cur = std::sqrt(2.0) * xi;
    for (int k = 1; k < n; ++k) {
        const double next = std::sqrt(2.0 / (k + 1)) * xi * cur - std::sqrt(static_cast<double>(k) / (k + 1)) * prev;
        prev = cur;
        cur = next;
    }
    return cur;
}

/// e^{-i alpha x} psi'_n(x), psi'_n the standard oscillator eigenfunction
/// (m omega/pi)^{1/4} (2^n n!)^{-1/2} H_n(sqrt(m omega) x) e^{-m omega x^2/2}.
inline WaveFunction ho_state(int n, double m, double omega, double alpha, const Grid& g) {
    if (n < 0) throw DomainError("oscillator levels are numbered from n = 0");
    if (n > kMaxOscillatorLevel) throw OverflowError("oscillator level above 170 is out of range");
    if (!(m > 0.0) || !(omega > 0.0)) throw DomainError("oscillator needs m > 0 and omega > 0");
    const double mw = m * omega;
    const double A = std::pow(mw / std::numbers::pi, 0.25);
    const double s = std::sqrt(mw);
    std::vector<cplx> amp(g.size());
    for (std::size_t j = 0; j < g.size(); ++j) {
        const double x = g.x(j);
        amp[j] = A * scaled_hermite(n, s * x) * std::exp(-0.5 * mw * x * x) * std::polar(1.0, -alpha * x);
    }
    WaveFunction wf(g, std::move(amp));
    wf.normalized = std::abs(norm_squared(wf) - 1.0) <= 1e-10;
    return wf;
}

inline Energy ho_energy(int n, double omega) {
    if (n < 0 || !(omega > 0.0)) throw DomainError("oscillator energy needs n >= 0 and omega > 0");
    return {(n + 0.5) * omega};
}

/// Half-width X of the default symmetric oscillator domain: the classical
/// turning point of level n_max plus six decay lengths.
inline double oscillator_half_width(int n_max, double m, double omega) {
    const double mw = m * omega;
    return std::sqrt(2.0 * (n_max + 1) / mw) + 6.0 / std::sqrt(mw);
}

/// Boundary amplitude above which a ladder-built state is flagged as truncated.
inline constexpr double kLadderBoundaryWarning = 1e-6;

/// normalize(a_+^n psi_0) using the discrete ladder operator, normalizing after
/// every application.
inline WaveFunction ho_state_via_ladder(int n, double m, double omega, double alpha, const Grid& g,
                                        std::vector<std::string>* warnings = nullptr) {
    if (n < 0) throw DomainError("oscillator levels are numbered from n = 0");
    if (n > kMaxOscillatorLevel) throw OverflowError("oscillator level above 170 is out of range");
    WaveFunction psi = ho_ground(m, omega, alpha, g);
    if (n == 0) return psi;
    const auto ops = ladder(g, m, omega, alpha);
    for (int k = 0; k < n; ++k) psi = normalize(WaveFunction(g, ops.a_plus.apply(psi.amp)));
    const double edge = std::max(std::abs(psi.amp.front()), std::abs(psi.amp.back()));
    if (edge > kLadderBoundaryWarning && warnings)
        warnings->push_back("ConvergenceWarning: ladder state n=" + std::to_string(n) +
                            " has boundary amplitude " + std::to_string(edge) + "; widen the grid");
    return psi;
}

}  // namespace lvse::analytic
