#pragma once

// Lowest eigenpairs of Hermitian tridiagonal operators.
//
// eigen_lowest: phase-reduce to a real symmetric tridiagonal T, bisect the
// Sturm sequence of T for the k smallest eigenvalues, then recover complex
// eigenvectors by inverse iteration on the original operator.
//
// rq_descent: independent ground-state finder, steepest descent on the
// Rayleigh quotient with an exact Rayleigh-Ritz step in span{psi, gradient}.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "lvse/domain.hpp"
#include "lvse/operators.hpp"

namespace lvse {

enum class Solver { Tridiag, RQDescent, Analytic };

inline std::string to_string(Solver s) {
    switch (s) {
        case Solver::Tridiag: return "tridiag";
        case Solver::RQDescent: return "rq-descent";
        case Solver::Analytic: return "analytic";
    }
    return "unknown";
}

inline Solver parse_solver(std::string_view s) {
    if (s == "tridiag") return Solver::Tridiag;
    if (s == "rq-descent") return Solver::RQDescent;
    if (s == "analytic") return Solver::Analytic;
    throw ConfigError("unknown solver '" + std::string(s) + "' (expected tridiag|rq-descent|analytic)");
}

struct SolveOptions {
    std::size_t k = 1;
    double tol = 1e-10;
    std::optional<std::size_t> max_iter;  // default 10 * grid points
    std::uint64_t seed = 42;

    std::size_t iteration_limit(const TridiagonalHermitianOperator& op) const {
        return max_iter.value_or(10 * op.grid().size());
    }
};

struct Eigenpair {
    Energy energy;
    WaveFunction wf;
    int label = 0;  // quantum number used in file names and legends
};

struct Spectrum {
    std::vector<Eigenpair> pairs;
    std::optional<Scheme> scheme;
    Solver solver = Solver::Tridiag;
    std::vector<double> residuals;
    std::uint64_t seed = 0;
    std::vector<std::string> warnings;

    std::size_t size() const { return pairs.size(); }
};

// ---------------------------------------------------------------------------
// Deterministic pseudo-random vectors (minstd LCG; identical on every platform).

inline std::vector<double> lcg_vector(std::uint64_t seed, std::size_t n) {
    std::minstd_rand gen(static_cast<std::minstd_rand::result_type>(seed % 2147483646ULL + 1));
    const double span = static_cast<double>(std::minstd_rand::max() - std::minstd_rand::min());
    std::vector<double> v(n);
    for (auto& x : v) x = 2.0 * static_cast<double>(gen() - std::minstd_rand::min()) / span - 1.0;
    return v;
}

namespace detail {

inline double dot_norm(std::span<const cplx> v) {
    double s = 0.0;
    for (const auto& z : v) s += std::norm(z);
    return std::sqrt(s);
}

inline cplx dot(std::span<const cplx> a, std::span<const cplx> b) {
    cplx s{};
    for (std::size_t j = 0; j < a.size(); ++j) s += std::conj(a[j]) * b[j];
    return s;
}

inline void scale(std::vector<cplx>& v, cplx c) {
    for (auto& z : v) z *= c;
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Phase reduction

struct PhaseReduced {
    std::vector<double> diag;
    std::vector<double> offdiag;  // |e_j|
    std::vector<cplx> phases;     // H = D T D^dagger, D = diag(phases)
};

/// Diagonal unitary similarity to a real symmetric tridiagonal matrix:
/// d_0 = 1, d_{j+1} = d_j conj(u_j) so that conj(d_j) e_j d_{j+1} = |e_j|.
/// An eigenvector v of T maps to D v for the original operator.
inline PhaseReduced phase_reduce(const TridiagonalHermitianOperator& op) {
    PhaseReduced r;
    r.diag.assign(op.diag_band().begin(), op.diag_band().end());
    r.offdiag.assign(op.hop_abs_band().begin(), op.hop_abs_band().end());
    r.phases.resize(op.size());
    r.phases[0] = 1.0;
    for (std::size_t j = 0; j + 1 < op.size(); ++j) r.phases[j + 1] = r.phases[j] * std::conj(op.hop_phase(j));
    return r;
}

/// Number of eigenvalues of T strictly below x.
inline std::size_t sturm_count(std::span<const double> diag, std::span<const double> offdiag, double x,
                               double pivmin) {
    std::size_t count = 0;
    double q = diag[0] - x;
    if (std::abs(q) < pivmin) q = -pivmin;
    if (q < 0.0) ++count;
    for (std::size_t j = 1; j < diag.size(); ++j) {
        q = diag[j] - x - offdiag[j - 1] * offdiag[j - 1] / q;
        if (std::abs(q) < pivmin) q = -pivmin;
        if (q < 0.0) ++count;
    }
    return count;
}

/// The k smallest eigenvalues of a real symmetric tridiagonal matrix, ascending.
inline std::vector<double> bisect_lowest(std::span<const double> diag, std::span<const double> offdiag, std::size_t k) {
    const std::size_t n = diag.size();
    double lo = std::numeric_limits<double>::max();
    double hi = std::numeric_limits<double>::lowest();
    double emax2 = 1.0;
    for (std::size_t j = 0; j < n; ++j) {
        double r = 0.0;
        if (j > 0) r += offdiag[j - 1];
        if (j + 1 < n) r += offdiag[j];
        lo = std::min(lo, diag[j] - r);
        hi = std::max(hi, diag[j] + r);
        if (j + 1 < n) emax2 = std::max(emax2, offdiag[j] * offdiag[j]);
    }
    const double eps = std::numeric_limits<double>::epsilon();
    const double pivmin = std::numeric_limits<double>::min() * emax2;
    const double pad = 2.0 * eps * std::max(std::abs(lo), std::abs(hi)) + pivmin;
    lo -= pad;
    hi += pad;

    std::vector<double> values(k);
    for (std::size_t i = 0; i < k; ++i) {
        double a = i > 0 ? values[i - 1] - pad : lo;
        double b = hi;
        for (int it = 0; it < 256; ++it) {
            const double mid = 0.5 * (a + b);
            if (b - a <= 2.0 * eps * std::max(std::abs(a), std::abs(b)) + pivmin || mid == a || mid == b) break;
            if (sturm_count(diag, offdiag, mid, pivmin) > i)
                b = mid;
            else
                a = mid;
        }
        values[i] = 0.5 * (a + b);
    }
    return values;
}

namespace detail {

/// LU factorization with partial pivoting of (H - shift I) for complex
/// tridiagonal H (row interchanges create a second superdiagonal).
class ShiftedTridiagLU {
public:
    ShiftedTridiagLU(const TridiagonalHermitianOperator& op, double shift) : n_(op.size()) {
        d_.resize(n_);
        dl_.resize(n_ > 0 ? n_ - 1 : 0);
        du_.resize(dl_.size());
        du2_.assign(n_ > 1 ? n_ - 2 : 0, cplx{});
        swapped_.assign(dl_.size(), false);
        for (std::size_t j = 0; j < n_; ++j) d_[j] = op.diag(j) - shift;
        for (std::size_t j = 0; j + 1 < n_; ++j) {
            du_[j] = op.offdiag(j);
            dl_[j] = std::conj(op.offdiag(j));
        }
        for (std::size_t i = 0; i + 1 < n_; ++i) {
            if (std::abs(d_[i]) >= std::abs(dl_[i])) {
                if (d_[i] != cplx{}) {
                    const cplx fact = dl_[i] / d_[i];
                    dl_[i] = fact;
                    d_[i + 1] -= fact * du_[i];
                }
            } else {
                const cplx fact = d_[i] / dl_[i];
                d_[i] = dl_[i];
                dl_[i] = fact;
                const cplx temp = du_[i];
                du_[i] = d_[i + 1];
                d_[i + 1] = temp - fact * d_[i + 1];
                if (i + 2 < n_) {
                    du2_[i] = du_[i + 1];
                    du_[i + 1] = -fact * du_[i + 1];
                }
                swapped_[i] = true;
            }
        }
        // A shift equal to an eigenvalue can leave an exactly zero pivot.
        const double tiny = std::numeric_limits<double>::epsilon() * std::max(op.norm_bound(), 1e-300);
        for (auto& p : d_)
            if (std::abs(p) < tiny) p = tiny;
    }

    void solve(std::vector<cplx>& b) const {
        for (std::size_t i = 0; i + 1 < n_; ++i) {
            if (!swapped_[i]) {
                b[i + 1] -= dl_[i] * b[i];
            } else {
                const cplx temp = b[i];
                b[i] = b[i + 1];
                b[i + 1] = temp - dl_[i] * b[i];
            }
        }
        for (std::size_t r = n_; r-- > 0;) {
            cplx s = b[r];
            if (r + 1 < n_) s -= du_[r] * b[r + 1];
            if (r + 2 < n_) s -= du2_[r] * b[r + 2];
            b[r] = s / d_[r];
        }
    }

private:
    std::size_t n_;
    std::vector<cplx> d_, dl_, du_, du2_;
    std::vector<bool> swapped_;
};

/// sqrt(h * sum |(H psi - E psi)_j|^2) over the operator rows.
inline double residual_norm(const TridiagonalHermitianOperator& op, std::span<const cplx> rows, double e, double w) {
    const auto hv = op.apply(rows);
    double s = 0.0;
    for (std::size_t j = 0; j < rows.size(); ++j) s += std::norm(hv[j] - e * rows[j]);
    return std::sqrt(w * s);
}

inline std::vector<cplx> rows_of(const TridiagonalHermitianOperator& op, const WaveFunction& wf) {
    if (!(wf.grid == op.grid())) throw ShapeError("wavefunction grid does not match operator grid");
    const auto first = wf.amp.begin() + static_cast<std::ptrdiff_t>(op.offset());
    return {first, first + static_cast<std::ptrdiff_t>(op.size())};
}

}  // namespace detail

/// Relative gap below which consecutive eigenvalues are treated as a cluster.
inline constexpr double kClusterGap = 1e-10;

inline Spectrum eigen_lowest(const TridiagonalHermitianOperator& op, const SolveOptions& opts) {
    const std::size_t n = op.size();
    if (opts.k < 1 || opts.k > n)
        throw DomainError("requested " + std::to_string(opts.k) + " eigenpairs from an operator of size " +
                          std::to_string(n));
    if (!(opts.tol > 0.0)) throw DomainError("tolerance must be positive");
    const std::size_t max_iter = opts.iteration_limit(op);
    const double w = op.grid().h();

    const PhaseReduced t = phase_reduce(op);
    const std::vector<double> values = bisect_lowest(t.diag, t.offdiag, opts.k);

    Spectrum spec;
    spec.scheme = op.scheme();
    spec.solver = Solver::Tridiag;
    spec.seed = opts.seed;

    std::vector<std::vector<cplx>> vectors;
    std::size_t cluster_start = 0;
    for (std::size_t i = 0; i < opts.k; ++i) {
        const double e = values[i];
        if (i > 0 && values[i] - values[i - 1] < kClusterGap * std::abs(values[i])) {
            spec.warnings.push_back("ClusterWarning: eigenvalues " + std::to_string(i - 1) + " and " +
                                    std::to_string(i) + " are closer than 1e-10 relative");
        } else {
            cluster_start = i;
        }

        const detail::ShiftedTridiagLU lu(op, e);
        const auto start = lcg_vector(opts.seed + i, n);
        std::vector<cplx> v(start.begin(), start.end());
        detail::scale(v, 1.0 / detail::dot_norm(v));
        double res = std::numeric_limits<double>::infinity();
        for (std::size_t it = 0; it < max_iter && res > opts.tol; ++it) {
            lu.solve(v);
            for (std::size_t c = cluster_start; c < i; ++c) {
                const cplx proj = detail::dot(vectors[c], v);
                for (std::size_t j = 0; j < n; ++j) v[j] -= proj * vectors[c][j];
            }
            const double nv = detail::dot_norm(v);
            if (!(nv > 0.0) || !std::isfinite(nv)) throw ConvergenceError("inverse iteration broke down");
            detail::scale(v, 1.0 / nv);
            res = detail::residual_norm(op, v, e, 1.0);
        }
        if (res > opts.tol)
            throw ConvergenceError("inverse iteration for eigenvalue " + std::to_string(i) + " stalled at residual " +
                                   std::to_string(res) + " (tol " + std::to_string(opts.tol) + ")");

        WaveFunction wf = align_phase(normalize(embed(op, v)), op.alpha());
        spec.residuals.push_back(detail::residual_norm(op, detail::rows_of(op, wf), e, w));
        spec.pairs.push_back({Energy{e}, std::move(wf), static_cast<int>(i)});
        vectors.push_back(std::move(v));
    }
    return spec;
}

/// <psi|H|psi>/<psi|psi> over the operator rows.
inline double rayleigh_quotient(const TridiagonalHermitianOperator& op, const WaveFunction& wf) {
    const auto rows = detail::rows_of(op, wf);
    const auto hv = op.apply(rows);
    cplx num{};
    double den = 0.0, scale = 0.0;
    for (std::size_t j = 0; j < rows.size(); ++j) {
        const cplx term = std::conj(rows[j]) * hv[j];
        num += term;
        scale += std::abs(term);
        den += std::norm(rows[j]);
    }
    if (!(den > 1e-300)) throw ZeroNormError("Rayleigh quotient of a zero vector");
    if (std::abs(num.imag()) > 1e-12 * scale)
        throw InvariantError("Rayleigh quotient has an imaginary part; operator is not Hermitian");
    return num.real() / den;
}

/// Gradient of R(psi) with respect to the real and imaginary parts of psi,
/// packed as a complex vector: dR along direction d is Re(g^dagger d).
inline std::vector<cplx> rq_gradient(const TridiagonalHermitianOperator& op, std::span<const cplx> rows) {
    const auto hv = op.apply(rows);
    const double den = std::real(detail::dot(rows, rows));
    if (!(den > 1e-300)) throw ZeroNormError("Rayleigh quotient of a zero vector");
    const double r = std::real(detail::dot(rows, hv)) / den;
    std::vector<cplx> g(rows.size());
    for (std::size_t j = 0; j < rows.size(); ++j) g[j] = 2.0 * (hv[j] - r * rows[j]) / den;
    return g;
}

struct DescentResult {
    Energy energy;
    WaveFunction wf;
    std::size_t iterations = 0;
    int attempts = 0;
    double residual = 0.0;
};

namespace detail {

enum class DescentOutcome { Converged, Stagnated };

struct DescentState {
    std::vector<cplx> x;
    double r = 0.0;
    double residual = 0.0;
    std::size_t iterations = 0;
};

inline DescentOutcome descend(const TridiagonalHermitianOperator& op, DescentState& st, double tol,
                              std::size_t max_iter) {
    const std::size_t n = op.size();
    for (; st.iterations < max_iter; ++st.iterations) {
        const auto hx = op.apply(st.x);
        st.r = std::real(dot(st.x, hx));
        std::vector<cplx> q(n);
        for (std::size_t j = 0; j < n; ++j) q[j] = 2.0 * (hx[j] - st.r * st.x[j]);
        st.residual = 0.5 * dot_norm(q);
        if (st.residual <= tol) return DescentOutcome::Converged;

        const double gnorm = dot_norm(q);
        const cplx overlap = dot(st.x, q);
        for (std::size_t j = 0; j < n; ++j) q[j] -= overlap * st.x[j];
        const double qnorm = dot_norm(q);
        if (qnorm <= 1e-14 * gnorm) return DescentOutcome::Stagnated;
        scale(q, 1.0 / qnorm);

        // Rayleigh-Ritz in span{x, q}: smallest eigenpair of [[a, b], [conj b, c]].
        const auto hq = op.apply(q);
        const double a = st.r;
        const cplx b = dot(st.x, hq);
        const double c = std::real(dot(q, hq));
        const double mean = 0.5 * (a + c);
        const double half = 0.5 * (a - c);
        const double lambda = mean - std::sqrt(half * half + std::norm(b));
        cplx y0 = b, y1 = lambda - a;
        const cplx z0 = lambda - c, z1 = std::conj(b);
        if (std::norm(z0) + std::norm(z1) > std::norm(y0) + std::norm(y1)) {
            y0 = z0;
            y1 = z1;
        }
        for (std::size_t j = 0; j < n; ++j) st.x[j] = y0 * st.x[j] + y1 * q[j];
        scale(st.x, 1.0 / dot_norm(st.x));

        const double delta = lambda - a;
        if (delta > 1e-12 * std::abs(a)) return DescentOutcome::Stagnated;
        if (std::abs(delta) <= tol * std::abs(a)) {
            ++st.iterations;
            st.r = std::real(dot(st.x, op.apply(st.x)));
            return DescentOutcome::Converged;
        }
    }
    throw ConvergenceError("Rayleigh-quotient descent did not converge in " + std::to_string(max_iter) +
                           " iterations (residual " + std::to_string(st.residual) + ")");
}

}  // namespace detail

inline constexpr int kDescentSeeds = 3;

/// Ground state by Rayleigh-quotient descent from `seed`. A seed whose descent
/// stagnates is replaced by a deterministic pseudo-random vector, up to three
/// seeds in total.
inline DescentResult rq_descent(const TridiagonalHermitianOperator& op, const WaveFunction& seed,
                                const SolveOptions& opts) {
    if (!(opts.tol > 0.0)) throw DomainError("tolerance must be positive");
    const std::size_t max_iter = opts.iteration_limit(op);
    std::vector<cplx> start = detail::rows_of(op, seed);
    for (int attempt = 0; attempt < kDescentSeeds; ++attempt) {
        if (attempt > 0) {
            const auto r = lcg_vector(opts.seed + 7919u * static_cast<std::uint64_t>(attempt), op.size());
            start.assign(r.begin(), r.end());
        }
        const double nrm = detail::dot_norm(start);
        if (!(nrm > 1e-300)) throw ZeroNormError("descent seed has zero norm");
        detail::DescentState st;
        st.x = start;
        detail::scale(st.x, 1.0 / nrm);
        if (detail::descend(op, st, opts.tol, max_iter) == detail::DescentOutcome::Converged) {
            WaveFunction wf = align_phase(normalize(embed(op, st.x)), op.alpha());
            return {Energy{st.r}, std::move(wf), st.iterations, attempt + 1, st.residual};
        }
    }
    throw StagnationError("Rayleigh-quotient descent stagnated from three different seeds");
}

}  // namespace lvse
