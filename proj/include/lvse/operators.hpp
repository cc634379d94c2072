#pragma once

// Discrete operators of the modified Schrodinger equation.
//
// The Hamiltonian  -(1/2m)(d/dx + i alpha)^2 + V  is assembled on the interior
// points x_1..x_{n-2} (Dirichlet walls at both grid ends) as a Hermitian
// tridiagonal matrix. Momentum, ladder, parity and gauge operators act on the
// full grid and are stored sparse.

#include <Eigen/Dense>
#include <Eigen/SparseCore>

#include <cmath>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "lvse/domain.hpp"

namespace lvse {

enum class Scheme {
    NaiveStencil,  // central differences applied term by term
    GaugeExact,    // U H(0) U^dagger with U = diag(e^{-i alpha x_j}) (Peierls phase on the hopping)
};

inline std::string to_string(Scheme s) { return s == Scheme::NaiveStencil ? "naive" : "gauge-exact"; }

inline Scheme parse_scheme(std::string_view s) {
    if (s == "naive") return Scheme::NaiveStencil;
    if (s == "gauge-exact") return Scheme::GaugeExact;
    throw ConfigError("unknown scheme '" + std::string(s) + "' (expected naive|gauge-exact)");
}

/// Hermitian tridiagonal operator acting on the grid points offset..offset+size-1.
///
/// Each off-diagonal element e_j (coupling j and j+1) is kept as a magnitude
/// |e_j| and a unit phase u_j; the lower band is conj(e_j). Keeping the
/// magnitude separately makes the phase reduction to a real symmetric matrix
/// exact, so operators that differ only by hopping phases reduce to bitwise
/// identical real matrices.
class TridiagonalHermitianOperator {
public:
    TridiagonalHermitianOperator(Grid grid, std::size_t offset, std::vector<double> diag, std::vector<double> hop_abs,
                                 std::vector<cplx> hop_phase, std::optional<Scheme> scheme = std::nullopt,
                                 double alpha = 0.0)
        : grid_(std::move(grid)),
          offset_(offset),
          diag_(std::move(diag)),
          hop_abs_(std::move(hop_abs)),
          hop_phase_(std::move(hop_phase)),
          scheme_(scheme),
          alpha_(alpha) {
        if (diag_.empty()) throw ShapeError("tridiagonal operator needs at least one row");
        if (offset_ + diag_.size() > grid_.size()) throw ShapeError("tridiagonal operator exceeds its grid");
        if (hop_abs_.size() + 1 != diag_.size() || hop_phase_.size() != hop_abs_.size())
            throw ShapeError("off-diagonal band must have one element fewer than the diagonal");
        for (double d : diag_)
            if (!std::isfinite(d)) throw DomainError("non-finite diagonal entry");
        for (std::size_t j = 0; j < hop_abs_.size(); ++j) {
            if (!std::isfinite(hop_abs_[j]) || hop_abs_[j] < 0.0) throw DomainError("invalid hopping magnitude");
            if (!std::isfinite(hop_phase_[j].real()) || !std::isfinite(hop_phase_[j].imag()))
                throw DomainError("non-finite hopping phase");
        }
    }

    /// Operator from explicit bands, placed on an auxiliary grid [0, N+1]
    /// whose interior holds the N rows.
    static TridiagonalHermitianOperator from_bands(std::vector<double> diag, const std::vector<cplx>& offdiag) {
        const std::size_t n = diag.size();
        std::vector<double> mag(offdiag.size());
        std::vector<cplx> phase(offdiag.size());
        for (std::size_t j = 0; j < offdiag.size(); ++j) {
            mag[j] = std::abs(offdiag[j]);
            phase[j] = mag[j] > 0.0 ? offdiag[j] / mag[j] : cplx(1.0, 0.0);
        }
        return TridiagonalHermitianOperator(Grid(0.0, static_cast<double>(n + 1), n + 2), 1, std::move(diag),
                                            std::move(mag), std::move(phase));
    }

    const Grid& grid() const { return grid_; }
    std::size_t offset() const { return offset_; }
    std::size_t size() const { return diag_.size(); }
    std::optional<Scheme> scheme() const { return scheme_; }
    double alpha() const { return alpha_; }

    double diag(std::size_t j) const { return diag_[j]; }
    cplx offdiag(std::size_t j) const { return hop_abs_[j] * hop_phase_[j]; }
    double hop_abs(std::size_t j) const { return hop_abs_[j]; }
    cplx hop_phase(std::size_t j) const { return hop_phase_[j]; }
    std::span<const double> diag_band() const { return diag_; }
    std::span<const double> hop_abs_band() const { return hop_abs_; }
    std::span<const cplx> hop_phase_band() const { return hop_phase_; }

    /// y = H x for a vector over the operator's rows.
    std::vector<cplx> apply(std::span<const cplx> x) const {
        if (x.size() != size()) throw ShapeError("operator/vector size mismatch");
        std::vector<cplx> y(size());
        for (std::size_t j = 0; j < size(); ++j) {
            cplx s = diag_[j] * x[j];
            if (j + 1 < size()) s += offdiag(j) * x[j + 1];
            if (j > 0) s += std::conj(offdiag(j - 1)) * x[j - 1];
            y[j] = s;
        }
        return y;
    }

    /// Largest absolute row sum, an upper bound on the spectral radius.
    double norm_bound() const {
        double b = 0.0;
        for (std::size_t j = 0; j < size(); ++j) {
            double r = std::abs(diag_[j]);
            if (j + 1 < size()) r += hop_abs_[j];
            if (j > 0) r += hop_abs_[j - 1];
            b = std::max(b, r);
        }
        return b;
    }

    Eigen::SparseMatrix<cplx, Eigen::RowMajor> to_sparse() const {
        std::vector<Eigen::Triplet<cplx>> t;
        t.reserve(3 * size());
        for (std::size_t j = 0; j < size(); ++j) {
            const auto r = static_cast<Eigen::Index>(j);
            t.emplace_back(r, r, cplx(diag_[j], 0.0));
            if (j + 1 < size()) {
                t.emplace_back(r, r + 1, offdiag(j));
                t.emplace_back(r + 1, r, std::conj(offdiag(j)));
            }
        }
        Eigen::SparseMatrix<cplx, Eigen::RowMajor> m(static_cast<Eigen::Index>(size()),
                                                     static_cast<Eigen::Index>(size()));
        m.setFromTriplets(t.begin(), t.end());
        return m;
    }

    Eigen::MatrixXcd to_dense() const { return Eigen::MatrixXcd(to_sparse()); }

private:
    Grid grid_;
    std::size_t offset_;
    std::vector<double> diag_;
    std::vector<double> hop_abs_;
    std::vector<cplx> hop_phase_;
    std::optional<Scheme> scheme_;
    double alpha_;
};

using SparseMatrix = Eigen::SparseMatrix<cplx, Eigen::RowMajor>;

/// Sparse operator on the full grid (offset 0, n rows) or on its interior
/// (offset 1, n-2 rows). When `hermitian` is set, max|M - M^dagger| <= 1e-12
/// (relative to the largest entry) is checked on construction.
class GridOperator {
public:
    GridOperator(Grid grid, SparseMatrix matrix, bool hermitian, std::size_t offset = 0)
        : grid_(std::move(grid)), matrix_(std::move(matrix)), hermitian_(hermitian), offset_(offset) {
        const auto n = static_cast<Eigen::Index>(grid_.size() - 2 * offset_);
        if (offset_ > 1 || matrix_.rows() != n || matrix_.cols() != n)
            throw ShapeError("grid operator dimensions do not match its grid");
        double scale = 0.0;
        for (Eigen::Index k = 0; k < matrix_.outerSize(); ++k)
            for (SparseMatrix::InnerIterator it(matrix_, k); it; ++it) {
                if (!std::isfinite(it.value().real()) || !std::isfinite(it.value().imag()))
                    throw DomainError("non-finite operator entry");
                scale = std::max(scale, std::abs(it.value()));
            }
        if (hermitian_) {
            const SparseMatrix diff = matrix_ - SparseMatrix(matrix_.adjoint());
            double worst = 0.0;
            for (Eigen::Index k = 0; k < diff.outerSize(); ++k)
                for (SparseMatrix::InnerIterator it(diff, k); it; ++it) worst = std::max(worst, std::abs(it.value()));
            if (worst > 1e-12 * std::max(1.0, scale))
                throw InvariantError("operator flagged Hermitian but max|M - M^dagger| = " + std::to_string(worst));
        }
    }

    const Grid& grid() const { return grid_; }
    const SparseMatrix& matrix() const { return matrix_; }
    bool hermitian() const { return hermitian_; }
    std::size_t offset() const { return offset_; }
    std::size_t size() const { return static_cast<std::size_t>(matrix_.rows()); }

    std::vector<cplx> apply(std::span<const cplx> x) const {
        if (x.size() != size()) throw ShapeError("operator/vector size mismatch");
        const Eigen::Map<const Eigen::VectorXcd> xv(x.data(), static_cast<Eigen::Index>(x.size()));
        const Eigen::VectorXcd y = matrix_ * xv;
        return {y.data(), y.data() + y.size()};
    }

    Eigen::MatrixXcd to_dense() const { return Eigen::MatrixXcd(matrix_); }

private:
    Grid grid_;
    SparseMatrix matrix_;
    bool hermitian_;
    std::size_t offset_;
};

namespace detail {

using Triplets = std::vector<Eigen::Triplet<cplx>>;

inline SparseMatrix build(std::size_t n, const Triplets& t) {
    SparseMatrix m(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
    m.setFromTriplets(t.begin(), t.end());
    return m;
}

// Second-order first derivative: antisymmetric central difference inside,
// one-sided three-point stencils on the two end rows. Entries are scaled by `c`.
inline void add_first_derivative(const Grid& g, cplx c, Triplets& t) {
    const auto n = static_cast<Eigen::Index>(g.size());
    const double s = 1.0 / (2.0 * g.h());
    t.emplace_back(0, 0, c * (-3.0 * s));
    t.emplace_back(0, 1, c * (4.0 * s));
    t.emplace_back(0, 2, c * (-1.0 * s));
    for (Eigen::Index j = 1; j + 1 < n; ++j) {
        t.emplace_back(j, j + 1, c * s);
        t.emplace_back(j, j - 1, c * (-s));
    }
    t.emplace_back(n - 1, n - 1, c * (3.0 * s));
    t.emplace_back(n - 1, n - 2, c * (-4.0 * s));
    t.emplace_back(n - 1, n - 3, c * (1.0 * s));
}

inline void add_diagonal(const Grid& g, std::span<const cplx> values, Triplets& t) {
    for (std::size_t j = 0; j < g.size(); ++j) {
        const auto r = static_cast<Eigen::Index>(j);
        t.emplace_back(r, r, values[j]);
    }
}

}  // namespace detail

/// Rows and columns 1..n-2 of a full-grid operator (Dirichlet restriction).
inline GridOperator restrict_interior(const GridOperator& op, bool hermitian) {
    if (op.offset() != 0) throw ShapeError("operator is already restricted to the interior");
    const auto n = static_cast<Eigen::Index>(op.size());
    const SparseMatrix inner = op.matrix().block(1, 1, n - 2, n - 2);
    return GridOperator(op.grid(), inner, hermitian, 1);
}

/// p = -i(D + i alpha) = -i D + alpha I.
inline GridOperator momentum_matrix(const Grid& g, double alpha) {
    detail::Triplets t;
    detail::add_first_derivative(g, cplx(0.0, -1.0), t);
    const std::vector<cplx> shift(g.size(), cplx(alpha, 0.0));
    detail::add_diagonal(g, shift, t);
    return GridOperator(g, detail::build(g.size(), t), false);
}

/// Momentum restricted to interior points, where it is Hermitian.
inline GridOperator interior_momentum(const Grid& g, double alpha) {
    return restrict_interior(momentum_matrix(g, alpha), true);
}

inline GridOperator position_matrix(const Grid& g) {
    detail::Triplets t;
    std::vector<cplx> x(g.size());
    for (std::size_t j = 0; j < g.size(); ++j) x[j] = g.x(j);
    detail::add_diagonal(g, x, t);
    return GridOperator(g, detail::build(g.size(), t), true);
}

/// Discrete modified Hamiltonian on the interior points.
inline TridiagonalHermitianOperator hamiltonian(const Grid& g, const ModelParams& params, Scheme scheme) {
    params.validate();
    const double m = params.m;
    const double a = params.alpha;
    const double h = g.h();
    const std::vector<double> v = potential_on(g, params);
    const std::size_t rows = g.size() - 2;

    std::vector<double> diag(rows);
    double mag = 0.0;
    cplx phase;
    if (scheme == Scheme::NaiveStencil) {
        // offdiag = -1/(2mh^2) - i alpha/(2mh); diag adds alpha^2/(2m).
        const double re = -1.0 / (2.0 * m * h * h);
        const double im = -a / (2.0 * m * h);
        mag = std::hypot(re, im);
        phase = cplx(re / mag, im / mag);
        for (std::size_t j = 0; j < rows; ++j) diag[j] = 1.0 / (m * h * h) + a * a / (2.0 * m) + v[j + 1];
    } else {
        // offdiag = -e^{i alpha h}/(2mh^2).
        mag = 1.0 / (2.0 * m * h * h);
        phase = cplx(-std::cos(a * h), -std::sin(a * h));
        for (std::size_t j = 0; j < rows; ++j) diag[j] = 1.0 / (m * h * h) + v[j + 1];
    }
    return TridiagonalHermitianOperator(g, 1, std::move(diag), std::vector<double>(rows - 1, mag),
                                        std::vector<cplx>(rows - 1, phase), scheme, a);
}

struct LadderPair {
    GridOperator a_minus;
    GridOperator a_plus;
};

/// a_{+-} = (1/sqrt(2 m omega)) (-+(D + i alpha) + m omega X).
inline LadderPair ladder(const Grid& g, double m, double omega, double alpha) {
    if (!(m > 0.0) || !(omega > 0.0)) throw DomainError("ladder operators need m > 0 and omega > 0");
    const double c = 1.0 / std::sqrt(2.0 * m * omega);
    std::vector<cplx> minus_diag(g.size()), plus_diag(g.size());
    for (std::size_t j = 0; j < g.size(); ++j) {
        const double mwx = m * omega * g.x(j);
        minus_diag[j] = c * cplx(mwx, alpha);
        plus_diag[j] = c * cplx(mwx, -alpha);
    }
    detail::Triplets tm, tp;
    detail::add_first_derivative(g, cplx(c, 0.0), tm);
    detail::add_diagonal(g, minus_diag, tm);
    detail::add_first_derivative(g, cplx(-c, 0.0), tp);
    detail::add_diagonal(g, plus_diag, tp);
    return {GridOperator(g, detail::build(g.size(), tm), false), GridOperator(g, detail::build(g.size(), tp), false)};
}

/// (P psi)_j = psi_{n-1-j}; needs a grid symmetric about the origin.
inline GridOperator parity_matrix(const Grid& g) {
    if (!g.symmetric()) throw SymmetryError("parity needs a grid symmetric about x = 0");
    detail::Triplets t;
    const auto n = static_cast<Eigen::Index>(g.size());
    for (Eigen::Index j = 0; j < n; ++j) t.emplace_back(j, n - 1 - j, cplx(1.0, 0.0));
    return GridOperator(g, detail::build(g.size(), t), true);
}

/// U = diag(e^{-i alpha x_j}).
inline GridOperator gauge_unitary(const Grid& g, double alpha) {
    detail::Triplets t;
    std::vector<cplx> u(g.size());
    for (std::size_t j = 0; j < g.size(); ++j) u[j] = std::polar(1.0, -alpha * g.x(j));
    detail::add_diagonal(g, u, t);
    return GridOperator(g, detail::build(g.size(), t), alpha == 0.0);
}

/// Interior samples psi_1..psi_{n-2} of a full-grid wavefunction, matching a
/// Dirichlet operator's rows.
inline std::vector<cplx> interior(const WaveFunction& wf) {
    return {wf.amp.begin() + 1, wf.amp.end() - 1};
}

/// Full-grid wavefunction from operator-row values; points outside the rows are zero.
inline WaveFunction embed(const TridiagonalHermitianOperator& op, std::span<const cplx> rows) {
    if (rows.size() != op.size()) throw ShapeError("row vector does not match operator");
    std::vector<cplx> amp(op.grid().size(), cplx{});
    std::copy(rows.begin(), rows.end(), amp.begin() + static_cast<std::ptrdiff_t>(op.offset()));
    return WaveFunction(op.grid(), std::move(amp));
}

}  // namespace lvse
