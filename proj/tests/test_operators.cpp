#include <gtest/gtest.h>

#include <cmath>

#include "lvse/analytic.hpp"
#include "lvse/observables.hpp"
#include "lvse/operators.hpp"

using namespace lvse;

namespace {

double max_abs(const Eigen::MatrixXcd& m) { return m.cwiseAbs().maxCoeff(); }

}  // namespace

TEST(Momentum, ConstantVectorGivesAlpha) {
    const Grid g = make_grid(-2, 3, 51);
    for (double alpha : {0.0, 0.1, -1.3}) {
        const auto p = momentum_matrix(g, alpha);
        const auto y = p.apply(std::vector<cplx>(g.size(), 1.0));
        for (std::size_t j = 0; j < g.size(); ++j) EXPECT_NEAR(std::abs(y[j] - alpha), 0.0, 1e-12);
    }
}

TEST(Momentum, PlaneWaveEigenvalueOfCentralDifference) {
    const Grid g = make_grid(0, 10, 201);
    const double kappa = 1.0;
    const double h = g.h();
    std::vector<cplx> wave(g.size());
    for (std::size_t j = 0; j < g.size(); ++j) wave[j] = std::polar(1.0, kappa * g.x(j));
    for (double alpha : {0.0, 0.1}) {
        const auto y = momentum_matrix(g, alpha).apply(wave);
        for (std::size_t j = 1; j + 1 < g.size(); ++j)
            EXPECT_LE(std::abs(y[j] - (std::sin(kappa * h) / h + alpha) * wave[j]), 1e-12);
    }
}

TEST(Momentum, ContinuumLimitOfShiftedEigenvalue) {
    double previous = INFINITY;
    for (std::size_t n : {101u, 201u, 401u, 801u}) {
        const Grid g = make_grid(0, 10, n);
        std::vector<cplx> wave(g.size());
        for (std::size_t j = 0; j < g.size(); ++j) wave[j] = std::polar(1.0, g.x(j));
        const auto y = momentum_matrix(g, 0.1).apply(wave);
        const double err = std::abs(y[n / 2] / wave[n / 2] - 1.1);
        EXPECT_LT(err, previous / 3.5);
        previous = err;
    }
    EXPECT_LT(previous, 3e-5);  // sin(h)/h - 1 ~ h^2/6 at h = 0.0125
}

TEST(Momentum, OneSidedEndpointsExactForQuadratics) {
    const Grid g = make_grid(-1, 2, 31);
    std::vector<cplx> f(g.size());
    for (std::size_t j = 0; j < g.size(); ++j) f[j] = g.x(j) * g.x(j);
    const auto y = momentum_matrix(g, 0.0).apply(f);
    // -i d/dx x^2 = -2 i x
    EXPECT_LE(std::abs(y.front() - cplx(0, -2 * g.x(0))), 1e-12);
    EXPECT_LE(std::abs(y.back() - cplx(0, -2 * g.x(30))), 1e-12);
}

TEST(Momentum, InteriorRestrictionIsHermitian) {
    const Grid g = make_grid(0, 1, 41);
    const auto p = interior_momentum(g, 0.7);
    EXPECT_TRUE(p.hermitian());
    const auto d = p.to_dense();
    EXPECT_EQ(max_abs(d - d.adjoint()), 0.0);
    EXPECT_FALSE(momentum_matrix(g, 0.7).hermitian());
}

TEST(Hamiltonian, SchemesCoincideAtZeroAlpha) {
    const Grid g = make_grid(-6, 6, 121);
    const auto params = ModelParams::harmonic(1.3, 0.0, 0.9);
    const auto naive = hamiltonian(g, params, Scheme::NaiveStencil);
    const auto exact = hamiltonian(g, params, Scheme::GaugeExact);
    EXPECT_EQ(max_abs(naive.to_dense() - exact.to_dense()), 0.0);
    const double h = g.h();
    for (std::size_t j = 0; j < naive.size(); ++j) {
        const double x = g.x(j + 1);
        EXPECT_NEAR(naive.diag(j), 1 / (1.3 * h * h) + 0.5 * 1.3 * 0.81 * x * x, 1e-10);
    }
    for (std::size_t j = 0; j + 1 < naive.size(); ++j) EXPECT_EQ(naive.offdiag(j), cplx(-1 / (2 * 1.3 * h * h), 0.0));
}

TEST(Hamiltonian, NaiveStencilEntries) {
    const Grid g = make_grid(0, 1, 11);  // h = 0.1
    const auto h = hamiltonian(g, ModelParams::free(1.0, 0.1), Scheme::NaiveStencil);
    EXPECT_EQ(h.size(), 9u);
    EXPECT_LE(std::abs(h.offdiag(3) - cplx(-50.0, -0.5)), 1e-12);
    EXPECT_NEAR(h.diag(3), 100.005, 1e-11);
}

TEST(Hamiltonian, GaugeExactEntries) {
    const Grid g = make_grid(0, 1, 11);
    const auto h = hamiltonian(g, ModelParams::free(1.0, 0.1), Scheme::GaugeExact);
    EXPECT_LE(std::abs(h.offdiag(2) - (-50.0 * std::exp(cplx(0, 0.01)))), 1e-12);
    EXPECT_NEAR(std::abs(h.offdiag(2)), 50.0, 1e-12);
    const auto h0 = hamiltonian(g, ModelParams::free(1.0, 0.0), Scheme::GaugeExact);
    EXPECT_EQ(h.hop_abs(2), h0.hop_abs(2));
    EXPECT_NEAR(h.diag(0), 100.0, 1e-11);
}

TEST(Hamiltonian, StructurallyHermitian) {
    const Grid g = make_grid(-4, 4, 61);
    for (auto scheme : {Scheme::NaiveStencil, Scheme::GaugeExact})
        for (double alpha : {0.0, 0.1, 2.0, -0.7}) {
            const auto m = hamiltonian(g, ModelParams::harmonic(1, alpha, 1), scheme).to_dense();
            EXPECT_EQ(max_abs(m - m.adjoint()), 0.0);
            EXPECT_EQ(m.diagonal().imag().cwiseAbs().maxCoeff(), 0.0);
        }
}

TEST(Hamiltonian, RejectsBadInput) {
    const Grid g = make_grid(0, 10, 11);
    ModelParams bad{0.0, 0.1, potential::Free{}};
    EXPECT_THROW(hamiltonian(g, bad, Scheme::NaiveStencil), DomainError);
    EXPECT_THROW(hamiltonian(make_grid(0, 9, 11), ModelParams::box(1, 0, 10), Scheme::GaugeExact), DomainError);
}

TEST(Hamiltonian, TabulatedPotential) {
    const Grid g = make_grid(0, 1, 6);
    ModelParams p{1.0, 0.0, potential::Tabulated{{9, 1, 2, 3, 4, 9}}};
    const auto h = hamiltonian(g, p, Scheme::GaugeExact);
    EXPECT_NEAR(h.diag(0) - h.diag(1), -1.0, 1e-12);
    ModelParams wrong{1.0, 0.0, potential::Tabulated{{1, 2}}};
    EXPECT_THROW(hamiltonian(g, wrong, Scheme::GaugeExact), ShapeError);
}

TEST(Ladder, AdjointOnInteriorRows) {
    const Grid g = make_grid(-5, 5, 81);
    const auto ops = ladder(g, 1.2, 0.7, 0.3);
    const auto am = restrict_interior(ops.a_minus, false).to_dense();
    const auto ap = restrict_interior(ops.a_plus, false).to_dense();
    EXPECT_EQ(max_abs(ap - am.adjoint()), 0.0);
}

TEST(Ladder, InvalidParameters) {
    const Grid g = make_grid(-5, 5, 81);
    EXPECT_THROW(ladder(g, 0, 1, 0), DomainError);
    EXPECT_THROW(ladder(g, 1, -1, 0), DomainError);
}

TEST(Ladder, AnnihilatesGroundStateToSecondOrder) {
    const auto grids = halving_grids(-10, 10, 201, 3);
    for (double alpha : {0.0, 0.1}) {
        const auto measure = measures::annihilation_residual(1, 1, alpha);
        const auto study = convergence_study(measure, grids);
        for (std::size_t i = 0; i < grids.size(); ++i) EXPECT_LE(study.errors[i], 0.5 * study.h[i] * study.h[i]);
        EXPECT_NEAR(study.order, 2.0, 0.2);
    }
}

TEST(Ladder, RaisingGroundGivesFirstExcited) {
    const Grid g = make_grid(-10, 10, 2001);
    const auto ops = ladder(g, 1, 1, 0.0);
    const auto raised = normalize(WaveFunction(g, ops.a_plus.apply(analytic::ho_ground(1, 1, 0, g).amp)));
    const auto target = analytic::ho_state(1, 1, 1, 0, g);
    double err = 0;
    for (std::size_t j = 0; j < g.size(); ++j) err = std::max(err, std::abs(raised[j] - target[j]));
    EXPECT_LE(err, 1e-4);
}

TEST(Ladder, CommutatorIsIdentityToSecondOrder) {
    const auto grids = halving_grids(-10, 10, 201, 3);  // h = 0.1, 0.05, 0.025; width 1 >= 10h
    for (double alpha : {0.0, 0.1, 1.0}) {
        const auto study = convergence_study(measures::commutator_residual(1, 1, alpha, 1.0), grids);
        for (std::size_t i = 0; i + 1 < grids.size(); ++i)
            EXPECT_NEAR(study.errors[i] / study.errors[i + 1], 4.0, 0.5);
        EXPECT_LE(study.errors.back(), 1.0 * study.h.back() * study.h.back());
    }
}

TEST(Ladder, FactorizedHamiltonianToSecondOrder) {
    const auto grids = halving_grids(-10, 10, 201, 3);
    for (auto scheme : {Scheme::NaiveStencil, Scheme::GaugeExact}) {
        const auto study = convergence_study(measures::factorization_residual(1, 1, 0.1, 1.0, scheme), grids);
        EXPECT_NEAR(study.order, 2.0, 0.2) << to_string(scheme);
    }
}

TEST(Parity, Involution) {
    const Grid g = make_grid(-3, 3, 31);
    const auto p = parity_matrix(g).to_dense();
    EXPECT_EQ(max_abs(p * p - Eigen::MatrixXcd::Identity(31, 31)), 0.0);
}

TEST(Parity, OddStateFlipsSign) {
    const Grid g = make_grid(-8, 8, 401);
    const auto psi1 = analytic::ho_state(1, 1, 1, 0.0, g);
    const auto flipped = parity_matrix(g).apply(psi1.amp);
    for (std::size_t j = 0; j < g.size(); ++j) EXPECT_EQ(flipped[j], -psi1[j]);
}

TEST(Parity, ConjugationFlipsAlpha) {
    const Grid g = make_grid(-6, 6, 121);
    for (auto scheme : {Scheme::NaiveStencil, Scheme::GaugeExact})
        for (double alpha : {0.0, 0.1, 1.0, -2.2}) {
            const auto r = parity_relation_residual(g, ModelParams::harmonic(1, alpha, 1), scheme);
            EXPECT_EQ(r.relation_residual, 0.0);
            if (alpha == 0.0)
                EXPECT_EQ(r.commutator_norm, 0.0);
            else
                EXPECT_GT(r.commutator_norm, 0.0);
        }
}

TEST(Parity, AsymmetricGridThrows) {
    EXPECT_THROW(parity_matrix(make_grid(0, 10, 11)), SymmetryError);
    EXPECT_THROW(parity_relation_residual(make_grid(-1, 2, 11), ModelParams::free(1, 0.1), Scheme::GaugeExact),
                 SymmetryError);
}

TEST(Gauge, ZeroAlphaIsIdentity) {
    const Grid g = make_grid(-2, 5, 21);
    EXPECT_EQ(max_abs(gauge_unitary(g, 0.0).to_dense() - Eigen::MatrixXcd::Identity(21, 21)), 0.0);
}

TEST(Gauge, PurePhaseAndUnitary) {
    const Grid g = make_grid(-2, 5, 21);
    const auto u = gauge_unitary(g, 0.37).to_dense();
    for (Eigen::Index j = 0; j < 21; ++j) EXPECT_NEAR(std::abs(u(j, j)), 1.0, 1e-15);
    EXPECT_LE(max_abs(u.adjoint() * u - Eigen::MatrixXcd::Identity(21, 21)), 1e-15);
}

TEST(Gauge, SimilarityRemovesAlphaFromGaugeExactScheme) {
    const Grid g = make_grid(-6, 6, 121);
    for (double alpha : {0.1, 1.0, -0.4}) {
        const auto params = ModelParams::harmonic(1, alpha, 1);
        const auto u = restrict_interior(gauge_unitary(g, alpha), false).to_dense();
        const auto h_alpha = hamiltonian(g, params, Scheme::GaugeExact).to_dense();
        const auto h_zero = hamiltonian(g, params.with_alpha(0.0), Scheme::GaugeExact).to_dense();
        const double scale = max_abs(h_zero);
        EXPECT_LE(max_abs(u.adjoint() * h_alpha * u - h_zero), 1e-12 * scale);
    }
}

TEST(GridOperator, HermitianFlagIsChecked) {
    const Grid g = make_grid(0, 1, 3);
    SparseMatrix m(3, 3);
    m.insert(0, 1) = cplx(1, 0);
    EXPECT_THROW(GridOperator(g, m, true), InvariantError);
    EXPECT_NO_THROW(GridOperator(g, m, false));
    EXPECT_THROW(GridOperator(g, SparseMatrix(2, 2), false), ShapeError);
}
