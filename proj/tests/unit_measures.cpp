#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <vector>

#include "qcorr/measures.hpp"
#include "qcorr/states.hpp"
#include "test_utils.hpp"

using namespace qcorr;

namespace {

/// Brute-force oracle sharing no code with guo_D: builds every block by
/// explicit index sums and every commutator norm by matrix arithmetic.
double oracle_D(const BipartiteState& s, const ComplexMatrix& u) {
    const std::size_t dA = s.dA, dB = s.dB;
    std::vector<ComplexMatrix> blocks;
    blocks.reserve(dB * dB);
    for (std::size_t i = 0; i < dB; ++i) {
        for (std::size_t j = 0; j < dB; ++j) {
            ComplexMatrix blk(dA, dA);
            for (std::size_t a = 0; a < dA; ++a) {
                for (std::size_t ap = 0; ap < dA; ++ap) {
                    cdouble acc(0.0);
                    for (std::size_t b = 0; b < dB; ++b) {
                        for (std::size_t bp = 0; bp < dB; ++bp) {
                            acc += std::conj(u(b, i)) * s.rho(a * dB + b, ap * dB + bp) *
                                   u(bp, j);
                        }
                    }
                    blk(a, ap) = acc;
                }
            }
            blocks.push_back(blk);
        }
    }
    double total = 0.0;
    for (std::size_t x = 0; x < blocks.size(); ++x) {
        for (std::size_t y = x + 1; y < blocks.size(); ++y) {
            const ComplexMatrix comm = blocks[x] * blocks[y] - blocks[y] * blocks[x];
            double sq = 0.0;
            for (std::size_t r = 0; r < dA; ++r) {
                for (std::size_t c = 0; c < dA; ++c) sq += std::norm(comm(r, c));
            }
            total += std::sqrt(sq);
        }
    }
    return total;
}

ComplexMatrix operator-(const ComplexMatrix& a, const ComplexMatrix& b) {
    ComplexMatrix out = a;
    out -= b;
    return out;
}

const double kBellValue = 1.0 + std::sqrt(2.0) / 4.0;

}  // namespace

TEST_CASE("basis_unitary_2 produces unitaries with the stated entries") {
    const double th = 0.7, ph = 1.9, ps = 4.2;
    const ComplexMatrix u = basis_unitary_2(th, ph, ps);
    CHECK(unitarity_defect(u) < 1e-14);
    CHECK(std::abs(u(0, 0) - std::cos(th) * std::exp(cdouble(0.0, ph))) < 1e-15);
    CHECK(std::abs(u(0, 1) - std::sin(th) * std::exp(cdouble(0.0, ps))) < 1e-15);
    CHECK(std::abs(u(1, 0) + std::sin(th) * std::exp(cdouble(0.0, -ps))) < 1e-15);
    CHECK(std::abs(u(1, 1) - std::cos(th) * std::exp(cdouble(0.0, -ph))) < 1e-15);

    CHECK(basis_unitary_2(0.0, 0.0, 0.0).max_abs_diff(ComplexMatrix::identity(2)) == 0.0);
}

TEST_CASE("block_decompose of the Bell state in the computational basis") {
    const BlockDecomposition bd =
        block_decompose(testutil::bell_phi_plus(), ComplexMatrix::identity(2));
    REQUIRE(bd.blocks.size() == 4);

    // A_00 = diag(1/2, 0), A_01 = |0><1|/2, A_10 = |1><0|/2, A_11 = diag(0, 1/2).
    CHECK(std::abs(bd.block(0, 0)(0, 0) - cdouble(0.5)) < 1e-15);
    CHECK(std::abs(bd.block(0, 0)(1, 1)) < 1e-15);
    CHECK(std::abs(bd.block(0, 1)(0, 1) - cdouble(0.5)) < 1e-15);
    CHECK(std::abs(bd.block(0, 1)(1, 0)) < 1e-15);
    CHECK(std::abs(bd.block(1, 0)(1, 0) - cdouble(0.5)) < 1e-15);
    CHECK(std::abs(bd.block(1, 1)(1, 1) - cdouble(0.5)) < 1e-15);
}

TEST_CASE("block sums reconstruct partial traces") {
    Rng rng(301);
    const BipartiteState s = random_mixed_state(rng, 2, 3);
    const ComplexMatrix u = random_unitary(rng, 3);
    const BlockDecomposition bd = block_decompose(s, u);

    // sum_i A_ii = rho_A regardless of the basis.
    ComplexMatrix diag_sum(2, 2);
    for (std::size_t i = 0; i < 3; ++i) diag_sum += bd.block(i, i);
    CHECK(diag_sum.max_abs_diff(partial_trace(s.rho, 2, 3, Subsystem::A)) < 1e-13);

    // Tr A_ij = <i'| rho_B |j'> with |i'> = U|i>.
    const ComplexMatrix rho_b = partial_trace(s.rho, 2, 3, Subsystem::B);
    const ComplexMatrix rotated = dagger(u) * rho_b * u;
    for (std::size_t i = 0; i < 3; ++i) {
        for (std::size_t j = 0; j < 3; ++j) {
            CHECK(std::abs(bd.block(i, j).trace() - rotated(i, j)) < 1e-13);
        }
    }
}

TEST_CASE("block_decompose in basis U equals computational blocks of the rotated state") {
    Rng rng(307);
    const BipartiteState s = random_mixed_state(rng, 2, 2);
    const ComplexMatrix u = random_unitary(rng, 2);
    const ComplexMatrix lifted = kron(ComplexMatrix::identity(2), dagger(u));
    const BipartiteState rotated{2, 2, lifted * s.rho * dagger(lifted)};

    const BlockDecomposition in_u = block_decompose(s, u);
    const BlockDecomposition comp = block_decompose(rotated, ComplexMatrix::identity(2));
    for (std::size_t k = 0; k < 4; ++k) {
        CHECK(in_u.blocks[k].max_abs_diff(comp.blocks[k]) < 1e-13);
    }
}

TEST_CASE("block_decompose validates its inputs") {
    CHECK_THROWS_AS(block_decompose(testutil::bell_phi_plus(), ComplexMatrix::identity(3)),
                    DimensionError);
    ComplexMatrix skew = ComplexMatrix::identity(2);
    skew(0, 0) = 1.1;
    CHECK_THROWS_AS(block_decompose(testutil::bell_phi_plus(), skew), ValidityError);
}

TEST_CASE("guo_D of the Bell state is 1 + sqrt(2)/4") {
    const MeasureResult fast = guo_D(testutil::bell_phi_plus());
    const MeasureResult slow = guo_D(testutil::bell_phi_plus(), false);
    CHECK(fast.value == doctest::Approx(kBellValue).epsilon(1e-13));
    CHECK(slow.value == doctest::Approx(kBellValue).epsilon(1e-13));
    CHECK(fast.pair_count == 6);
}

TEST_CASE("guo_D agrees with the brute-force oracle") {
    Rng rng(311);
    struct Dims {
        std::size_t dA, dB;
    };
    for (const Dims d : {Dims{2, 2}, Dims{2, 3}, Dims{3, 2}}) {
        for (int trial = 0; trial < 25; ++trial) {
            const BipartiteState s = random_mixed_state(rng, d.dA, d.dB);
            const ComplexMatrix u = random_unitary(rng, d.dB);
            const double expected = oracle_D(s, u);
            CHECK(std::abs(guo_D(s, u, true).value - expected) < 1e-11);
            CHECK(std::abs(guo_D(s, u, false).value - expected) < 1e-11);
        }
    }
}

TEST_CASE("fast and slow paths agree to 1e-12") {
    Rng rng(313);
    double worst = 0.0;
    for (int trial = 0; trial < 300; ++trial) {
        const BipartiteState s = random_mixed_state(rng, 2, 2);
        const ComplexMatrix u = random_unitary(rng, 2);
        worst = std::max(worst,
                         std::abs(guo_D(s, u, true).value - guo_D(s, u, false).value));
    }
    CHECK(worst < 1e-12);
}

TEST_CASE("guo_D vanishes on product and classical-quantum states") {
    Rng rng(317);
    const BipartiteState prod{
        2, 2, kron(random_mixed_state(rng, 1, 2).rho, random_mixed_state(rng, 1, 2).rho)};
    CHECK(guo_D(prod).value < 1e-13);
    CHECK(guo_D(prod, random_unitary(rng, 2)).value < 1e-13);

    // Classical on A kills every commutator in every B-basis.
    for (int trial = 0; trial < 10; ++trial) {
        const BipartiteState cq = random_classical_quantum(rng, 2, 2);
        CHECK(guo_D(cq).value < 1e-13);
        CHECK(guo_D(cq, random_unitary(rng, 2)).value < 1e-13);
    }
    const BipartiteState cq3 = random_classical_quantum(rng, 2, 3);
    CHECK(guo_D(cq3, random_unitary(rng, 3)).value < 1e-13);
}

TEST_CASE("guo_D is invariant under A-local unitaries and column rephasing") {
    Rng rng(331);
    const BipartiteState s = random_mixed_state(rng, 2, 2);
    const ComplexMatrix u = random_unitary(rng, 2);
    const double base = guo_D(s, u).value;

    const ComplexMatrix v = random_unitary(rng, 2);
    const ComplexMatrix lifted = kron(v, ComplexMatrix::identity(2));
    const BipartiteState moved{2, 2, lifted * s.rho * dagger(lifted)};
    CHECK(std::abs(guo_D(moved, u).value - base) < 1e-12);

    ComplexMatrix rephased = u;
    const cdouble ph0 = std::exp(cdouble(0.0, 1.234));
    const cdouble ph1 = std::exp(cdouble(0.0, -0.777));
    for (std::size_t r = 0; r < 2; ++r) {
        rephased(r, 0) *= ph0;
        rephased(r, 1) *= ph1;
    }
    CHECK(std::abs(guo_D(s, rephased).value - base) < 1e-12);
}

TEST_CASE("bell_diagonal_D matches guo_D on Bell-diagonal states") {
    CHECK(bell_diagonal_D({{1.0, -1.0, 1.0}}) == doctest::Approx(kBellValue).epsilon(1e-13));
    CHECK(bell_diagonal_D({{0.0, 0.0, 0.0}}) == 0.0);

    Rng rng(337);
    for (int trial = 0; trial < 50; ++trial) {
        const BellDiagonalCoeffs c = random_bell_diagonal(rng);
        const double closed = bell_diagonal_D(c);
        const double generic = guo_D(bell_diagonal_state(c)).value;
        CHECK(std::abs(closed - generic) < 1e-12);
    }
    CHECK_THROWS_AS(bell_diagonal_D({{1.0, 1.0, 1.0}}), ValidityError);
}

TEST_CASE("minimize_d never exceeds the computational-basis value") {
    Rng rng(347);
    for (int trial = 0; trial < 6; ++trial) {
        const BipartiteState s = random_mixed_state(rng, 2, 2);
        const MinimizationReport rep = minimize_d(s);
        CHECK(rep.d_value <= guo_D(s).value + 1e-12);
        // The reported basis reproduces the reported value.
        CHECK(std::abs(guo_D(s, rep.optimal_basisU).value - rep.d_value) < 1e-10);
        CHECK(rep.evaluations > 0);
    }
}

TEST_CASE("a B-rotation cannot fake correlations on a classical state") {
    // Blocks of a classical-on-A state are combinations of one commuting
    // projector family, so the measure vanishes in every basis.
    Rng rng(349);
    const BipartiteState cq = random_classical_quantum(rng, 2, 2);
    const ComplexMatrix v = random_unitary(rng, 2);
    const ComplexMatrix lifted = kron(ComplexMatrix::identity(2), v);
    const BipartiteState rotated{2, 2, lifted * cq.rho * dagger(lifted)};
    CHECK(guo_D(rotated).value < 1e-13);
    CHECK(minimize_d(rotated).d_value < 1e-13);
}

TEST_CASE("minimize_d lower-bounds the measure over sampled bases") {
    Rng rng(383);
    const BipartiteState s = random_mixed_state(rng, 2, 2);
    const double d_min = minimize_d(s).d_value;
    for (int trial = 0; trial < 50; ++trial) {
        CHECK(d_min <= guo_D(s, random_unitary(rng, 2)).value + 1e-12);
    }
}

TEST_CASE("minimize_d on a maximally entangled state changes nothing") {
    // B-side rotations of |Phi+> are equivalent to A-side rotations, which
    // leave the measure invariant, so min = fixed-basis value exactly.
    const MinimizationReport rep = minimize_d(testutil::bell_phi_plus());
    CHECK(rep.d_value == doctest::Approx(kBellValue).epsilon(1e-10));
}

TEST_CASE("minimize_d short-circuits when the fixed basis already vanishes") {
    Rng rng(353);
    const BipartiteState cq = random_classical_quantum(rng, 2, 2);
    const MinimizationReport rep = minimize_d(cq);
    CHECK(rep.d_value < 1e-14);
    CHECK(rep.converged);
    CHECK(rep.optimal_basisU.max_abs_diff(ComplexMatrix::identity(2)) == 0.0);
}

TEST_CASE("minimize_d is invariant under B-local unitaries") {
    Rng rng(359);
    const BipartiteState s = random_mixed_state(rng, 2, 2);
    const double base = minimize_d(s).d_value;

    const ComplexMatrix v = random_unitary(rng, 2);
    const ComplexMatrix lifted = kron(ComplexMatrix::identity(2), v);
    const BipartiteState moved{2, 2, lifted * s.rho * dagger(lifted)};
    CHECK(std::abs(minimize_d(moved).d_value - base) < 1e-7);
}

TEST_CASE("minimize_d is deterministic and thread-count independent") {
    Rng rng(367);
    const BipartiteState s = random_mixed_state(rng, 2, 2);
    const MinimizationReport r1 = minimize_d(s);
    const MinimizationReport r2 = minimize_d(s);
    CHECK(r1.d_value == r2.d_value);
    CHECK(r1.optimal_basisU.max_abs_diff(r2.optimal_basisU) == 0.0);
    CHECK(r1.evaluations == r2.evaluations);

    MinimizerConfig serial;
    serial.parallel = false;
    const MinimizationReport r3 = minimize_d(s, serial);
    CHECK(r3.d_value == r1.d_value);
    CHECK(r3.optimal_basisU.max_abs_diff(r1.optimal_basisU) == 0.0);
}

TEST_CASE("minimize_d handles dB = 3 via stochastic descent") {
    Rng rng(373);
    const BipartiteState s = random_mixed_state(rng, 2, 3);
    const double d_comp = guo_D(s).value;

    MinimizerConfig cfg;
    cfg.restarts = 8;
    cfg.descent_iters = 150;
    const MinimizationReport rep = minimize_d(s, cfg);
    CHECK(rep.d_value <= d_comp + 1e-12);
    CHECK(std::abs(guo_D(s, rep.optimal_basisU).value - rep.d_value) < 1e-9);

    const MinimizationReport again = minimize_d(s, cfg);
    CHECK(again.d_value == rep.d_value);

    // The descent result lower-bounds the measure over sampled bases.
    for (int trial = 0; trial < 20; ++trial) {
        CHECK(rep.d_value <= guo_D(s, random_unitary(rng, 3)).value + 1e-9);
    }
}

TEST_CASE("minimize_d validates its configuration") {
    MinimizerConfig bad;
    bad.grid_points = 1;
    CHECK_THROWS_AS(minimize_d(testutil::bell_phi_plus(), bad), ConfigError);

    BipartiteState junk{2, 2, ComplexMatrix::identity(4)};
    CHECK_THROWS_AS(minimize_d(junk), ValidityError);
}

TEST_CASE("history records strict improvements") {
    Rng rng(379);
    const BipartiteState s = random_mixed_state(rng, 2, 2);
    const MinimizationReport rep = minimize_d(s);
    REQUIRE(!rep.history.empty());
    for (std::size_t k = 1; k < rep.history.size(); ++k) {
        CHECK(rep.history[k].value < rep.history[k - 1].value);
    }
    CHECK(rep.history.back().value == rep.d_value);
}
