#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <string>
#include <vector>

#include "qcorr/states.hpp"
#include "test_utils.hpp"

using namespace qcorr;

TEST_CASE("validate_state accepts maximally mixed and Bell states") {
    ComplexMatrix mm = ComplexMatrix::identity(4);
    mm *= cdouble(0.25);
    CHECK_NOTHROW(validate_state({2, 2, mm}));
    CHECK_NOTHROW(validate_state(testutil::bell_phi_plus()));
}

TEST_CASE("validate_state names the failing check") {
    ComplexMatrix bad = ComplexMatrix::identity(4);
    bad *= cdouble(0.25);
    bad(0, 1) = cdouble(0.0, 1e-3);  // breaks Hermiticity
    CHECK_THROWS_WITH_AS(validate_state({2, 2, bad}),
                         doctest::Contains("not Hermitian"), ValidityError);

    ComplexMatrix off_trace = ComplexMatrix::identity(4);
    CHECK_THROWS_WITH_AS(validate_state({2, 2, off_trace}), doctest::Contains("trace"),
                         ValidityError);

    ComplexMatrix indefinite(4, 4);
    indefinite(0, 0) = 1.5;
    indefinite(1, 1) = -0.5;
    CHECK_THROWS_WITH_AS(validate_state({2, 2, indefinite}),
                         doctest::Contains("negative eigenvalue"), ValidityError);

    CHECK_THROWS_AS(validate_state({2, 3, ComplexMatrix::identity(4)}), DimensionError);
    CHECK_THROWS_AS(validate_state({0, 2, ComplexMatrix::identity(4)}), DimensionError);
}

TEST_CASE("bell_diagonal_state reproduces the Bell projector at (1,-1,1)") {
    const BipartiteState s = bell_diagonal_state({{1.0, -1.0, 1.0}});
    CHECK(s.rho.max_abs_diff(testutil::bell_phi_plus().rho) < 1e-15);
    CHECK_NOTHROW(validate_state(s));
}

TEST_CASE("bell_diagonal_state marginals are maximally mixed") {
    Rng rng(101);
    ComplexMatrix half = ComplexMatrix::identity(2);
    half *= cdouble(0.5);
    for (int trial = 0; trial < 25; ++trial) {
        const BipartiteState s = bell_diagonal_state(random_bell_diagonal(rng));
        CHECK_NOTHROW(validate_state(s));
        CHECK(partial_trace(s.rho, 2, 2, Subsystem::A).max_abs_diff(half) < 1e-12);
        CHECK(partial_trace(s.rho, 2, 2, Subsystem::B).max_abs_diff(half) < 1e-12);
    }
}

TEST_CASE("bell_diagonal_state rejects triples outside the tetrahedron") {
    // Cube corners with c1*c2*c3 = +1 lie outside (negative eigenvalue).
    CHECK_THROWS_AS(bell_diagonal_state({{1.0, 1.0, 1.0}}), ValidityError);
    CHECK_THROWS_AS(bell_diagonal_state({{-1.0, -1.0, 1.0}}), ValidityError);
    // Bell-state vertices and the centre are fine.
    CHECK_NOTHROW(bell_diagonal_state({{-1.0, -1.0, -1.0}}));
    CHECK_NOTHROW(bell_diagonal_state({{0.0, 0.0, 0.0}}));
    CHECK_NOTHROW(bell_diagonal_state({{1.0, 1.0, -1.0}}));
}

TEST_CASE("classical_quantum_state builds block-diagonal states") {
    Rng rng(103);
    const std::vector<double> probs{0.25, 0.75};
    const std::vector<ComplexMatrix> branches{random_mixed_state(rng, 1, 3).rho,
                                              random_mixed_state(rng, 1, 3).rho};
    const BipartiteState s = classical_quantum_state(probs, branches);
    CHECK(s.dA == 2);
    CHECK(s.dB == 3);
    CHECK_NOTHROW(validate_state(s));

    // Off-diagonal A-blocks vanish, diagonal blocks are p_i * rho_i.
    for (std::size_t a = 0; a < 2; ++a) {
        for (std::size_t ap = 0; ap < 2; ++ap) {
            for (std::size_t b = 0; b < 3; ++b) {
                for (std::size_t bp = 0; bp < 3; ++bp) {
                    const cdouble got = s.rho(a * 3 + b, ap * 3 + bp);
                    const cdouble want =
                        (a == ap) ? probs[a] * branches[a](b, bp) : cdouble(0.0);
                    CHECK(std::abs(got - want) < 1e-15);
                }
            }
        }
    }
}

TEST_CASE("classical_quantum_state with an explicit rotated basis") {
    // Basis {(|0>+|1>)/sqrt2, (|0>-|1>)/sqrt2}.
    const double r = 1.0 / std::sqrt(2.0);
    ComplexMatrix plus(2, 1), minus(2, 1);
    plus(0, 0) = r;
    plus(1, 0) = r;
    minus(0, 0) = r;
    minus(1, 0) = -r;

    ComplexMatrix zero_b(2, 2);
    zero_b(0, 0) = 1.0;
    ComplexMatrix one_b(2, 2);
    one_b(1, 1) = 1.0;

    const BipartiteState s =
        classical_quantum_state({0.5, 0.5}, {plus, minus}, {zero_b, one_b});
    CHECK_NOTHROW(validate_state(s));

    // Marginal on A must be (|+><+| + |-><-|)/2 = I/2.
    ComplexMatrix half = ComplexMatrix::identity(2);
    half *= cdouble(0.5);
    CHECK(partial_trace(s.rho, 2, 2, Subsystem::A).max_abs_diff(half) < 1e-14);

    // Marginal on B is (|0><0| + |1><1|)/2 as well.
    CHECK(partial_trace(s.rho, 2, 2, Subsystem::B).max_abs_diff(half) < 1e-14);
}

TEST_CASE("classical_quantum_state rejects bad probabilities and bases") {
    ComplexMatrix zero_b(2, 2);
    zero_b(0, 0) = 1.0;
    ComplexMatrix e0(2, 1), e1(2, 1);
    e0(0, 0) = 1.0;
    e1(1, 0) = 1.0;

    CHECK_THROWS_WITH_AS(classical_quantum_state({0.6, 0.6}, {e0, e1}, {zero_b, zero_b}),
                         doctest::Contains("sum"), ValidityError);
    CHECK_THROWS_AS(classical_quantum_state({1.2, -0.2}, {e0, e1}, {zero_b, zero_b}),
                    ValidityError);
    CHECK_THROWS_WITH_AS(classical_quantum_state({0.5, 0.5}, {e0, e0}, {zero_b, zero_b}),
                         doctest::Contains("orthonormal"), ValidityError);
    CHECK_THROWS_AS(classical_quantum_state({0.5, 0.5}, {e0}, {zero_b, zero_b}),
                    DimensionError);
}

TEST_CASE("random_pure_state yields rank-one valid states") {
    Rng rng(107);
    for (int trial = 0; trial < 10; ++trial) {
        const BipartiteState s = random_pure_state(rng, 2, 3);
        CHECK_NOTHROW(validate_state(s));
        // Purity Tr(rho^2) = 1 for pure states.
        CHECK(std::abs((s.rho * s.rho).trace().real() - 1.0) < 1e-12);
    }
}

TEST_CASE("random_mixed_state respects the rank argument") {
    Rng rng(109);
    const BipartiteState full = random_mixed_state(rng, 2, 2);
    CHECK_NOTHROW(validate_state(full));
    const auto full_eigs = eig_hermitian(full.rho);
    CHECK(full_eigs.front() > 1e-8);  // full rank, almost surely well separated from 0

    const BipartiteState low = random_mixed_state(rng, 2, 2, 2);
    CHECK_NOTHROW(validate_state(low));
    const auto low_eigs = eig_hermitian(low.rho);
    CHECK(std::abs(low_eigs[0]) < 1e-12);
    CHECK(std::abs(low_eigs[1]) < 1e-12);
    CHECK(low_eigs[3] > 1e-8);
}

TEST_CASE("random_unitary is Haar-like and exactly reproducible") {
    Rng rng(113);
    for (std::size_t d : {2, 4}) {
        const ComplexMatrix u = random_unitary(rng, d);
        CHECK(unitarity_defect(u) < 1e-12);
    }
    const ComplexMatrix a = random_unitary(7u, 3);
    const ComplexMatrix b = random_unitary(7u, 3);
    CHECK(a.max_abs_diff(b) == 0.0);
    const ComplexMatrix c = random_unitary(8u, 3);
    CHECK(c.max_abs_diff(a) > 1e-3);
}

TEST_CASE("random_bell_diagonal stays inside the tetrahedron and covers it") {
    Rng rng(127);
    int sign_buckets[8] = {0};
    for (int trial = 0; trial < 2000; ++trial) {
        const BellDiagonalCoeffs c = random_bell_diagonal(rng);
        CHECK_NOTHROW(bell_diagonal_state(c));
        const int bucket =
            (c.c[0] > 0 ? 1 : 0) | (c.c[1] > 0 ? 2 : 0) | (c.c[2] > 0 ? 4 : 0);
        ++sign_buckets[bucket];
    }
    for (int count : sign_buckets) CHECK(count > 0);
}

TEST_CASE("samplers are deterministic per seed and differ across streams") {
    CHECK(random_mixed_state(42u, 2, 2).rho.max_abs_diff(random_mixed_state(42u, 2, 2).rho) ==
          0.0);
    CHECK(random_mixed_state(42u, 2, 2).rho.max_abs_diff(random_mixed_state(43u, 2, 2).rho) >
          1e-3);

    Rng s0 = Rng::substream(42u, 0);
    Rng s1 = Rng::substream(42u, 1);
    CHECK(Rng::substream_seed(42u, 0) != Rng::substream_seed(42u, 1));
    CHECK(random_mixed_state(s0, 2, 2).rho.max_abs_diff(random_mixed_state(s1, 2, 2).rho) >
          1e-3);

    const BipartiteState cq = random_classical_quantum(5u, 3, 2);
    CHECK(cq.dA == 3);
    CHECK(cq.dB == 2);
    CHECK_NOTHROW(validate_state(cq));
    CHECK(cq.rho.max_abs_diff(random_classical_quantum(5u, 3, 2).rho) == 0.0);
}

TEST_CASE("rng gaussian moments are sane") {
    Rng rng(131);
    double sum = 0.0, sum_sq = 0.0;
    const int n = 200000;
    for (int i = 0; i < n; ++i) {
        const double g = rng.gaussian();
        sum += g;
        sum_sq += g * g;
    }
    CHECK(std::abs(sum / n) < 0.02);
    CHECK(std::abs(sum_sq / n - 1.0) < 0.02);
}
