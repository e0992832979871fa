#include "qcorr/states.hpp"

#include <cmath>
#include <numeric>
#include <string>

namespace qcorr {

void validate_state(const BipartiteState& state) {
    const std::size_t d = state.dA * state.dB;
    if (state.dA < 1 || state.dB < 1) {
        throw DimensionError("state: subsystem dimensions must be positive");
    }
    if (state.rho.rows() != d || state.rho.cols() != d) {
        throw DimensionError("state: matrix is " + std::to_string(state.rho.rows()) + "x" +
                            std::to_string(state.rho.cols()) + " but dA*dB = " +
                            std::to_string(d));
    }
    const double herm = state.rho.hermiticity_defect();
    if (herm > 1e-10) {
        throw ValidityError("state: not Hermitian (max |rho - rho^dagger| = " +
                            std::to_string(herm) + ")");
    }
    const double trace_err = std::abs(state.rho.trace() - cdouble(1.0));
    if (trace_err > 1e-10) {
        throw ValidityError("state: trace deviates from one by " + std::to_string(trace_err));
    }
    const auto eigs = eig_hermitian(state.rho);
    if (!eigs.empty() && eigs.front() < -1e-10) {
        throw ValidityError("state: negative eigenvalue " + std::to_string(eigs.front()));
    }
}

BipartiteState bell_diagonal_state(const BellDiagonalCoeffs& coeffs) {
    // Spectrum of (I + sum c_k sigma_k(x)sigma_k)/4 over the Bell basis.
    const double c1 = coeffs.c[0], c2 = coeffs.c[1], c3 = coeffs.c[2];
    const std::array<double, 4> spectrum = {
        (1.0 - c1 - c2 - c3) / 4.0,
        (1.0 - c1 + c2 + c3) / 4.0,
        (1.0 + c1 - c2 + c3) / 4.0,
        (1.0 + c1 + c2 - c3) / 4.0,
    };
    for (double lambda : spectrum) {
        if (lambda < -1e-12) {
            throw ValidityError("bell_diagonal_state: coefficients give eigenvalue " +
                                std::to_string(lambda));
        }
    }
    ComplexMatrix rho = ComplexMatrix::identity(4);
    for (std::size_t k = 1; k <= 3; ++k) {
        rho += coeffs.c[k - 1] * kron(pauli(k), pauli(k));
    }
    rho *= 0.25;
    return BipartiteState{2, 2, std::move(rho)};
}

BipartiteState classical_quantum_state(const std::vector<double>& probs,
                                       const std::vector<ComplexMatrix>& basisA,
                                       const std::vector<ComplexMatrix>& states) {
    if (probs.empty() || probs.size() != states.size() || probs.size() != basisA.size()) {
        throw DimensionError("classical_quantum_state: need one basis vector and one state "
                            "per probability");
    }
    const double total = std::accumulate(probs.begin(), probs.end(), 0.0);
    if (std::abs(total - 1.0) > 1e-12) {
        throw ValidityError("classical_quantum_state: probabilities sum to " +
                            std::to_string(total));
    }
    const std::size_t dA = basisA.front().rows();
    const std::size_t dB = states.front().rows();
    for (std::size_t i = 0; i < basisA.size(); ++i) {
        if (basisA[i].rows() != dA || basisA[i].cols() != 1) {
            throw ValidityError("classical_quantum_state: basis vectors must be dA x 1 columns");
        }
        for (std::size_t j = 0; j <= i; ++j) {
            cdouble dot = 0.0;
            for (std::size_t r = 0; r < dA; ++r) dot += std::conj(basisA[j](r, 0)) * basisA[i](r, 0);
            const cdouble expected = (i == j) ? cdouble(1.0) : cdouble(0.0);
            if (std::abs(dot - expected) > 1e-10) {
                throw ValidityError("classical_quantum_state: basis not orthonormal "
                                    "(|<v_" + std::to_string(j) + "|v_" + std::to_string(i) +
                                    "> - delta| = " + std::to_string(std::abs(dot - expected)) +
                                    ")");
            }
        }
    }
    ComplexMatrix rho(dA * dB, dA * dB);
    for (std::size_t i = 0; i < probs.size(); ++i) {
        if (probs[i] < 0.0) {
            throw ValidityError("classical_quantum_state: negative probability " +
                                std::to_string(probs[i]));
        }
        BipartiteState branch{1, dB, states[i]};
        validate_state(branch);
        // p_i |v_i><v_i| (x) rho_i added entrywise.
        for (std::size_t a = 0; a < dA; ++a) {
            for (std::size_t ap = 0; ap < dA; ++ap) {
                const cdouble proj = basisA[i](a, 0) * std::conj(basisA[i](ap, 0));
                if (proj == cdouble{}) continue;
                for (std::size_t b = 0; b < dB; ++b) {
                    for (std::size_t bp = 0; bp < dB; ++bp) {
                        rho(a * dB + b, ap * dB + bp) += probs[i] * proj * states[i](b, bp);
                    }
                }
            }
        }
    }
    return BipartiteState{dA, dB, std::move(rho)};
}

BipartiteState classical_quantum_state(const std::vector<double>& probs,
                                       const std::vector<ComplexMatrix>& states) {
    std::vector<ComplexMatrix> basis;
    basis.reserve(probs.size());
    for (std::size_t i = 0; i < probs.size(); ++i) {
        ComplexMatrix v(probs.size(), 1);
        v(i, 0) = 1.0;
        basis.push_back(std::move(v));
    }
    return classical_quantum_state(probs, basis, states);
}

namespace {

ComplexMatrix ginibre(Rng& rng, std::size_t rows, std::size_t cols) {
    ComplexMatrix g(rows, cols);
    for (auto& e : g.data()) e = rng.complex_gaussian();
    return g;
}

}  // namespace

BipartiteState random_pure_state(Rng& rng, std::size_t dA, std::size_t dB) {
    const std::size_t d = dA * dB;
    std::vector<cdouble> psi(d);
    double nrm = 0.0;
    for (auto& amp : psi) {
        amp = rng.complex_gaussian();
        nrm += std::norm(amp);
    }
    nrm = std::sqrt(nrm);
    ComplexMatrix rho(d, d);
    for (std::size_t i = 0; i < d; ++i) {
        for (std::size_t j = 0; j < d; ++j) {
            rho(i, j) = (psi[i] / nrm) * std::conj(psi[j] / nrm);
        }
    }
    return BipartiteState{dA, dB, std::move(rho)};
}

BipartiteState random_pure_state(std::uint64_t seed, std::size_t dA, std::size_t dB) {
    Rng rng(seed);
    return random_pure_state(rng, dA, dB);
}

BipartiteState random_mixed_state(Rng& rng, std::size_t dA, std::size_t dB, std::size_t rank) {
    const std::size_t d = dA * dB;
    if (rank == 0) rank = d;
    if (rank > d) {
        throw ValidityError("random_mixed_state: rank " + std::to_string(rank) +
                            " exceeds dimension " + std::to_string(d));
    }
    const ComplexMatrix g = ginibre(rng, d, rank);
    ComplexMatrix rho = g * dagger(g);
    const double tr = rho.trace().real();
    rho *= cdouble(1.0 / tr);
    return BipartiteState{dA, dB, std::move(rho)};
}

BipartiteState random_mixed_state(std::uint64_t seed, std::size_t dA, std::size_t dB,
                                  std::size_t rank) {
    Rng rng(seed);
    return random_mixed_state(rng, dA, dB, rank);
}

ComplexMatrix random_unitary(Rng& rng, std::size_t d) {
    ComplexMatrix g = ginibre(rng, d, d);
    orthonormalize_columns(g);
    return g;
}

ComplexMatrix random_unitary(std::uint64_t seed, std::size_t d) {
    Rng rng(seed);
    return random_unitary(rng, d);
}

BellDiagonalCoeffs random_bell_diagonal(Rng& rng) {
    // Volume ratio tetrahedron/cube is 1/3, so this nearly always returns
    // within a handful of draws; the cap guards against a broken generator.
    constexpr int kMaxRejections = 10000;
    for (int attempt = 0; attempt < kMaxRejections; ++attempt) {
        BellDiagonalCoeffs coeffs;
        for (auto& c : coeffs.c) c = rng.uniform(-1.0, 1.0);
        const double c1 = coeffs.c[0], c2 = coeffs.c[1], c3 = coeffs.c[2];
        const bool physical = (1.0 - c1 - c2 - c3 >= 0.0) && (1.0 - c1 + c2 + c3 >= 0.0) &&
                              (1.0 + c1 - c2 + c3 >= 0.0) && (1.0 + c1 + c2 - c3 >= 0.0);
        if (physical) return coeffs;
    }
    throw SamplerError("random_bell_diagonal: rejection budget exhausted");
}

BellDiagonalCoeffs random_bell_diagonal(std::uint64_t seed) {
    Rng rng(seed);
    return random_bell_diagonal(rng);
}

BipartiteState random_classical_quantum(Rng& rng, std::size_t dA, std::size_t dB) {
    // Flat Dirichlet via normalized exponentials.
    std::vector<double> probs(dA);
    double total = 0.0;
    for (auto& p : probs) {
        double u = rng.uniform();
        while (u <= 0.0) u = rng.uniform();
        p = -std::log(u);
        total += p;
    }
    for (auto& p : probs) p /= total;
    std::vector<ComplexMatrix> branches;
    branches.reserve(dA);
    for (std::size_t i = 0; i < dA; ++i) {
        branches.push_back(random_mixed_state(rng, 1, dB).rho);
    }
    return classical_quantum_state(probs, branches);
}

BipartiteState random_classical_quantum(std::uint64_t seed, std::size_t dA, std::size_t dB) {
    Rng rng(seed);
    return random_classical_quantum(rng, dA, dB);
}

}  // namespace qcorr
