#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "qcorr/linalg.hpp"
#include "qcorr/rng.hpp"

namespace qcorr {

/// Density matrix of a bipartite system with the composite index
/// convention (a, b) -> a*dB + b, i.e. rho acts on H_A (x) H_B.
struct BipartiteState {
    std::size_t dA = 2;
    std::size_t dB = 2;
    ComplexMatrix rho;
};

/// Two-qubit state diagonal in the Bell basis, written as
/// (I(x)I + sum_k c_k sigma_k (x) sigma_k) / 4.
struct BellDiagonalCoeffs {
    std::array<double, 3> c{};
};

/// Checks Hermiticity, unit trace and positive semidefiniteness; throws
/// ValidityError naming the failed check and the offending magnitude.
void validate_state(const BipartiteState& state);

/// Builds the density matrix for Bell-diagonal coefficients, rejecting
/// parameter triples whose spectrum dips below -1e-12.
BipartiteState bell_diagonal_state(const BellDiagonalCoeffs& coeffs);

/// sum_i p_i |v_i><v_i| (x) rho_i for orthonormal vectors v_i on A
/// (dA x 1 column matrices). Probabilities must be nonnegative and sum to
/// one within 1e-12; the v_i pairwise orthonormal within 1e-10; each
/// rho_i a valid dB-dimensional state.
BipartiteState classical_quantum_state(const std::vector<double>& probs,
                                       const std::vector<ComplexMatrix>& basisA,
                                       const std::vector<ComplexMatrix>& states);

/// Same, with the computational basis of A.
BipartiteState classical_quantum_state(const std::vector<double>& probs,
                                       const std::vector<ComplexMatrix>& states);

/// Haar-random pure state |psi><psi| on dA*dB dimensions.
BipartiteState random_pure_state(Rng& rng, std::size_t dA, std::size_t dB);
BipartiteState random_pure_state(std::uint64_t seed, std::size_t dA, std::size_t dB);

/// Full-rank mixed state GG^dagger / Tr(GG^dagger) with G a (dA*dB) x rank
/// Ginibre matrix; rank 0 means full rank dA*dB.
BipartiteState random_mixed_state(Rng& rng, std::size_t dA, std::size_t dB,
                                  std::size_t rank = 0);
BipartiteState random_mixed_state(std::uint64_t seed, std::size_t dA, std::size_t dB,
                                  std::size_t rank = 0);

/// Haar-distributed d x d unitary (QR of a Ginibre matrix via twice-run
/// modified Gram-Schmidt, diagonal phases fixed positive).
ComplexMatrix random_unitary(Rng& rng, std::size_t d);
ComplexMatrix random_unitary(std::uint64_t seed, std::size_t d);

/// Uniform sample from the Bell-diagonal tetrahedron by rejection from
/// the cube [-1,1]^3; throws SamplerError after 10^4 rejected draws.
BellDiagonalCoeffs random_bell_diagonal(Rng& rng);
BellDiagonalCoeffs random_bell_diagonal(std::uint64_t seed);

/// Random classical-quantum state: Dirichlet-flat probabilities over the
/// computational basis of A, an independent Ginibre mixed state on B per
/// branch.
BipartiteState random_classical_quantum(Rng& rng, std::size_t dA, std::size_t dB);
BipartiteState random_classical_quantum(std::uint64_t seed, std::size_t dA, std::size_t dB);

}  // namespace qcorr
