#pragma once

#include <cstdint>
#include <vector>

#include "qcorr/linalg.hpp"
#include "qcorr/states.hpp"

namespace qcorr {

/// Block operators A_ij of a bipartite state in the B-basis given by the
/// columns of basisU: A_ij = (I (x) <i'|) rho (I (x) |j'>), |i'> = U|i>.
/// Blocks are stored row-major over (i, j).
struct BlockDecomposition {
    std::size_t dA = 0;
    std::size_t dB = 0;
    std::vector<ComplexMatrix> blocks;  // dB*dB entries, each dA x dA
    ComplexMatrix basisU;

    const ComplexMatrix& block(std::size_t i, std::size_t j) const {
        return blocks[i * dB + j];
    }
};

struct MeasureResult {
    double value = 0.0;
    ComplexMatrix basisU;
    std::size_t pair_count = 0;  // n(n-1)/2 with n = dB^2
};

struct MinimizerConfig {
    std::size_t grid_points = 24;      // per axis, exhaustive two-level-B path
    double simplex_tol = 1e-8;         // stop when simplex value spread drops below
    std::size_t simplex_max_evals = 500;
    std::size_t restarts = 32;         // stochastic path for dB > 2
    std::size_t descent_iters = 300;   // per restart
    double early_stop_below = 1e-14;   // value at which searching further is pointless
    std::uint64_t seed = 0x5eedf00dULL;  // stochastic path only
    bool parallel = true;
};

struct MinimizationHistoryEntry {
    std::vector<double> params;  // (theta, phi, psi) or (restart, iteration)
    double value = 0.0;
};

struct MinimizationReport {
    double d_value = 0.0;
    ComplexMatrix optimal_basisU;
    std::size_t evaluations = 0;
    bool converged = false;
    std::vector<MinimizationHistoryEntry> history;  // successive improvements
};

/// Basis unitary for a two-level B system:
///   [[cos(theta) e^{i phi},  sin(theta) e^{i psi}],
///    [-sin(theta) e^{-i psi}, cos(theta) e^{-i phi}]]
/// Covers every basis change up to per-column phases, which leave the
/// measure invariant.
ComplexMatrix basis_unitary_2(double theta, double phi, double psi);

/// Requires basisU unitary within 1e-10.
BlockDecomposition block_decompose(const BipartiteState& state, const ComplexMatrix& basisU);

/// Sum over unordered pairs of distinct block indices of ||[A_ij, A_kl]||_2.
/// With fast set and dA = 2 the norms come from Pauli coefficients instead
/// of explicit commutators; both paths agree within 1e-12.
MeasureResult guo_D(const BipartiteState& state, const ComplexMatrix& basisU, bool fast = true);

/// Computational-basis measure.
MeasureResult guo_D(const BipartiteState& state, bool fast = true);

/// Closed form for Bell-diagonal states; equals guo_D on
/// bell_diagonal_state(c) within 1e-12.
double bell_diagonal_D(const BellDiagonalCoeffs& coeffs);

/// Minimum of guo_D over B-bases. dB = 2: exhaustive angle grid, then
/// downhill-simplex refinement of the leading grid candidates; dB > 2:
/// multi-start stochastic descent over unitaries U exp(i eps H).
MinimizationReport minimize_d(const BipartiteState& state, const MinimizerConfig& config = {});

}  // namespace qcorr
