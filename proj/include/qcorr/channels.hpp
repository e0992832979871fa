#pragma once

#include <array>
#include <cstdint>
#include <variant>
#include <vector>

#include "qcorr/linalg.hpp"
#include "qcorr/rng.hpp"
#include "qcorr/states.hpp"

namespace qcorr {

/// Qubit channel in the canonical diagonal affine form: Pauli components
/// map as m0 -> m0, m_k -> t_k m0 + lambda_k m_k. Construct through
/// validate_affine so the positivity constraint |lambda_k| <= 1 - |t_k|
/// always holds.
struct AffineQubitChannel {
    std::array<double, 3> t{};
    std::array<double, 3> lambda{};

    /// t = 0 within 1e-14 componentwise.
    bool unital() const {
        return std::abs(t[0]) <= 1e-14 && std::abs(t[1]) <= 1e-14 && std::abs(t[2]) <= 1e-14;
    }
};

/// Checks |lambda_k| <= 1 - |t_k| for each k; names the failing component.
AffineQubitChannel validate_affine(const std::array<double, 3>& t,
                                   const std::array<double, 3>& lambda);

enum class GammaKind { Unitary, Antiunitary };

/// M -> p Gamma[M] + (1-p) (I/d) Tr M, with Gamma[M] = U M U^dagger for
/// the unitary kind and U M^T U^dagger for the antiunitary kind.
struct IsotropicChannel {
    double p = 1.0;
    GammaKind kind = GammaKind::Unitary;
    ComplexMatrix U;
    std::size_t d = 2;
};

/// Validates the p-interval for the kind (unitary: [-1/(d^2-1), 1];
/// antiunitary: [-1/(d-1), 1/(d+1)]) and unitarity of U within 1e-10.
IsotropicChannel make_isotropic(double p, GammaKind kind, ComplexMatrix U);

/// M -> sum_i <i|M|i> |i><i| over a fixed orthonormal basis.
struct DecoheringChannel {
    std::vector<ComplexMatrix> basis;  // d column vectors of dimension d
};

/// Validates pairwise orthonormality within 1e-10.
DecoheringChannel make_decohering(std::vector<ComplexMatrix> basis);

/// General channel as Kraus operators; trace preservation sum K^dagger K = I
/// enforced within 1e-10 at construction.
struct KrausChannel {
    std::vector<ComplexMatrix> ops;  // each d_out x d_in

    std::size_t d_in() const { return ops.empty() ? 0 : ops.front().cols(); }
    std::size_t d_out() const { return ops.empty() ? 0 : ops.front().rows(); }
};

KrausChannel make_kraus(std::vector<ComplexMatrix> ops);

ComplexMatrix apply_affine(const AffineQubitChannel& ch, const ComplexMatrix& m);
ComplexMatrix apply_isotropic(const IsotropicChannel& ch, const ComplexMatrix& m);
ComplexMatrix apply_decohering(const DecoheringChannel& ch, const ComplexMatrix& m);
ComplexMatrix apply_kraus(const KrausChannel& ch, const ComplexMatrix& m);

/// Any of the supported channel representations.
using ChannelSpec = std::variant<AffineQubitChannel, IsotropicChannel, DecoheringChannel,
                                 KrausChannel>;

ComplexMatrix apply_channel(const ChannelSpec& ch, const ComplexMatrix& m);
std::size_t channel_dim_in(const ChannelSpec& ch);

/// Choi matrix sum_ij |i><j| (x) ch(|i><j|), composite index (i, a) ->
/// i*d_out + a.
ComplexMatrix choi_matrix(const ChannelSpec& ch);

/// Kraus form via Choi eigendecomposition. Eigenvalues below -1e-10 mean
/// the map is positive but not completely positive -> ValidityError;
/// eigenvalues below 1e-12 are dropped as numerically zero.
KrausChannel channel_to_kraus(const ChannelSpec& ch);

/// rho' = sum_m (K_m (x) I) rho (K_m (x) I)^dagger for side A, or with
/// the factors swapped for side B.
BipartiteState apply_local(const KrausChannel& ch, const BipartiteState& state, Subsystem side);

/// t = 0, lambda uniform in the CP region of [-1,1]^3 (rejection through
/// the Choi PSD check).
AffineQubitChannel random_unital_qubit_channel(Rng& rng);
AffineQubitChannel random_unital_qubit_channel(std::uint64_t seed);

/// t uniform in [-1,1]^3, lambda_k uniform in [-(1-|t_k|), 1-|t_k|],
/// resampled until the Choi matrix is PSD.
AffineQubitChannel random_affine_qubit_channel(Rng& rng);
AffineQubitChannel random_affine_qubit_channel(std::uint64_t seed);

/// p uniform over the kind's admissible interval, U Haar.
IsotropicChannel random_isotropic(Rng& rng, std::size_t d, GammaKind kind);
IsotropicChannel random_isotropic(std::uint64_t seed, std::size_t d, GammaKind kind);

/// Basis = columns of a Haar unitary.
DecoheringChannel random_decohering(Rng& rng, std::size_t d);
DecoheringChannel random_decohering(std::uint64_t seed, std::size_t d);

/// num_ops Kraus operators from the columns of a Haar isometry on
/// (d*num_ops) x d Gaussians; num_ops = 1 gives a Haar unitary channel.
KrausChannel random_kraus_channel(Rng& rng, std::size_t d, std::size_t num_ops);
KrausChannel random_kraus_channel(std::uint64_t seed, std::size_t d, std::size_t num_ops);

}  // namespace qcorr
