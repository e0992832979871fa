#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "qcorr/channels.hpp"
#include "qcorr/measures.hpp"
#include "qcorr/states.hpp"

namespace qcorr {

enum class StateFamily { RandomMixed, RandomPure, BellDiagonal, ClassicalQuantum };
enum class ChannelFamily {
    UnitalAffine,
    Affine,
    IsotropicUnitary,
    IsotropicAntiunitary,
    Decohering,
    KrausRandom,
};

struct CampaignConfig {
    std::size_t trials = 1000;
    std::uint64_t seed = 1;
    StateFamily state_family = StateFamily::RandomMixed;
    ChannelFamily channel_family = ChannelFamily::UnitalAffine;
    Subsystem side = Subsystem::A;
    std::size_t dA = 2;
    std::size_t dB = 2;
    double tolerance = 1e-9;
    bool use_d_min = false;
    std::size_t rank = 0;       // mixed-state rank; 0 = full
    std::size_t kraus_ops = 2;  // operators per KrausRandom sample
};

/// One trial's measured values; excess = d_after - d_before.
struct TrialRow {
    std::size_t index = 0;
    double d_before = 0.0;
    double d_after = 0.0;
    double excess = 0.0;
};

/// Self-contained record of a trial whose excess exceeded the tolerance:
/// embeds the sampled state and channel so the numbers can be reproduced
/// without the RNG.
struct ViolationRecord {
    std::size_t trial_index = 0;
    std::uint64_t substream_seed = 0;
    double d_before = 0.0;
    double d_after = 0.0;
    BipartiteState state;
    ChannelSpec channel;
};

struct CampaignReport {
    CampaignConfig config;
    std::size_t trials_run = 0;
    std::vector<TrialRow> rows;  // one per trial, in index order
    std::vector<ViolationRecord> violations;
    double max_excess = 0.0;
    std::uint64_t runtime_ms = 0;
};

/// Monotonicity campaign for channels acting on side A. Requires side A
/// and a channel family proven non-increasing there: unital affine
/// (dA = 2), isotropic of either kind, or completely decohering.
CampaignReport run_lcpo_campaign(const CampaignConfig& config);

/// Monotonicity campaign for channels on side B of Bell-diagonal states.
CampaignReport run_bside_bell_campaign(const CampaignConfig& config);

/// Scanner for B-side channels on arbitrary states. Records every excess
/// above tolerance but asserts nothing: no theorem covers this regime.
CampaignReport explore_bside_general(const CampaignConfig& config);

/// Recomputes (d_before, d_after) from a record's embedded payloads,
/// using the same measure variant the campaign used.
TrialRow recompute_record(const ViolationRecord& record, Subsystem side, bool use_d_min);

struct ScalingCheck {
    double lhs = 0.0;  // measure of the transformed state
    double rhs = 0.0;  // p^2 times the reference measure
    double discrepancy = 0.0;
};

/// Verifies the exact quadratic scaling of the measure under an isotropic
/// channel on A: lhs = D(rho'), rhs = p^2 D(rho) for the unitary kind and
/// p^2 times the measure evaluated on transposed blocks for the
/// antiunitary kind.
ScalingCheck isotropic_scaling_check(const BipartiteState& state, double p,
                                     const ComplexMatrix& U, GammaKind kind);

struct BasisProbe {
    double min = 0.0;
    double max = 0.0;
    double mean = 0.0;
    double stddev = 0.0;
    std::size_t samples = 0;
};

/// Distribution of the fixed-basis measure over Haar-random B-bases.
BasisProbe basis_dependence_probe(const BipartiteState& state, std::size_t samples,
                                  std::uint64_t seed);

}  // namespace qcorr
