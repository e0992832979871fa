#include "qcorr/campaign.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <string>

#include "qcorr/parallel.hpp"

namespace qcorr {

namespace {

enum class CampaignKind { Lcpo, BsideBell, ExploreGeneral };

std::size_t target_dim(const CampaignConfig& c) {
    return (c.side == Subsystem::A) ? c.dA : c.dB;
}

void validate_config(const CampaignConfig& c, CampaignKind kind) {
    if (c.trials < 1) throw ConfigError("campaign: trials must be >= 1");
    if (!(c.tolerance > 0.0)) throw ConfigError("campaign: tolerance must be positive");
    if (c.dA < 2 || c.dB < 2) throw ConfigError("campaign: dimensions must be >= 2");
    if (c.dA * c.dB > 16) {
        throw ConfigError("campaign: dA*dB = " + std::to_string(c.dA * c.dB) +
                          " exceeds the supported total dimension 16");
    }
    if (c.state_family == StateFamily::BellDiagonal && (c.dA != 2 || c.dB != 2)) {
        throw ConfigError("campaign: bell_diagonal states require dims (2,2)");
    }
    const bool affine_family = c.channel_family == ChannelFamily::UnitalAffine ||
                               c.channel_family == ChannelFamily::Affine;
    if (affine_family && target_dim(c) != 2) {
        throw ConfigError("campaign: affine channel families require the target side to be a "
                          "qubit, got dimension " + std::to_string(target_dim(c)));
    }
    if (c.channel_family == ChannelFamily::KrausRandom && c.kraus_ops < 1) {
        throw ConfigError("campaign: kraus_ops must be >= 1");
    }
    switch (kind) {
        case CampaignKind::Lcpo:
            if (c.side != Subsystem::A) {
                throw ConfigError("lcpo campaign: channels act on side A");
            }
            if (c.channel_family != ChannelFamily::UnitalAffine &&
                c.channel_family != ChannelFamily::IsotropicUnitary &&
                c.channel_family != ChannelFamily::IsotropicAntiunitary &&
                c.channel_family != ChannelFamily::Decohering) {
                throw ConfigError("lcpo campaign: channel family must be unital_affine, "
                                  "isotropic_unitary, isotropic_antiunitary, or decohering");
            }
            break;
        case CampaignKind::BsideBell:
            if (c.side != Subsystem::B) {
                throw ConfigError("bside_bell campaign: channels act on side B");
            }
            if (c.state_family != StateFamily::BellDiagonal) {
                throw ConfigError("bside_bell campaign: state family must be bell_diagonal");
            }
            break;
        case CampaignKind::ExploreGeneral:
            if (c.side != Subsystem::B) {
                throw ConfigError("scan: channels act on side B");
            }
            if (c.channel_family != ChannelFamily::KrausRandom &&
                c.channel_family != ChannelFamily::Affine) {
                throw ConfigError("scan: channel family must be kraus_random or affine");
            }
            break;
    }
}

BipartiteState sample_state(Rng& rng, const CampaignConfig& c) {
    switch (c.state_family) {
        case StateFamily::RandomMixed:
            return random_mixed_state(rng, c.dA, c.dB, c.rank);
        case StateFamily::RandomPure:
            return random_pure_state(rng, c.dA, c.dB);
        case StateFamily::BellDiagonal:
            return bell_diagonal_state(random_bell_diagonal(rng));
        case StateFamily::ClassicalQuantum:
            return random_classical_quantum(rng, c.dA, c.dB);
    }
    throw ConfigError("campaign: unknown state family");
}

ChannelSpec sample_channel(Rng& rng, const CampaignConfig& c) {
    const std::size_t d = target_dim(c);
    switch (c.channel_family) {
        case ChannelFamily::UnitalAffine:
            return random_unital_qubit_channel(rng);
        case ChannelFamily::Affine:
            return random_affine_qubit_channel(rng);
        case ChannelFamily::IsotropicUnitary:
            return random_isotropic(rng, d, GammaKind::Unitary);
        case ChannelFamily::IsotropicAntiunitary:
            return random_isotropic(rng, d, GammaKind::Antiunitary);
        case ChannelFamily::Decohering:
            return random_decohering(rng, d);
        case ChannelFamily::KrausRandom:
            return random_kraus_channel(rng, d, c.kraus_ops);
    }
    throw ConfigError("campaign: unknown channel family");
}

double measure_value(const BipartiteState& state, bool use_d_min) {
    if (use_d_min) {
        MinimizerConfig mc;
        mc.parallel = false;  // trials already run in parallel
        return minimize_d(state, mc).d_value;
    }
    return guo_D(state).value;
}

CampaignReport run_campaign(const CampaignConfig& config, CampaignKind kind) {
    validate_config(config, kind);
    const auto start = std::chrono::steady_clock::now();

    const double tol = config.use_d_min ? std::max(config.tolerance, 1e-4) : config.tolerance;

    struct TrialSlot {
        TrialRow row;
        std::optional<ViolationRecord> violation;
    };
    std::vector<TrialSlot> slots(config.trials);

    parallel_for(config.trials, [&](std::size_t i) {
        Rng rng = Rng::substream(config.seed, i);
        BipartiteState state = sample_state(rng, config);
        ChannelSpec channel = sample_channel(rng, config);
        const KrausChannel kraus = channel_to_kraus(channel);
        const BipartiteState after = apply_local(kraus, state, config.side);
        const double before_v = measure_value(state, config.use_d_min);
        const double after_v = measure_value(after, config.use_d_min);
        TrialSlot& slot = slots[i];
        slot.row = TrialRow{i, before_v, after_v, after_v - before_v};
        if (slot.row.excess > tol) {
            slot.violation = ViolationRecord{i, Rng::substream_seed(config.seed, i), before_v,
                                             after_v, std::move(state), std::move(channel)};
        }
    });

    CampaignReport report;
    report.config = config;
    report.trials_run = config.trials;
    report.rows.reserve(config.trials);
    report.max_excess = -std::numeric_limits<double>::infinity();
    for (auto& slot : slots) {
        report.max_excess = std::max(report.max_excess, slot.row.excess);
        report.rows.push_back(slot.row);
        if (slot.violation) report.violations.push_back(std::move(*slot.violation));
    }
    const auto end = std::chrono::steady_clock::now();
    report.runtime_ms = static_cast<std::uint64_t>(
        std::chrono::duration_cast<std::chrono::milliseconds>(end - start).count());
    return report;
}

}  // namespace

CampaignReport run_lcpo_campaign(const CampaignConfig& config) {
    return run_campaign(config, CampaignKind::Lcpo);
}

CampaignReport run_bside_bell_campaign(const CampaignConfig& config) {
    return run_campaign(config, CampaignKind::BsideBell);
}

CampaignReport explore_bside_general(const CampaignConfig& config) {
    return run_campaign(config, CampaignKind::ExploreGeneral);
}

TrialRow recompute_record(const ViolationRecord& record, Subsystem side, bool use_d_min) {
    const KrausChannel kraus = channel_to_kraus(record.channel);
    const BipartiteState after = apply_local(kraus, record.state, side);
    TrialRow row;
    row.index = record.trial_index;
    row.d_before = measure_value(record.state, use_d_min);
    row.d_after = measure_value(after, use_d_min);
    row.excess = row.d_after - row.d_before;
    return row;
}

ScalingCheck isotropic_scaling_check(const BipartiteState& state, double p,
                                     const ComplexMatrix& U, GammaKind kind) {
    const IsotropicChannel channel = make_isotropic(p, kind, U);
    if (channel.d != state.dA) {
        throw DimensionError("isotropic_scaling_check: channel dimension " +
                             std::to_string(channel.d) + " does not match dA = " +
                             std::to_string(state.dA));
    }
    const BipartiteState after =
        apply_local(channel_to_kraus(ChannelSpec{channel}), state, Subsystem::A);
    ScalingCheck check;
    check.lhs = guo_D(after).value;
    if (kind == GammaKind::Unitary) {
        check.rhs = p * p * guo_D(state).value;
    } else {
        // Quadratic scaling holds against the measure of the blockwise
        // transpose; assemble it pairwise from the computational blocks.
        const BlockDecomposition bd =
            block_decompose(state, ComplexMatrix::identity(state.dB));
        const std::size_t n = state.dB * state.dB;
        double total = 0.0;
        for (std::size_t a = 0; a < n; ++a) {
            for (std::size_t b = a + 1; b < n; ++b) {
                total += hs_norm(commutator(transpose(bd.blocks[a]), transpose(bd.blocks[b])));
            }
        }
        check.rhs = p * p * total;
    }
    check.discrepancy = std::abs(check.lhs - check.rhs);
    return check;
}

BasisProbe basis_dependence_probe(const BipartiteState& state, std::size_t samples,
                                  std::uint64_t seed) {
    if (samples < 1) throw ConfigError("basis_dependence_probe: samples must be >= 1");
    std::vector<double> values(samples);
    parallel_for(samples, [&](std::size_t s) {
        Rng rng = Rng::substream(seed, s);
        const ComplexMatrix u = random_unitary(rng, state.dB);
        values[s] = guo_D(state, u).value;
    });
    BasisProbe probe;
    probe.samples = samples;
    probe.min = *std::min_element(values.begin(), values.end());
    probe.max = *std::max_element(values.begin(), values.end());
    double sum = 0.0;
    for (double v : values) sum += v;
    probe.mean = sum / static_cast<double>(samples);
    double var = 0.0;
    for (double v : values) var += (v - probe.mean) * (v - probe.mean);
    probe.stddev = std::sqrt(var / static_cast<double>(samples));
    return probe;
}

}  // namespace qcorr
