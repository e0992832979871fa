#include <array>
#include <cmath>
#include <complex>
#include <cstdio>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "qcorr/campaign.hpp"
#include "qcorr/channels.hpp"
#include "qcorr/io.hpp"
#include "qcorr/measures.hpp"
#include "qcorr/states.hpp"

namespace {

using namespace qcorr;

/// Two-qubit states of the form (I + sum_k c_k sigma_k (x) sigma_k)/4 have
/// every cross Pauli coefficient zero; detect that structure and recover c.
std::optional<BellDiagonalCoeffs> detect_bell_diagonal(const BipartiteState& state) {
    if (state.dA != 2 || state.dB != 2) return std::nullopt;
    std::array<std::array<cdouble, 4>, 4> r{};
    for (std::size_t m = 0; m < 4; ++m) {
        for (std::size_t n = 0; n < 4; ++n) {
            r[m][n] = (kron(pauli(m), pauli(n)) * state.rho).trace();
        }
    }
    for (std::size_t m = 0; m < 4; ++m) {
        for (std::size_t n = 0; n < 4; ++n) {
            if (m == n) continue;
            if (std::abs(r[m][n]) > 1e-12) return std::nullopt;
        }
    }
    BellDiagonalCoeffs coeffs;
    for (std::size_t k = 1; k <= 3; ++k) {
        if (std::abs(r[k][k].imag()) > 1e-12) return std::nullopt;
        coeffs.c[k - 1] = r[k][k].real();
    }
    return coeffs;
}

int cmd_compute(const std::string& state_path, bool want_d_min, bool fast) {
    const BipartiteState state = load_state(state_path);
    const MeasureResult result = guo_D(state, fast);
    std::printf("D_A = %.12g\n", result.value);
    std::printf("pairs = %zu\n", result.pair_count);
    if (const auto coeffs = detect_bell_diagonal(state)) {
        std::printf("bell_diagonal_D = %.12g\n", bell_diagonal_D(*coeffs));
    }
    if (want_d_min) {
        const MinimizationReport report = minimize_d(state);
        std::printf("d_A = %.12g\n", report.d_value);
        std::printf("evaluations = %zu\n", report.evaluations);
        std::printf("converged = %s\n", report.converged ? "true" : "false");
    }
    return 0;
}

struct CampaignOverrides {
    std::optional<std::size_t> trials;
    std::optional<std::uint64_t> seed;
    std::optional<double> tolerance;
    bool use_d_min = false;
};

void apply_overrides(CampaignConfig& config, const CampaignOverrides& ov) {
    if (ov.trials) config.trials = *ov.trials;
    if (ov.seed) config.seed = *ov.seed;
    if (ov.tolerance) config.tolerance = *ov.tolerance;
    if (ov.use_d_min) config.use_d_min = true;
}

void print_report_summary(const CampaignReport& report, CampaignMode mode) {
    const char* name = (mode == CampaignMode::Lcpo)        ? "lcpo"
                       : (mode == CampaignMode::BsideBell) ? "bside_bell"
                                                           : "scan";
    std::printf("campaign = %s\n", name);
    std::printf("trials = %zu\n", report.trials_run);
    std::printf("violations = %zu\n", report.violations.size());
    std::printf("max_excess = %.12g\n", report.max_excess);
    std::printf("runtime_ms = %llu\n", static_cast<unsigned long long>(report.runtime_ms));
}

int cmd_campaign(const std::string& config_path, const std::string& out_path,
                 const std::string& csv_path, const CampaignOverrides& ov) {
    CampaignFile file = load_campaign_config(config_path, true);
    if (file.mode == CampaignMode::Scan) {
        throw ConfigError("campaign config: mode \"scan\" runs through the scan command");
    }
    apply_overrides(file.config, ov);
    const CampaignReport report = (file.mode == CampaignMode::Lcpo)
                                      ? run_lcpo_campaign(file.config)
                                      : run_bside_bell_campaign(file.config);
    print_report_summary(report, file.mode);
    if (!out_path.empty()) write_text_file(out_path, format_report_json(report, file.mode));
    if (!csv_path.empty()) write_text_file(csv_path, format_csv(report));
    return report.violations.empty() ? 0 : 1;
}

int cmd_scan(const std::string& config_path, const std::string& out_path,
             const std::string& csv_path, const CampaignOverrides& ov) {
    CampaignFile file = load_campaign_config(config_path, false);
    if (file.mode != CampaignMode::Scan) {
        throw ConfigError("scan config: mode \"" +
                          std::string(file.mode == CampaignMode::Lcpo ? "lcpo" : "bside_bell") +
                          "\" runs through the campaign command");
    }
    apply_overrides(file.config, ov);
    const CampaignReport report = explore_bside_general(file.config);
    print_report_summary(report, CampaignMode::Scan);
    write_text_file(out_path, format_report_json(report, CampaignMode::Scan));
    if (!csv_path.empty()) write_text_file(csv_path, format_csv(report));
    return 0;  // scan documents findings; it never fails on them
}

int cmd_check_scaling(const std::string& state_path, double p, const std::string& kind_name,
                      std::optional<std::uint64_t> seed, double tolerance) {
    const BipartiteState state = load_state(state_path);
    GammaKind kind;
    if (kind_name == "unitary") {
        kind = GammaKind::Unitary;
    } else if (kind_name == "antiunitary") {
        kind = GammaKind::Antiunitary;
    } else {
        throw ConfigError("check-scaling: kind must be unitary or antiunitary");
    }
    const ComplexMatrix u =
        seed ? random_unitary(*seed, state.dA) : ComplexMatrix::identity(state.dA);
    const ScalingCheck check = isotropic_scaling_check(state, p, u, kind);
    std::printf("lhs = %.12g\n", check.lhs);
    std::printf("rhs = %.12g\n", check.rhs);
    std::printf("discrepancy = %.12g\n", check.discrepancy);
    return (check.discrepancy <= tolerance) ? 0 : 1;
}

int cmd_probe_basis(const std::string& state_path, std::size_t samples, std::uint64_t seed) {
    const BipartiteState state = load_state(state_path);
    const BasisProbe probe = basis_dependence_probe(state, samples, seed);
    std::printf("samples = %zu\n", probe.samples);
    std::printf("min = %.12g\n", probe.min);
    std::printf("max = %.12g\n", probe.max);
    std::printf("mean = %.12g\n", probe.mean);
    std::printf("stddev = %.12g\n", probe.stddev);
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"non-commutativity measures of bipartite quantum correlations"};
    app.require_subcommand(1);

    auto* compute = app.add_subcommand("compute", "evaluate the measure on a state file");
    std::string compute_state;
    bool compute_dmin = false;
    bool compute_fast = false;
    compute->add_option("--state", compute_state, "state JSON file")->required();
    compute->add_flag("--d-min", compute_dmin, "also minimize over B-bases");
    compute->add_flag("--fast", compute_fast, "use the Pauli coefficient path (dA = 2)");

    CampaignOverrides overrides;
    std::size_t ov_trials = 0;
    std::uint64_t ov_seed = 0;
    double ov_tolerance = 0.0;

    auto add_override_flags = [&](CLI::App* cmd) {
        cmd->add_option("--trials", ov_trials, "override trial count");
        cmd->add_option("--seed", ov_seed, "override master seed");
        cmd->add_option("--tolerance", ov_tolerance, "override violation tolerance");
        cmd->add_flag("--d-min", overrides.use_d_min, "compare minimized values");
    };

    auto* campaign = app.add_subcommand("campaign", "run a monotonicity campaign from a config");
    std::string campaign_config, campaign_out, campaign_csv;
    campaign->add_option("--config", campaign_config, "campaign config JSON")->required();
    campaign->add_option("--out", campaign_out, "write the report JSON here");
    campaign->add_option("--csv", campaign_csv, "write per-trial rows here");
    add_override_flags(campaign);

    auto* scan = app.add_subcommand("scan", "scan B-side channels on general states");
    std::string scan_config, scan_out, scan_csv;
    scan->add_option("--config", scan_config, "scan config JSON")->required();
    scan->add_option("--out", scan_out, "write the report JSON here")->required();
    scan->add_option("--csv", scan_csv, "write per-trial rows here");
    add_override_flags(scan);

    auto* scaling = app.add_subcommand("check-scaling", "verify quadratic isotropic scaling");
    std::string scaling_state, scaling_kind;
    double scaling_p = 1.0;
    std::uint64_t scaling_seed = 0;
    double scaling_tol = 1e-10;
    scaling->add_option("--state", scaling_state, "state JSON file")->required();
    scaling->add_option("--p", scaling_p, "isotropic mixing parameter")->required();
    scaling->add_option("--kind", scaling_kind, "unitary or antiunitary")->required();
    scaling->add_option("--seed", scaling_seed, "Haar seed for U (identity if omitted)");
    scaling->add_option("--tolerance", scaling_tol, "discrepancy tolerance (default 1e-10)");

    auto* probe = app.add_subcommand("probe-basis", "measure distribution over random B-bases");
    std::string probe_state;
    std::size_t probe_samples = 100;
    std::uint64_t probe_seed = 1;
    probe->add_option("--state", probe_state, "state JSON file")->required();
    probe->add_option("--samples", probe_samples, "number of Haar bases")->required();
    probe->add_option("--seed", probe_seed, "sampling seed")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return (code == 0) ? 0 : 2;  // bad usage is a configuration error
    }

    try {
        if (campaign->parsed() || scan->parsed()) {
            if (campaign->count("--trials") || scan->count("--trials")) {
                overrides.trials = ov_trials;
            }
            if (campaign->count("--seed") || scan->count("--seed")) overrides.seed = ov_seed;
            if (campaign->count("--tolerance") || scan->count("--tolerance")) {
                overrides.tolerance = ov_tolerance;
            }
        }
        if (compute->parsed()) return cmd_compute(compute_state, compute_dmin, compute_fast);
        if (campaign->parsed()) {
            return cmd_campaign(campaign_config, campaign_out, campaign_csv, overrides);
        }
        if (scan->parsed()) return cmd_scan(scan_config, scan_out, scan_csv, overrides);
        if (scaling->parsed()) {
            const bool has_seed = scaling->count("--seed") > 0;
            return cmd_check_scaling(
                scaling_state, scaling_p, scaling_kind,
                has_seed ? std::optional<std::uint64_t>(scaling_seed) : std::nullopt,
                scaling_tol);
        }
        if (probe->parsed()) return cmd_probe_basis(probe_state, probe_samples, probe_seed);
        std::fprintf(stderr, "error: no command selected\n");
        return 2;
    } catch (const IoError& e) {
        std::fprintf(stderr, "io error: %s\n", e.what());
        return 3;
    } catch (const ConfigError& e) {
        std::fprintf(stderr, "config error: %s\n", e.what());
        return 2;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    }
}
