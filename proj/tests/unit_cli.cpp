#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <array>
#include <cstdio>
#include <cstdlib>
#include <string>

#include "qcorr/campaign.hpp"
#include "qcorr/io.hpp"
#include "test_utils.hpp"

using namespace qcorr;

namespace {

struct RunResult {
    int exit_code = -1;
    std::string out;
};

const char* cli_path() {
    const char* p = std::getenv("QCORR_CLI");
    REQUIRE_MESSAGE(p != nullptr, "QCORR_CLI must point at the CLI binary");
    return p;
}

/// Runs the CLI with the given arguments, capturing stdout+stderr.
RunResult run_cli(const std::string& args) {
    const std::string cmd = std::string(cli_path()) + " " + args + " 2>&1";
    FILE* pipe = popen(cmd.c_str(), "r");
    REQUIRE(pipe != nullptr);
    RunResult r;
    std::array<char, 512> buf;
    while (std::fgets(buf.data(), buf.size(), pipe) != nullptr) r.out += buf.data();
    const int status = pclose(pipe);
    r.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    return r;
}

const std::string& scratch_dir() {
    static const std::string dir = [] {
        std::string tmpl = "/tmp/qcorr_cli_XXXXXX";
        char* made = mkdtemp(tmpl.data());
        REQUIRE(made != nullptr);
        return std::string(made);
    }();
    return dir;
}

std::string write_scratch(const std::string& name, const std::string& content) {
    const std::string path = scratch_dir() + "/" + name;
    write_text_file(path, content);
    return path;
}

bool contains(const std::string& hay, const std::string& needle) {
    return hay.find(needle) != std::string::npos;
}

}  // namespace

TEST_CASE("state JSON round-trips exactly") {
    Rng rng(501);
    const BipartiteState s = random_mixed_state(rng, 2, 3);
    const BipartiteState back = parse_state_json(format_state_json(s));
    CHECK(back.dA == 2);
    CHECK(back.dB == 3);
    CHECK(back.rho.max_abs_diff(s.rho) == 0.0);
}

TEST_CASE("state JSON rejects malformed input") {
    CHECK_THROWS_WITH_AS(parse_state_json("{nope"), doctest::Contains("malformed"),
                         ConfigError);
    CHECK_THROWS_WITH_AS(parse_state_json(R"({"dA": 2, "dB": 2, "matrix": [], "x": 1})"),
                         doctest::Contains("unknown"), ConfigError);
    CHECK_THROWS_AS(parse_state_json(R"({"dA": 2, "dB": 2, "matrix": [[1, 0]]})"),
                    ConfigError);
    // Structurally fine but not a state.
    const std::string not_psd = R"({"dA": 1, "dB": 2, "matrix":
        [[1.5, 0], [0, 0], [0, 0], [-0.5, 0]]})";
    CHECK_THROWS_AS(parse_state_json(not_psd), ValidityError);
}

TEST_CASE("channel JSON round-trips every kind") {
    Rng rng(503);
    const std::vector<ChannelSpec> specs{
        ChannelSpec{random_affine_qubit_channel(rng)},
        ChannelSpec{random_isotropic(rng, 2, GammaKind::Unitary)},
        ChannelSpec{random_isotropic(rng, 3, GammaKind::Antiunitary)},
        ChannelSpec{random_decohering(rng, 2)},
        ChannelSpec{random_kraus_channel(rng, 2, 3)},
    };
    Rng probe_rng(505);
    for (const ChannelSpec& spec : specs) {
        const ChannelSpec back = parse_channel_json(format_channel_json(spec));
        CHECK(back.index() == spec.index());
        const std::size_t d = channel_dim_in(spec);
        const ComplexMatrix rho = random_mixed_state(probe_rng, 1, d).rho;
        CHECK(apply_channel(back, rho).max_abs_diff(apply_channel(spec, rho)) == 0.0);
    }
    CHECK_THROWS_WITH_AS(parse_channel_json(R"({"type": "warp", "factor": 9})"),
                         doctest::Contains("type"), ConfigError);
}

TEST_CASE("campaign config parsing applies defaults and validates") {
    const CampaignFile file = parse_campaign_config(
        R"({"campaign": "lcpo", "trials": 25, "seed": 4,
            "channel_family": "isotropic_unitary", "dims": [3, 2]})",
        true);
    CHECK(file.mode == CampaignMode::Lcpo);
    CHECK(file.config.trials == 25);
    CHECK(file.config.seed == 4);
    CHECK(file.config.dA == 3);
    CHECK(file.config.dB == 2);
    CHECK(file.config.tolerance == 1e-9);  // default preserved
    CHECK_FALSE(file.config.use_d_min);

    CHECK_THROWS_AS(parse_campaign_config(R"({"trials": 5})", true), ConfigError);
    CHECK(parse_campaign_config(R"({"trials": 5})", false).mode == CampaignMode::Scan);
    CHECK_THROWS_AS(parse_campaign_config(R"({"campaign": "sideways"})", true), ConfigError);
    CHECK_THROWS_AS(parse_campaign_config(R"({"trials": 0})", false), ConfigError);
    CHECK_THROWS_AS(parse_campaign_config(R"({"dims": [2]})", false), ConfigError);

    // Round-trip through the formatter.
    const std::string text = format_campaign_config(file);
    const CampaignFile again = parse_campaign_config(text, true);
    CHECK(again.mode == file.mode);
    CHECK(again.config.trials == file.config.trials);
    CHECK(again.config.dA == file.config.dA);
}

TEST_CASE("campaign report JSON embeds reproducible violation payloads") {
    CampaignConfig cfg;
    cfg.trials = 50;
    cfg.seed = 20240605;
    cfg.channel_family = ChannelFamily::KrausRandom;
    cfg.kraus_ops = 1;
    cfg.side = Subsystem::B;
    const CampaignReport rep = explore_bside_general(cfg);
    REQUIRE(!rep.violations.empty());

    const std::string text = format_report_json(rep, CampaignMode::Scan);
    CHECK(contains(text, "\"violations\""));
    CHECK(contains(text, "\"substream_seed\""));

    const std::string csv = format_csv(rep);
    // Header plus one line per trial.
    std::size_t lines = 0;
    for (char ch : csv) lines += (ch == '\n');
    CHECK(lines == cfg.trials + 1);
    CHECK(contains(csv, "index,D_before,D_after,excess"));
}

TEST_CASE("compute prints the measure for a Bell state") {
    const RunResult r = run_cli(
        "compute --state " +
        write_scratch("bell.json", format_state_json(testutil::bell_phi_plus())));
    CHECK(r.exit_code == 0);
    CHECK(contains(r.out, "D_A = 1.35355339059"));
    CHECK(contains(r.out, "pairs = 6"));
    // The Bell projector is Bell-diagonal, so the closed form is shown too.
    CHECK(contains(r.out, "bell_diagonal_D = 1.35355339059"));
}

TEST_CASE("compute --d-min reports the minimized value") {
    Rng rng(509);
    const std::string path =
        write_scratch("mixed.json", format_state_json(random_mixed_state(rng, 2, 2)));
    const RunResult r = run_cli("compute --d-min --state " + path);
    CHECK(r.exit_code == 0);
    CHECK(contains(r.out, "d_A = "));
    CHECK(contains(r.out, "evaluations = "));
    CHECK(contains(r.out, "converged = true"));

    const RunResult fast = run_cli("compute --fast --state " + path);
    CHECK(fast.exit_code == 0);
}

TEST_CASE("compute error paths map to the documented exit codes") {
    CHECK(run_cli("compute --state /nonexistent/state.json").exit_code == 3);
    const std::string bad = write_scratch("bad.json", "{not json");
    CHECK(run_cli("compute --state " + bad).exit_code == 2);
    const std::string invalid = write_scratch(
        "invalid.json",
        R"({"dA": 1, "dB": 2, "matrix": [[1.5, 0], [0, 0], [0, 0], [-0.5, 0]]})");
    CHECK(run_cli("compute --state " + invalid).exit_code == 2);
    CHECK(run_cli("").exit_code == 2);
    CHECK(run_cli("compute").exit_code == 2);  // missing required --state
    CHECK(run_cli("--help").exit_code == 0);
}

TEST_CASE("campaign subcommand runs a config file end to end") {
    const std::string cfg = write_scratch("lcpo.json",
                                          R"({"campaign": "lcpo", "trials": 60, "seed": 12,
                                              "channel_family": "unital_affine"})");
    const std::string out = scratch_dir() + "/lcpo_report.json";
    const std::string csv = scratch_dir() + "/lcpo_rows.csv";
    const RunResult r =
        run_cli("campaign --config " + cfg + " --out " + out + " --csv " + csv);
    CHECK(r.exit_code == 0);
    CHECK(contains(r.out, "campaign = lcpo"));
    CHECK(contains(r.out, "trials = 60"));
    CHECK(contains(r.out, "violations = 0"));

    CHECK(contains(read_text_file(out), "\"max_excess\""));
    std::size_t lines = 0;
    for (char ch : read_text_file(csv)) lines += (ch == '\n');
    CHECK(lines == 61);

    // Override knocks the trial count down.
    const RunResult fewer = run_cli("campaign --config " + cfg + " --trials 5");
    CHECK(fewer.exit_code == 0);
    CHECK(contains(fewer.out, "trials = 5"));
}

TEST_CASE("campaign subcommand rejects scan configs") {
    const std::string cfg = write_scratch(
        "scancfg.json", R"({"campaign": "scan", "trials": 10, "side": "B",
                            "channel_family": "kraus_random"})");
    const RunResult r = run_cli("campaign --config " + cfg);
    CHECK(r.exit_code == 2);
    CHECK(contains(r.out, "config error"));
}

TEST_CASE("scan subcommand documents violations without failing") {
    const std::string cfg = write_scratch(
        "scan.json", R"({"campaign": "scan", "trials": 50, "seed": 20240605, "side": "B",
                         "channel_family": "kraus_random", "kraus_ops": 1})");
    const std::string out = scratch_dir() + "/scan_report.json";
    const RunResult r = run_cli("scan --config " + cfg + " --out " + out);
    CHECK(r.exit_code == 0);  // findings are documented, never a failure
    CHECK(contains(r.out, "campaign = scan"));

    const std::string report = read_text_file(out);
    CHECK(contains(report, "\"trial_index\""));  // at least one recorded witness

    // A campaign-mode config is not a scan.
    const std::string lcpo = write_scratch(
        "notscan.json", R"({"campaign": "lcpo", "trials": 10})");
    CHECK(run_cli("scan --config " + lcpo + " --out " + out).exit_code == 2);
}

TEST_CASE("check-scaling verifies the quadratic law from the command line") {
    Rng rng(521);
    const std::string path =
        write_scratch("scaling.json", format_state_json(random_mixed_state(rng, 2, 2)));

    const RunResult identity = run_cli("check-scaling --state " + path + " --p 0.5 --kind unitary");
    CHECK(identity.exit_code == 0);
    CHECK(contains(identity.out, "discrepancy = "));

    const RunResult haar = run_cli("check-scaling --state " + path +
                                   " --p 0.25 --kind antiunitary --seed 77");
    CHECK(haar.exit_code == 0);

    CHECK(run_cli("check-scaling --state " + path + " --p 0.5 --kind sideways").exit_code ==
          2);
    // p outside the antiunitary interval is a validity error.
    CHECK(run_cli("check-scaling --state " + path + " --p 0.9 --kind antiunitary").exit_code ==
          2);
}

TEST_CASE("probe-basis summarises the sampled distribution") {
    const std::string path =
        write_scratch("probe.json", format_state_json(testutil::bell_phi_plus()));
    const RunResult r = run_cli("probe-basis --state " + path + " --samples 32 --seed 5");
    CHECK(r.exit_code == 0);
    CHECK(contains(r.out, "samples = 32"));
    CHECK(contains(r.out, "min = 1.35355339059"));
    CHECK(contains(r.out, "max = 1.35355339059"));

    CHECK(run_cli("probe-basis --state " + path + " --samples 32").exit_code == 2);
}
