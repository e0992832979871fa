#include "qcorr/io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace qcorr {

namespace {

using nlohmann::json;

json complex_to_json(const cdouble& z) { return json::array({z.real(), z.imag()}); }

cdouble json_to_complex(const json& j) {
    if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number()) {
        throw ConfigError("expected a complex entry as [re, im]");
    }
    return {j[0].get<double>(), j[1].get<double>()};
}

json matrix_to_json(const ComplexMatrix& m) {
    json out = json::array();
    for (const auto& e : m.data()) out.push_back(complex_to_json(e));
    return out;
}

ComplexMatrix json_to_matrix(const json& j, std::size_t rows, std::size_t cols,
                             const char* what) {
    if (!j.is_array() || j.size() != rows * cols) {
        throw ConfigError(std::string(what) + ": expected " + std::to_string(rows * cols) +
                          " row-major [re, im] entries");
    }
    std::vector<cdouble> entries;
    entries.reserve(rows * cols);
    for (const auto& e : j) entries.push_back(json_to_complex(e));
    return ComplexMatrix(rows, cols, std::move(entries));
}

json parse_text(const std::string& text) {
    json j = json::parse(text, nullptr, false);
    if (j.is_discarded()) throw ConfigError("malformed JSON");
    return j;
}

void require_keys(const json& j, std::initializer_list<const char*> allowed,
                  const char* what) {
    for (const auto& [key, value] : j.items()) {
        (void)value;
        bool ok = false;
        for (const char* a : allowed) {
            if (key == a) {
                ok = true;
                break;
            }
        }
        if (!ok) {
            throw ConfigError(std::string(what) + ": unknown field \"" + key + "\"");
        }
    }
}

std::size_t get_positive_int(const json& j, const char* key, const char* what) {
    if (!j.contains(key) || !j[key].is_number_integer() || j[key].get<long long>() < 1) {
        throw ConfigError(std::string(what) + ": field \"" + key +
                          "\" must be a positive integer");
    }
    return static_cast<std::size_t>(j[key].get<long long>());
}

}  // namespace

BipartiteState parse_state_json(const std::string& text) {
    const json j = parse_text(text);
    if (!j.is_object()) throw ConfigError("state: expected a JSON object");
    require_keys(j, {"dA", "dB", "matrix"}, "state");
    if (!j.contains("matrix")) throw ConfigError("state: missing \"matrix\"");
    const std::size_t dA = get_positive_int(j, "dA", "state");
    const std::size_t dB = get_positive_int(j, "dB", "state");
    BipartiteState state{dA, dB, json_to_matrix(j["matrix"], dA * dB, dA * dB, "state")};
    validate_state(state);
    return state;
}

std::string format_state_json(const BipartiteState& state) {
    json j;
    j["dA"] = state.dA;
    j["dB"] = state.dB;
    j["matrix"] = matrix_to_json(state.rho);
    return j.dump(2) + "\n";
}

namespace {

ChannelSpec channel_from_json(const json& j) {
    if (!j.is_object() || !j.contains("type") || !j["type"].is_string()) {
        throw ConfigError("channel: expected an object with a \"type\" field");
    }
    const std::string type = j["type"].get<std::string>();
    if (type == "affine") {
        require_keys(j, {"type", "t", "lambda"}, "affine channel");
        auto read3 = [&](const char* key) {
            if (!j.contains(key) || !j[key].is_array() || j[key].size() != 3) {
                throw ConfigError(std::string("affine channel: \"") + key +
                                  "\" must be a 3-vector");
            }
            std::array<double, 3> v;
            for (std::size_t k = 0; k < 3; ++k) {
                if (!j[key][k].is_number()) {
                    throw ConfigError(std::string("affine channel: \"") + key +
                                      "\" must hold numbers");
                }
                v[k] = j[key][k].get<double>();
            }
            return v;
        };
        return validate_affine(read3("t"), read3("lambda"));
    }
    if (type == "isotropic") {
        require_keys(j, {"type", "p", "gamma", "U", "d"}, "isotropic channel");
        if (!j.contains("p") || !j["p"].is_number()) {
            throw ConfigError("isotropic channel: missing numeric \"p\"");
        }
        if (!j.contains("gamma") || !j["gamma"].is_string()) {
            throw ConfigError("isotropic channel: missing \"gamma\" (unitary/antiunitary)");
        }
        const std::string gamma = j["gamma"].get<std::string>();
        GammaKind kind;
        if (gamma == "unitary") {
            kind = GammaKind::Unitary;
        } else if (gamma == "antiunitary") {
            kind = GammaKind::Antiunitary;
        } else {
            throw ConfigError("isotropic channel: gamma must be \"unitary\" or \"antiunitary\"");
        }
        const std::size_t d = get_positive_int(j, "d", "isotropic channel");
        if (!j.contains("U")) throw ConfigError("isotropic channel: missing \"U\"");
        return make_isotropic(j["p"].get<double>(), kind,
                              json_to_matrix(j["U"], d, d, "isotropic channel U"));
    }
    if (type == "decohering") {
        require_keys(j, {"type", "basis"}, "decohering channel");
        if (!j.contains("basis") || !j["basis"].is_array() || j["basis"].empty()) {
            throw ConfigError("decohering channel: missing basis vector list");
        }
        const std::size_t d = j["basis"].size();
        std::vector<ComplexMatrix> basis;
        basis.reserve(d);
        for (const auto& vec : j["basis"]) {
            basis.push_back(json_to_matrix(vec, d, 1, "decohering basis vector"));
        }
        return make_decohering(std::move(basis));
    }
    if (type == "kraus") {
        require_keys(j, {"type", "d", "ops"}, "kraus channel");
        const std::size_t d = get_positive_int(j, "d", "kraus channel");
        if (!j.contains("ops") || !j["ops"].is_array() || j["ops"].empty()) {
            throw ConfigError("kraus channel: missing operator list");
        }
        std::vector<ComplexMatrix> ops;
        ops.reserve(j["ops"].size());
        for (const auto& op : j["ops"]) {
            ops.push_back(json_to_matrix(op, d, d, "kraus operator"));
        }
        return make_kraus(std::move(ops));
    }
    throw ConfigError("channel: unknown type \"" + type + "\"");
}

json channel_to_json_impl(const ChannelSpec& channel) {
    struct Visitor {
        json operator()(const AffineQubitChannel& c) const {
            json j;
            j["type"] = "affine";
            j["t"] = c.t;
            j["lambda"] = c.lambda;
            return j;
        }
        json operator()(const IsotropicChannel& c) const {
            json j;
            j["type"] = "isotropic";
            j["p"] = c.p;
            j["gamma"] = (c.kind == GammaKind::Unitary) ? "unitary" : "antiunitary";
            j["d"] = c.d;
            j["U"] = matrix_to_json(c.U);
            return j;
        }
        json operator()(const DecoheringChannel& c) const {
            json j;
            j["type"] = "decohering";
            json basis = json::array();
            for (const auto& v : c.basis) basis.push_back(matrix_to_json(v));
            j["basis"] = std::move(basis);
            return j;
        }
        json operator()(const KrausChannel& c) const {
            json j;
            j["type"] = "kraus";
            j["d"] = c.d_in();
            json ops = json::array();
            for (const auto& k : c.ops) ops.push_back(matrix_to_json(k));
            j["ops"] = std::move(ops);
            return j;
        }
    };
    return std::visit(Visitor{}, channel);
}

const char* state_family_name(StateFamily f) {
    switch (f) {
        case StateFamily::RandomMixed: return "random_mixed";
        case StateFamily::RandomPure: return "random_pure";
        case StateFamily::BellDiagonal: return "bell_diagonal";
        case StateFamily::ClassicalQuantum: return "classical_quantum";
    }
    return "random_mixed";
}

const char* channel_family_name(ChannelFamily f) {
    switch (f) {
        case ChannelFamily::UnitalAffine: return "unital_affine";
        case ChannelFamily::Affine: return "affine";
        case ChannelFamily::IsotropicUnitary: return "isotropic_unitary";
        case ChannelFamily::IsotropicAntiunitary: return "isotropic_antiunitary";
        case ChannelFamily::Decohering: return "decohering";
        case ChannelFamily::KrausRandom: return "kraus_random";
    }
    return "unital_affine";
}

StateFamily parse_state_family(const std::string& name) {
    if (name == "random_mixed") return StateFamily::RandomMixed;
    if (name == "random_pure") return StateFamily::RandomPure;
    if (name == "bell_diagonal") return StateFamily::BellDiagonal;
    if (name == "classical_quantum") return StateFamily::ClassicalQuantum;
    throw ConfigError("campaign config: unknown state_family \"" + name + "\"");
}

ChannelFamily parse_channel_family(const std::string& name) {
    if (name == "unital_affine") return ChannelFamily::UnitalAffine;
    if (name == "affine") return ChannelFamily::Affine;
    if (name == "isotropic_unitary") return ChannelFamily::IsotropicUnitary;
    if (name == "isotropic_antiunitary") return ChannelFamily::IsotropicAntiunitary;
    if (name == "decohering") return ChannelFamily::Decohering;
    if (name == "kraus_random") return ChannelFamily::KrausRandom;
    throw ConfigError("campaign config: unknown channel_family \"" + name + "\"");
}

const char* mode_name(CampaignMode m) {
    switch (m) {
        case CampaignMode::Lcpo: return "lcpo";
        case CampaignMode::BsideBell: return "bside_bell";
        case CampaignMode::Scan: return "scan";
    }
    return "lcpo";
}

json config_to_json(const CampaignConfig& c, CampaignMode mode) {
    json j;
    j["campaign"] = mode_name(mode);
    j["trials"] = c.trials;
    j["seed"] = c.seed;
    j["state_family"] = state_family_name(c.state_family);
    j["channel_family"] = channel_family_name(c.channel_family);
    j["side"] = (c.side == Subsystem::A) ? "A" : "B";
    j["dims"] = json::array({c.dA, c.dB});
    j["tolerance"] = c.tolerance;
    j["use_d_min"] = c.use_d_min;
    j["rank"] = c.rank;
    j["kraus_ops"] = c.kraus_ops;
    return j;
}

}  // namespace

ChannelSpec parse_channel_json(const std::string& text) {
    return channel_from_json(parse_text(text));
}

std::string format_channel_json(const ChannelSpec& channel) {
    return channel_to_json_impl(channel).dump(2) + "\n";
}

CampaignFile parse_campaign_config(const std::string& text, bool require_mode) {
    const json j = parse_text(text);
    if (!j.is_object()) throw ConfigError("campaign config: expected a JSON object");
    require_keys(j,
                 {"campaign", "trials", "seed", "state_family", "channel_family", "side",
                  "dims", "tolerance", "use_d_min", "rank", "kraus_ops"},
                 "campaign config");
    CampaignFile file;
    if (j.contains("campaign")) {
        if (!j["campaign"].is_string()) {
            throw ConfigError("campaign config: \"campaign\" must be a string");
        }
        const std::string mode = j["campaign"].get<std::string>();
        if (mode == "lcpo") {
            file.mode = CampaignMode::Lcpo;
        } else if (mode == "bside_bell") {
            file.mode = CampaignMode::BsideBell;
        } else if (mode == "scan") {
            file.mode = CampaignMode::Scan;
        } else {
            throw ConfigError("campaign config: unknown campaign mode \"" + mode + "\"");
        }
    } else if (require_mode) {
        throw ConfigError("campaign config: missing \"campaign\" (lcpo or bside_bell)");
    } else {
        file.mode = CampaignMode::Scan;
    }
    CampaignConfig& c = file.config;
    if (j.contains("trials")) c.trials = get_positive_int(j, "trials", "campaign config");
    if (j.contains("seed")) {
        if (!j["seed"].is_number_integer()) {
            throw ConfigError("campaign config: \"seed\" must be an integer");
        }
        c.seed = j["seed"].get<std::uint64_t>();
    }
    if (j.contains("state_family")) {
        if (!j["state_family"].is_string()) {
            throw ConfigError("campaign config: \"state_family\" must be a string");
        }
        c.state_family = parse_state_family(j["state_family"].get<std::string>());
    }
    if (j.contains("channel_family")) {
        if (!j["channel_family"].is_string()) {
            throw ConfigError("campaign config: \"channel_family\" must be a string");
        }
        c.channel_family = parse_channel_family(j["channel_family"].get<std::string>());
    }
    if (j.contains("side")) {
        if (!j["side"].is_string() ||
            (j["side"].get<std::string>() != "A" && j["side"].get<std::string>() != "B")) {
            throw ConfigError("campaign config: \"side\" must be \"A\" or \"B\"");
        }
        c.side = (j["side"].get<std::string>() == "A") ? Subsystem::A : Subsystem::B;
    }
    if (j.contains("dims")) {
        if (!j["dims"].is_array() || j["dims"].size() != 2 ||
            !j["dims"][0].is_number_integer() || !j["dims"][1].is_number_integer() ||
            j["dims"][0].get<long long>() < 1 || j["dims"][1].get<long long>() < 1) {
            throw ConfigError("campaign config: \"dims\" must be [dA, dB] positive integers");
        }
        c.dA = static_cast<std::size_t>(j["dims"][0].get<long long>());
        c.dB = static_cast<std::size_t>(j["dims"][1].get<long long>());
    }
    if (j.contains("tolerance")) {
        if (!j["tolerance"].is_number()) {
            throw ConfigError("campaign config: \"tolerance\" must be a number");
        }
        c.tolerance = j["tolerance"].get<double>();
    }
    if (j.contains("use_d_min")) {
        if (!j["use_d_min"].is_boolean()) {
            throw ConfigError("campaign config: \"use_d_min\" must be a boolean");
        }
        c.use_d_min = j["use_d_min"].get<bool>();
    }
    if (j.contains("rank")) {
        if (!j["rank"].is_number_integer() || j["rank"].get<long long>() < 0) {
            throw ConfigError("campaign config: \"rank\" must be a nonnegative integer");
        }
        c.rank = static_cast<std::size_t>(j["rank"].get<long long>());
    }
    if (j.contains("kraus_ops")) c.kraus_ops = get_positive_int(j, "kraus_ops", "campaign config");
    return file;
}

std::string format_campaign_config(const CampaignFile& file) {
    return config_to_json(file.config, file.mode).dump(2) + "\n";
}

std::string format_report_json(const CampaignReport& report, CampaignMode mode) {
    json j;
    j["config"] = config_to_json(report.config, mode);
    j["trials_run"] = report.trials_run;
    j["max_excess"] = report.max_excess;
    j["runtime_ms"] = report.runtime_ms;
    json violations = json::array();
    for (const auto& v : report.violations) {
        json rec;
        rec["trial_index"] = v.trial_index;
        rec["substream_seed"] = v.substream_seed;
        rec["D_before"] = v.d_before;
        rec["D_after"] = v.d_after;
        json state;
        state["dA"] = v.state.dA;
        state["dB"] = v.state.dB;
        state["matrix"] = matrix_to_json(v.state.rho);
        rec["state"] = std::move(state);
        rec["channel"] = channel_to_json_impl(v.channel);
        violations.push_back(std::move(rec));
    }
    j["violations"] = std::move(violations);
    return j.dump(2) + "\n";
}

std::string format_csv(const CampaignReport& report) {
    std::string out = "index,D_before,D_after,excess\n";
    char buf[128];
    for (const auto& row : report.rows) {
        std::snprintf(buf, sizeof(buf), "%zu,%.17g,%.17g,%.17g\n", row.index, row.d_before,
                      row.d_after, row.excess);
        out += buf;
    }
    return out;
}

std::string read_text_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open " + path + " for reading");
    std::ostringstream ss;
    ss << in.rdbuf();
    if (in.bad()) throw IoError("failed while reading " + path);
    return ss.str();
}

void write_text_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot open " + path + " for writing");
    out << content;
    out.flush();
    if (!out) throw IoError("failed while writing " + path);
}

BipartiteState load_state(const std::string& path) {
    return parse_state_json(read_text_file(path));
}

void save_state(const BipartiteState& state, const std::string& path) {
    write_text_file(path, format_state_json(state));
}

ChannelSpec load_channel(const std::string& path) {
    return parse_channel_json(read_text_file(path));
}

void save_channel(const ChannelSpec& channel, const std::string& path) {
    write_text_file(path, format_channel_json(channel));
}

CampaignFile load_campaign_config(const std::string& path, bool require_mode) {
    return parse_campaign_config(read_text_file(path), require_mode);
}

}  // namespace qcorr
