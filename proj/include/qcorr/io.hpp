#pragma once

#include <string>

#include "qcorr/campaign.hpp"
#include "qcorr/channels.hpp"
#include "qcorr/states.hpp"

namespace qcorr {

/// Which runner a campaign config file drives.
enum class CampaignMode { Lcpo, BsideBell, Scan };

struct CampaignFile {
    CampaignMode mode = CampaignMode::Lcpo;
    CampaignConfig config;
};

// String-level codecs. Parsers throw ConfigError on malformed or
// mismatched content; the returned objects are fully validated.
BipartiteState parse_state_json(const std::string& text);
std::string format_state_json(const BipartiteState& state);

ChannelSpec parse_channel_json(const std::string& text);
std::string format_channel_json(const ChannelSpec& channel);

/// require_mode: when true the config must carry a "campaign" field
/// (lcpo / bside_bell); scan configs may omit it.
CampaignFile parse_campaign_config(const std::string& text, bool require_mode);
std::string format_campaign_config(const CampaignFile& file);

std::string format_report_json(const CampaignReport& report, CampaignMode mode);
std::string format_csv(const CampaignReport& report);

// File wrappers; unreadable/unwritable paths throw IoError.
std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& content);

BipartiteState load_state(const std::string& path);
void save_state(const BipartiteState& state, const std::string& path);
ChannelSpec load_channel(const std::string& path);
void save_channel(const ChannelSpec& channel, const std::string& path);
CampaignFile load_campaign_config(const std::string& path, bool require_mode);

}  // namespace qcorr
