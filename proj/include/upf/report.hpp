#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "upf/centralized.hpp"
#include "upf/presets.hpp"
#include "upf/scenario.hpp"

namespace upf {

// Reproducibility key for one CLI invocation: the manifest plus the tool
// version fully determine every output byte.
struct RunManifest {
  std::string command;
  std::string tool_version;
  std::string preset;       // empty when a config file was given
  std::string config_path;  // empty when a preset was used
  std::string config_hash;  // FNV-1a 64 of the resolved config text
  double total_rate = 0.0;
  double delta = 0.0;
  double damping = 1.0;
  long max_slots = 0;
  long horizon = 0;
  Architecture architecture = Architecture::Distributed;
  RebidPolicy policy = RebidPolicy::Rebid;
  BetaLocation beta_location = BetaLocation::AtUe;
  std::vector<std::string> outputs;
};

std::string manifest_json(const RunManifest& manifest);

// CSV emitters. Headers and column order are pinned by golden tests.
std::string allocation_csv(const std::vector<UEProfile>& ues,
                           const Allocation& alloc);
std::string timeseries_csv(const TimeSeriesResult& result);
std::string overhead_csv(const std::vector<OverheadOutcome>& outcomes);

std::string kkt_json(const KktReport& report);

// 16 hex digits of the FNV-1a 64-bit hash.
std::string fnv1a_hex(std::string_view data);

// Fixed "%.12g" rendering used by every CSV column.
std::string format_number(double value);

// Write via a temp file and rename, so readers never see partial content.
void write_file(const std::filesystem::path& path, std::string_view content);

}  // namespace upf
