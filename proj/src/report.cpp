#include "upf/report.hpp"

#include <cstdint>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "json.hpp"
#include "upf/version.hpp"

namespace upf {

std::string format_number(double value) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.12g", value);
  return buf;
}

std::string fnv1a_hex(std::string_view data) {
  std::uint64_t hash = 0xcbf29ce484222325ULL;
  for (const char c : data) {
    hash ^= static_cast<unsigned char>(c);
    hash *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx",
                static_cast<unsigned long long>(hash));
  return buf;
}

std::string manifest_json(const RunManifest& manifest) {
  nlohmann::ordered_json j;
  j["command"] = manifest.command;
  j["tool_version"] = manifest.tool_version;
  if (!manifest.preset.empty()) j["preset"] = manifest.preset;
  if (!manifest.config_path.empty()) j["config_path"] = manifest.config_path;
  j["config_hash"] = manifest.config_hash;
  j["parameters"] = {
      {"R", manifest.total_rate},
      {"delta", manifest.delta},
      {"damping", manifest.damping},
      {"max_slots", manifest.max_slots},
      {"horizon", manifest.horizon},
      {"architecture", to_string(manifest.architecture)},
      {"policy", to_string(manifest.policy)},
      {"beta_location", to_string(manifest.beta_location)},
  };
  j["outputs"] = manifest.outputs;
  return j.dump(2) + "\n";
}

std::string allocation_csv(const std::vector<UEProfile>& ues,
                           const Allocation& alloc) {
  std::ostringstream out;
  out << "ue_id,app_index,model,rate,ue_total\n";
  for (const auto& ue : ues) {
    const auto& rates = alloc.app_rates.at(ue.id());
    for (std::size_t j = 0; j < rates.size(); ++j) {
      const bool sigmoid =
          std::holds_alternative<SigmoidParams>(ue.apps()[j].utility);
      out << ue.id() << ',' << j << ',' << (sigmoid ? "sigmoid" : "log") << ','
          << format_number(rates[j]) << ','
          << format_number(alloc.ue_rates.at(ue.id())) << '\n';
    }
  }
  return out.str();
}

std::string timeseries_csv(const TimeSeriesResult& result) {
  std::ostringstream out;
  out << "slot,ue_id,rate,bid,price,overhead_cum,rate_err,bid_err,price_err\n";
  for (const auto& sample : result.slots) {
    const double price_err =
        100.0 * std::abs(sample.price - sample.price_opt) / sample.price_opt;
    for (const auto& ue : sample.ues) {
      out << sample.slot << ',' << ue.id << ',' << format_number(ue.rate)
          << ',' << format_number(ue.bid) << ',' << format_number(sample.price)
          << ',' << sample.overhead_cum << ','
          << format_number(std::abs(ue.rate - ue.rate_opt)) << ','
          << format_number(std::abs(ue.bid - ue.bid_opt)) << ','
          << format_number(price_err) << '\n';
    }
  }
  return out.str();
}

std::string overhead_csv(const std::vector<OverheadOutcome>& outcomes) {
  std::ostringstream out;
  out << "scenario,architecture,policy,beta_location,delta,predicted_min,"
         "measured,slots,converged\n";
  for (const auto& o : outcomes) {
    out << o.scenario_case.scenario << ','
        << to_string(o.scenario_case.architecture) << ','
        << to_string(o.scenario_case.policy) << ','
        << to_string(o.scenario_case.beta_location) << ','
        << format_number(o.scenario_case.delta) << ',' << o.predicted_min
        << ',' << o.measured << ',' << o.slots << ','
        << (o.converged ? "yes" : "no") << '\n';
  }
  return out.str();
}

std::string kkt_json(const KktReport& report) {
  nlohmann::ordered_json j;
  j["shadow_price"] = report.shadow_price;
  j["stationarity_rel"] = report.stationarity_rel;
  j["feasibility_rel"] = report.feasibility_rel;
  j["stationarity_tol"] = KktReport::kStationarityTol;
  j["feasibility_tol"] = KktReport::kFeasibilityTol;
  j["pass"] = report.pass;
  return j.dump(2) + "\n";
}

void write_file(const std::filesystem::path& path, std::string_view content) {
  const auto tmp = path.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot open '" + tmp + "' for writing");
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    if (!out) throw std::runtime_error("short write to '" + tmp + "'");
  }
  std::filesystem::rename(tmp, path);
}

}  // namespace upf
