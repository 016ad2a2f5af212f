#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "json.hpp"
#include "upf/config.hpp"
#include "upf/presets.hpp"
#include "upf/report.hpp"
#include "upf/version.hpp"

namespace {

namespace fs = std::filesystem;

struct CommonOptions {
  std::string config_path;
  std::string preset_name;
  std::string out_dir = "upf_out";
  std::optional<double> delta;
  std::optional<std::string> policy;
  std::optional<std::string> architecture;
  std::optional<std::string> beta_location;
  bool seedless = false;
  bool trace = false;
};

void add_common(CLI::App* cmd, CommonOptions& opt) {
  cmd->add_option("--config", opt.config_path, "scenario config file");
  cmd->add_option("--preset", opt.preset_name, "named preset")
      ->check(CLI::IsMember(upf::preset_names()));
  cmd->add_option("--out", opt.out_dir, "output directory");
  cmd->add_option("--delta", opt.delta, "override termination threshold");
  cmd->add_option("--policy", opt.policy, "override rebid policy")
      ->check(CLI::IsMember({"rebid", "no-rebid"}));
  cmd->add_option("--arch", opt.architecture, "override architecture")
      ->check(CLI::IsMember({"centralized", "distributed"}));
  cmd->add_option("--beta-location", opt.beta_location,
                  "override subscriber-weight location")
      ->check(CLI::IsMember({"ue", "enb"}));
  cmd->add_flag("--seedless", opt.seedless,
                "documents the absence of randomness; runs are always "
                "deterministic");
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read config '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

upf::RunConfig resolve_config(const CommonOptions& opt) {
  if (opt.config_path.empty() == opt.preset_name.empty())
    throw std::runtime_error("give exactly one of --config or --preset");
  upf::RunConfig config = opt.config_path.empty()
                              ? upf::preset(opt.preset_name)
                              : upf::parse_config(read_file(opt.config_path));
  if (opt.delta) config.delta = *opt.delta;
  if (opt.policy)
    config.policy = *opt.policy == "rebid" ? upf::RebidPolicy::Rebid
                                           : upf::RebidPolicy::NoRebid;
  if (opt.architecture)
    config.architecture = *opt.architecture == "centralized"
                              ? upf::Architecture::Centralized
                              : upf::Architecture::Distributed;
  if (opt.beta_location)
    config.beta_location = *opt.beta_location == "ue"
                               ? upf::BetaLocation::AtUe
                               : upf::BetaLocation::AtEnb;
  return config;
}

upf::RunManifest make_manifest(const std::string& command,
                               const CommonOptions& opt,
                               const upf::RunConfig& config,
                               const std::string& resolved_text) {
  upf::RunManifest manifest;
  manifest.command = command;
  manifest.tool_version = upf::kVersion;
  manifest.preset = opt.preset_name;
  manifest.config_path = opt.config_path;
  manifest.config_hash = upf::fnv1a_hex(resolved_text);
  manifest.total_rate = config.total_rate;
  manifest.delta = config.delta;
  manifest.damping = config.damping;
  manifest.max_slots = config.max_slots;
  manifest.horizon = config.horizon;
  manifest.architecture = config.architecture;
  manifest.policy = config.policy;
  manifest.beta_location = config.beta_location;
  return manifest;
}

void emit(const fs::path& dir, upf::RunManifest& manifest,
          std::vector<std::pair<std::string, std::string>> files) {
  fs::create_directories(dir);
  for (const auto& [name, content] : files) manifest.outputs.push_back(name);
  manifest.outputs.push_back("manifest.json");
  for (const auto& [name, content] : files) upf::write_file(dir / name, content);
  upf::write_file(dir / "manifest.json", upf::manifest_json(manifest));
}

void print_ok(const upf::RunManifest& manifest, nlohmann::ordered_json extra) {
  nlohmann::ordered_json j;
  j["status"] = "ok";
  j["out"] = manifest.outputs;
  j.update(extra);
  std::cout << j.dump() << '\n';
}

int cmd_allocate(const CommonOptions& opt) {
  const upf::RunConfig config = resolve_config(opt);
  const std::string resolved = upf::render_config(config);
  const auto profiles = upf::build_profiles(config);
  const auto alloc = upf::allocate_centralized(profiles, config.total_rate);
  const auto report = upf::kkt_certificate(profiles, config.total_rate, alloc);

  auto manifest = make_manifest("allocate", opt, config, resolved);
  emit(opt.out_dir, manifest,
       {{"allocation.csv", upf::allocation_csv(profiles, alloc)},
        {"kkt.json", upf::kkt_json(report)},
        {"resolved_config.cfg", resolved}});
  print_ok(manifest, {{"kkt_pass", report.pass},
                      {"shadow_price", alloc.shadow_price}});
  return report.pass ? 0 : 1;
}

int cmd_simulate(const CommonOptions& opt) {
  const upf::RunConfig config = resolve_config(opt);
  const std::string resolved = upf::render_config(config);
  const auto result = upf::run_scenario(upf::build_script(config));

  auto manifest = make_manifest("simulate", opt, config, resolved);
  std::vector<std::pair<std::string, std::string>> files = {
      {"timeseries.csv", upf::timeseries_csv(result)},
      {"resolved_config.cfg", resolved}};
  if (opt.trace) files.emplace_back("trace.log", upf::trace_to_string(result.trace));
  emit(opt.out_dir, manifest, std::move(files));
  print_ok(manifest, {{"all_converged", result.all_converged},
                      {"transmissions", result.trace.size()}});
  return 0;
}

int cmd_overhead(CommonOptions opt) {
  if (opt.config_path.empty() && opt.preset_name.empty())
    opt.preset_name = "overhead-grid";
  const upf::RunConfig config = resolve_config(opt);
  const std::string resolved = upf::render_config(config);
  std::vector<double> deltas =
      opt.delta ? std::vector<double>{*opt.delta} : config.overhead_deltas;
  const auto outcomes =
      upf::run_overhead_grid(deltas, config.overhead_scenarios);

  bool bound_ok = true;
  for (const auto& o : outcomes)
    if (o.measured < o.predicted_min) bound_ok = false;

  auto manifest = make_manifest("overhead", opt, config, resolved);
  emit(opt.out_dir, manifest,
       {{"overhead.csv", upf::overhead_csv(outcomes)},
        {"resolved_config.cfg", resolved}});
  print_ok(manifest, {{"rows", outcomes.size()}, {"bound_ok", bound_ok}});
  return bound_ok ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"utility-proportional-fair rate allocation and simulation"};
  app.set_version_flag("--version", upf::kVersion);
  app.require_subcommand(1);

  CommonOptions allocate_opt, simulate_opt, overhead_opt;
  auto* allocate =
      app.add_subcommand("allocate", "one-shot centralized allocation");
  add_common(allocate, allocate_opt);
  auto* simulate =
      app.add_subcommand("simulate", "time-slotted scenario simulation");
  add_common(simulate, simulate_opt);
  simulate->add_flag("--trace", simulate_opt.trace,
                     "also export the message trace");
  auto* overhead = app.add_subcommand(
      "overhead", "predicted vs measured transmission counts");
  add_common(overhead, overhead_opt);

  CLI11_PARSE(app, argc, argv);

  try {
    if (allocate->parsed()) return cmd_allocate(allocate_opt);
    if (simulate->parsed()) return cmd_simulate(simulate_opt);
    return cmd_overhead(overhead_opt);
  } catch (const std::exception& e) {
    nlohmann::ordered_json j;
    j["status"] = "error";
    j["message"] = e.what();
    std::cout << j.dump() << '\n';
    return 1;
  }
}
