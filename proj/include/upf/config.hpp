#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include "upf/scenario.hpp"

namespace upf {

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct AppSpec {
  std::string model;  // "sigmoid" or "log"
  double p1 = 0.0;    // steepness / k_log
  double p2 = 0.0;    // inflection / r_max
  double alpha = 0.0;
};

struct UESpec {
  std::string id;
  double beta = 1.0;
  std::vector<AppSpec> apps;
};

struct EventSpec {
  enum class Type { Join, Leave, SetAlphas };
  long slot = 0;
  Type type = Type::Join;
  UESpec ue;                   // join payload
  std::string id;              // leave / set-alphas target
  std::vector<double> alphas;  // set-alphas payload
};

// Everything a run needs, straight from one config file. Sections:
// [network] R, delta, damping, max_slots; [run] architecture, policy,
// beta_location, horizon; [ues] ue = ...; [events] event = ...;
// [overhead] deltas, scenarios.
struct RunConfig {
  double total_rate = 180.0;
  double delta = 1e-3;
  double damping = 1.0;
  long max_slots = 20000;
  Architecture architecture = Architecture::Distributed;
  RebidPolicy policy = RebidPolicy::Rebid;
  BetaLocation beta_location = BetaLocation::AtUe;
  long horizon = 100;
  std::vector<UESpec> ues;
  std::vector<EventSpec> events;
  std::vector<double> overhead_deltas{1e-2, 1e-3, 1e-4};
  std::vector<std::string> overhead_scenarios{"fresh", "churn-up",
                                              "churn-down", "usage"};
};

// Throws ConfigError with a line reference on any malformed input.
RunConfig parse_config(const std::string& text);

// Canonical text form; parse_config(render_config(c)) reproduces c.
std::string render_config(const RunConfig& config);

UEDefinition to_definition(const UESpec& spec);
std::vector<UEProfile> build_profiles(const RunConfig& config);
ScenarioScript build_script(const RunConfig& config);

}  // namespace upf
