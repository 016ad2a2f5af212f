#pragma once

#include <string>
#include <vector>

#include "upf/config.hpp"
#include "upf/scenario.hpp"

namespace upf {

// Stock six-UE cell: each UE runs one real-time (sigmoid) and one
// delay-tolerant (log) application. Parameters are documented stand-ins
// chosen to span voice-like, video-like, and bulk-transfer behavior; all
// shipped checks are property-based, not tied to these numbers.
std::vector<UEDefinition> default_cell();

// Named, reproducible experiment setups:
//   fresh-start   one interval, no events
//   usage-sweep   five 100-slot intervals of scheduled usage switches
//   churn-5-to-6  five UEs, the sixth joining at slot 101
//   overhead-grid fresh/churn/usage scenario grid for the overhead command
std::vector<std::string> preset_names();
RunConfig preset(const std::string& name);

struct OverheadCase {
  std::string scenario;  // fresh | churn-up | churn-down | usage
  Architecture architecture = Architecture::Centralized;
  RebidPolicy policy = RebidPolicy::Rebid;
  BetaLocation beta_location = BetaLocation::AtUe;
  double delta = 1e-3;
};

struct OverheadOutcome {
  OverheadCase scenario_case;
  long predicted_min = 0;  // closed form at one bidding iteration
  long measured = 0;       // transmissions in the post-event window
  long slots = 0;          // exchanges from the event to convergence
  bool converged = true;
};

// Simulate every (scenario, architecture, policy, beta location, delta)
// combination and pair the measured count with the closed-form minimum.
std::vector<OverheadOutcome> run_overhead_grid(
    const std::vector<double>& deltas,
    const std::vector<std::string>& scenarios);

}  // namespace upf
