#pragma once

#include <map>
#include <string>
#include <variant>
#include <vector>

#include "upf/centralized.hpp"
#include "upf/distributed.hpp"
#include "upf/overhead.hpp"
#include "upf/utility.hpp"

namespace upf {

// Scenario-level UE description: the full application list with raw usage
// fractions. A zero fraction parks the application for the interval; the
// active profile drops parked apps and renormalizes the rest.
struct UEDefinition {
  std::string id;
  double beta = 1.0;
  std::vector<UtilityFunction> utilities;
  std::vector<double> alphas;  // same length as utilities; >= 0, not all 0

  UEProfile active_profile() const;
};

struct JoinUE {
  UEDefinition ue;
};
struct LeaveUE {
  std::string id;
};
struct SetAlphas {
  std::string id;
  std::vector<double> alphas;  // aligned to the UE's application list
};

struct ScenarioEvent {
  long slot = 0;
  std::variant<JoinUE, LeaveUE, SetAlphas> action;
};

// Time-slotted experiment: slots 1..horizon, events taking effect at the
// start of their slot. Events sharing a slot form one batch applied
// atomically before reallocation.
struct ScenarioScript {
  std::vector<UEDefinition> initial_ues;
  double total_rate = 0.0;
  long horizon = 0;
  std::vector<ScenarioEvent> events;  // slots non-decreasing, in (1, horizon]
  RebidPolicy policy = RebidPolicy::Rebid;
  Architecture architecture = Architecture::Distributed;
  ProtocolConfig cfg;
};

// Fresh full-information solve mapped to (rates, bids, price); the ground
// truth for error traces.
struct OracleSolution {
  std::map<std::string, double> rates;  // per-UE totals
  std::map<std::string, double> bids;   // p* x r*
  double price = 0.0;
  Allocation allocation;                // per-application detail
};

OracleSolution oracle_optimal(const std::vector<UEProfile>& ues,
                              double total_rate);

struct UESample {
  std::string id;
  double rate = 0.0;
  double bid = 0.0;
  double rate_opt = 0.0;
  double bid_opt = 0.0;
};

struct SlotSample {
  long slot = 0;
  double price = 0.0;
  double price_opt = 0.0;
  long overhead_cum = 0;
  std::vector<UESample> ues;  // active UEs, script order
};

// One steady-state window between consecutive events.
struct IntervalSummary {
  long start_slot = 0;
  long end_slot = 0;
  bool converged = false;
  long convergence_slot = 0;  // slot where the bid-change test passed
  std::map<std::string, double> steady_rates;
  std::map<std::string, double> steady_bids;
  double steady_price = 0.0;
  OracleSolution oracle;
  long messages = 0;  // transmissions inside [start_slot, end_slot]
};

struct TimeSeriesResult {
  std::vector<SlotSample> slots;
  std::vector<IntervalSummary> intervals;
  MessageTrace trace;
  bool all_converged = true;
};

// Execute the script. Distributed non-convergence inside an interval is
// flagged on that interval (and clears all_converged), never thrown.
TimeSeriesResult run_scenario(const ScenarioScript& script);

struct SlotErrorRow {
  long slot = 0;
  std::map<std::string, double> rate_err;
  std::map<std::string, double> bid_err;
  double price_err_abs = 0.0;
  double price_err_rel_pct = 0.0;
};

// Elementwise |value - oracle| per slot; price error also as a percentage.
std::vector<SlotErrorRow> error_trace(const TimeSeriesResult& result);

}  // namespace upf
