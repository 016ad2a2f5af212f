#include "upf/presets.hpp"

#include <array>
#include <stdexcept>

namespace upf {
namespace {

// Per-UE model parameters: UE i runs sigmoid(steepness, inflection) plus
// log(k_log, r_max). Values cycle voice-like, video-like, bulk-transfer.
constexpr std::array<std::array<double, 2>, 6> kSigmoid = {
    {{5, 10}, {3, 20}, {1, 30}, {5, 10}, {3, 20}, {1, 30}}};
constexpr std::array<double, 6> kLogK = {15, 3, 0.5, 15, 3, 0.5};
constexpr double kLogRMax = 100.0;

// Usage schedules, one (sigmoid, log) pair per UE.
using AlphaRow = std::array<std::array<double, 2>, 6>;
constexpr AlphaRow kAlpha1 = {
    {{0.9, 0.1}, {0.5, 0.5}, {0.1, 0.9}, {0.9, 0.1}, {0.5, 0.5}, {0.1, 0.9}}};
constexpr AlphaRow kAlpha2 = {
    {{0.5, 0.5}, {0.7, 0.3}, {0.8, 0.2}, {0.5, 0.5}, {0.7, 0.3}, {0.8, 0.2}}};
constexpr AlphaRow kAlpha3 = {
    {{0.5, 0.5}, {0.1, 0.9}, {0.2, 0.8}, {0.5, 0.5}, {0.1, 0.9}, {0.2, 0.8}}};
constexpr AlphaRow kAlpha4 = kAlpha2;
constexpr AlphaRow kAlpha5 = kAlpha3;

UESpec ue_spec(int index, const AlphaRow& alphas) {
  UESpec ue;
  ue.id = "ue" + std::to_string(index + 1);
  ue.beta = 1.0;
  ue.apps.push_back({"sigmoid", kSigmoid[index][0], kSigmoid[index][1],
                     alphas[index][0]});
  ue.apps.push_back({"log", kLogK[index], kLogRMax, alphas[index][1]});
  return ue;
}

RunConfig base_config(int ue_count) {
  RunConfig config;
  config.ues.clear();
  for (int i = 0; i < ue_count; ++i) config.ues.push_back(ue_spec(i, kAlpha1));
  return config;
}

void append_usage_switch(RunConfig& config, long slot, const AlphaRow& from,
                         const AlphaRow& to) {
  for (int i = 0; i < 6; ++i) {
    if (from[i] == to[i]) continue;  // unchanged UEs stay silent
    EventSpec ev;
    ev.slot = slot;
    ev.type = EventSpec::Type::SetAlphas;
    ev.id = "ue" + std::to_string(i + 1);
    ev.alphas = {to[i][0], to[i][1]};
    config.events.push_back(std::move(ev));
  }
}

}  // namespace

std::vector<UEDefinition> default_cell() {
  std::vector<UEDefinition> cell;
  for (int i = 0; i < 6; ++i) cell.push_back(to_definition(ue_spec(i, kAlpha1)));
  return cell;
}

std::vector<std::string> preset_names() {
  return {"fresh-start", "usage-sweep", "churn-5-to-6", "overhead-grid"};
}

RunConfig preset(const std::string& name) {
  if (name == "fresh-start") {
    RunConfig config = base_config(6);
    config.horizon = 100;
    return config;
  }
  if (name == "usage-sweep") {
    RunConfig config = base_config(6);
    config.horizon = 500;
    append_usage_switch(config, 101, kAlpha1, kAlpha2);
    append_usage_switch(config, 201, kAlpha2, kAlpha3);
    append_usage_switch(config, 301, kAlpha3, kAlpha4);
    append_usage_switch(config, 401, kAlpha4, kAlpha5);
    return config;
  }
  if (name == "churn-5-to-6") {
    RunConfig config = base_config(5);
    config.horizon = 200;
    EventSpec ev;
    ev.slot = 101;
    ev.type = EventSpec::Type::Join;
    ev.ue = ue_spec(5, kAlpha1);
    ev.id = ev.ue.id;
    config.events.push_back(std::move(ev));
    return config;
  }
  if (name == "overhead-grid") {
    RunConfig config = base_config(6);
    config.horizon = 400;
    return config;
  }
  throw std::invalid_argument("unknown preset '" + name + "'");
}

namespace {

constexpr long kGridEventSlot = 101;
constexpr long kGridHorizon = 400;

ScenarioScript grid_script(const std::string& scenario, Architecture arch,
                           RebidPolicy policy, BetaLocation beta_location,
                           double delta) {
  RunConfig config = base_config(6);
  config.horizon = kGridHorizon;
  if (scenario == "fresh") {
    // no events
  } else if (scenario == "churn-up") {
    config = base_config(5);
    config.horizon = kGridHorizon;
    EventSpec ev;
    ev.slot = kGridEventSlot;
    ev.type = EventSpec::Type::Join;
    ev.ue = ue_spec(5, kAlpha1);
    ev.id = ev.ue.id;
    config.events.push_back(std::move(ev));
  } else if (scenario == "churn-down") {
    for (const char* id : {"ue5", "ue6"}) {
      EventSpec ev;
      ev.slot = kGridEventSlot;
      ev.type = EventSpec::Type::Leave;
      ev.id = id;
      config.events.push_back(std::move(ev));
    }
  } else if (scenario == "usage") {
    EventSpec ue1;
    ue1.slot = kGridEventSlot;
    ue1.type = EventSpec::Type::SetAlphas;
    ue1.id = "ue1";
    ue1.alphas = {0.5, 0.5};
    EventSpec ue2 = ue1;
    ue2.id = "ue2";
    ue2.alphas = {0.2, 0.8};
    config.events.push_back(std::move(ue1));
    config.events.push_back(std::move(ue2));
  } else {
    throw std::invalid_argument("unknown overhead scenario '" + scenario + "'");
  }
  config.architecture = arch;
  config.policy = policy;
  config.beta_location = beta_location;
  config.delta = delta;
  return build_script(config);
}

OverheadScenario grid_prediction(const std::string& scenario,
                                 Architecture arch, RebidPolicy policy,
                                 BetaLocation beta_location) {
  OverheadScenario s;
  s.architecture = arch;
  s.policy = policy;
  s.beta_location = beta_location;
  s.n_iter = 1;
  if (scenario == "fresh") {
    s.kind = OverheadScenario::Kind::FreshStart;
    s.m = 6;
  } else if (scenario == "churn-up") {
    s.kind = OverheadScenario::Kind::Churn;
    s.m1 = 5;
    s.m2 = 6;
  } else if (scenario == "churn-down") {
    s.kind = OverheadScenario::Kind::Churn;
    s.m1 = 6;
    s.m2 = 4;
  } else {
    s.kind = OverheadScenario::Kind::UsageChange;
    s.m = 6;
    s.m_changed = 2;
  }
  return s;
}

}  // namespace

std::vector<OverheadOutcome> run_overhead_grid(
    const std::vector<double>& deltas,
    const std::vector<std::string>& scenarios) {
  std::vector<OverheadOutcome> outcomes;
  for (const auto& scenario : scenarios) {
    for (const Architecture arch :
         {Architecture::Centralized, Architecture::Distributed}) {
      for (const RebidPolicy policy : {RebidPolicy::Rebid, RebidPolicy::NoRebid}) {
        for (const BetaLocation beta_location :
             {BetaLocation::AtUe, BetaLocation::AtEnb}) {
          for (const double delta : deltas) {
            const auto script =
                grid_script(scenario, arch, policy, beta_location, delta);
            const auto result = run_scenario(script);
            const long window_start = scenario == "fresh" ? 1 : kGridEventSlot;

            OverheadOutcome out;
            out.scenario_case = {scenario, arch, policy, beta_location, delta};
            out.predicted_min = predict_overhead(
                grid_prediction(scenario, arch, policy, beta_location));
            out.measured = measure_overhead(
                result.trace, SlotWindow{window_start, script.horizon});
            const auto& interval = result.intervals.back();
            out.converged = interval.converged;
            out.slots = (interval.converged ? interval.convergence_slot
                                            : interval.end_slot) -
                        interval.start_slot + 1;
            outcomes.push_back(std::move(out));
          }
        }
      }
    }
  }
  return outcomes;
}

}  // namespace upf
