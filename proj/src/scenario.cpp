#include "upf/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace upf {

UEProfile UEDefinition::active_profile() const {
  if (utilities.size() != alphas.size())
    throw std::invalid_argument("UE '" + id +
                                "': one usage fraction per application");
  std::vector<ApplicationProfile> apps;
  apps.reserve(utilities.size());
  for (std::size_t j = 0; j < utilities.size(); ++j)
    apps.push_back({utilities[j], alphas[j]});
  return UEProfile(id, std::move(apps), beta);
}

OracleSolution oracle_optimal(const std::vector<UEProfile>& ues,
                              double total_rate) {
  OracleSolution oracle;
  oracle.allocation = allocate_centralized(ues, total_rate);
  oracle.price = oracle.allocation.shadow_price;
  for (const auto& [id, rate] : oracle.allocation.ue_rates) {
    oracle.rates[id] = rate;
    oracle.bids[id] = oracle.price * rate;
  }
  return oracle;
}

namespace {

struct Batch {
  std::vector<const ScenarioEvent*> events;
};

void validate_script(const ScenarioScript& script) {
  if (!(script.total_rate > 0.0))
    throw std::invalid_argument("cell rate must be positive");
  if (script.horizon < 1) throw std::invalid_argument("horizon must be >= 1");
  if (script.initial_ues.empty())
    throw std::invalid_argument("scenario needs at least one initial UE");
  long prev = 1;
  for (const auto& ev : script.events) {
    if (ev.slot <= 1 || ev.slot > script.horizon)
      throw std::invalid_argument("event slots must lie in (1, horizon]");
    if (ev.slot < prev)
      throw std::invalid_argument("event slots must be non-decreasing");
    prev = ev.slot;
  }
}

// Driver state shared by the slot loop.
class ScenarioRun {
 public:
  explicit ScenarioRun(const ScenarioScript& script)
      : script_(script), engine_(script.total_rate, script.cfg) {
    validate_script(script);
    for (const auto& ev : script.events) batches_[ev.slot].events.push_back(&ev);
  }

  TimeSeriesResult run() {
    for (long slot = 1; slot <= script_.horizon; ++slot) {
      const auto batch = batches_.find(slot);
      if (slot == 1 || batch != batches_.end()) {
        if (slot > 1) close_interval(slot - 1);
        apply_batch(slot, slot == 1,
                    batch == batches_.end() ? Batch{} : batch->second);
      } else if (bidding_ && !interval_.converged) {
        step_bidding(slot);
      }
      log_slot(slot);
    }
    close_interval(script_.horizon);
    return std::move(result_);
  }

 private:
  using Defs = std::vector<UEDefinition>;

  Defs::iterator find_def(const std::string& id) {
    return std::find_if(active_.begin(), active_.end(),
                        [&id](const UEDefinition& d) { return d.id == id; });
  }

  void apply_batch(long slot, bool fresh_start, const Batch& batch) {
    std::vector<std::string> joined;
    std::vector<std::string> changed;

    if (fresh_start) {
      active_ = script_.initial_ues;
      for (const auto& ue : active_) {
        if (std::count_if(active_.begin(), active_.end(),
                          [&](const UEDefinition& d) { return d.id == ue.id; }) != 1)
          throw std::invalid_argument("duplicate UE id '" + ue.id + "'");
        joined.push_back(ue.id);
      }
    }

    for (const ScenarioEvent* ev : batch.events) {
      if (const auto* join = std::get_if<JoinUE>(&ev->action)) {
        if (find_def(join->ue.id) != active_.end())
          throw std::invalid_argument("join of existing UE '" + join->ue.id + "'");
        active_.push_back(join->ue);
        joined.push_back(join->ue.id);
      } else if (const auto* leave = std::get_if<LeaveUE>(&ev->action)) {
        const auto it = find_def(leave->id);
        if (it == active_.end())
          throw std::invalid_argument("leave of unknown UE '" + leave->id + "'");
        result_.trace.add({MessageKind::ServiceTermination, Direction::UeToEnb,
                           Addressing::Unicast, slot, leave->id});
        engine_.remove(leave->id);
        active_.erase(it);
      } else if (const auto* set = std::get_if<SetAlphas>(&ev->action)) {
        const auto it = find_def(set->id);
        if (it == active_.end())
          throw std::invalid_argument("usage change for unknown UE '" + set->id + "'");
        if (set->alphas.size() != it->alphas.size())
          throw std::invalid_argument("usage vector length mismatch for UE '" +
                                      set->id + "'");
        it->alphas = set->alphas;
        changed.push_back(set->id);
      }
    }

    if (active_.empty())
      throw std::invalid_argument("cell cannot become empty");

    profiles_.clear();
    profiles_.reserve(active_.size());
    for (const auto& def : active_) profiles_.push_back(def.active_profile());

    interval_ = IntervalSummary{};
    interval_.start_slot = slot;
    interval_.oracle = oracle_optimal(profiles_, script_.total_rate);

    if (script_.architecture == Architecture::Centralized)
      solve_centralized(slot, joined, changed);
    else
      open_bidding(slot, joined, changed);
  }

  void solve_centralized(long slot, const std::vector<std::string>& joined,
                         const std::vector<std::string>& changed) {
    for (const auto& id : joined)
      result_.trace.add({MessageKind::UtilityParams, Direction::UeToEnb,
                         Addressing::Unicast, slot, id});
    for (const auto& id : changed)
      result_.trace.add({MessageKind::UtilityParams, Direction::UeToEnb,
                         Addressing::Unicast, slot, id});
    allocation_ = allocate_centralized(profiles_, script_.total_rate);
    for (const auto& ue : profiles_)
      result_.trace.add({MessageKind::RateAssignment, Direction::EnbToUe,
                         Addressing::Unicast, slot, ue.id()});
    bidding_ = false;
    interval_.converged = true;
    interval_.convergence_slot = slot;
  }

  void open_bidding(long slot, const std::vector<std::string>& joined,
                    const std::vector<std::string>& changed) {
    std::vector<Bid> announce;
    for (const auto& id : joined) announce.push_back(Bid{id, 1.0, slot});
    for (const auto& id : changed) {
      // Warm start: the UE re-transmits its standing bid to trigger repricing.
      const auto& pool = engine_.bids();
      const auto it = pool.find(id);
      announce.push_back(Bid{id, it == pool.end() ? 1.0 : it->second, slot});
    }

    bidders_.clear();
    if (script_.policy == RebidPolicy::Rebid) {
      for (const auto& ue : profiles_) bidders_.push_back(&ue);
    } else {
      for (const auto& ue : profiles_) {
        const bool is_new =
            std::find(joined.begin(), joined.end(), ue.id()) != joined.end();
        const bool is_changed =
            std::find(changed.begin(), changed.end(), ue.id()) != changed.end();
        if (is_new || is_changed) bidders_.push_back(&ue);
      }
    }

    engine_.announce(announce, bidders_, result_.trace, slot);
    bidding_ = !bidders_.empty();
    if (!bidding_) {
      // Nothing left to negotiate (e.g. departures under no-rebid): the
      // repriced pool is the steady state from this slot on.
      interval_.converged = true;
      interval_.convergence_slot = slot;
    }
  }

  void step_bidding(long slot) {
    if (slot - interval_.start_slot > script_.cfg.max_slots) {
      bidding_ = false;  // give up; interval stays flagged non-converged
      return;
    }
    const double change = engine_.exchange(bidders_, result_.trace, slot);
    if (change < script_.cfg.delta) {
      interval_.converged = true;
      interval_.convergence_slot = slot;
    }
  }

  void log_slot(long slot) {
    SlotSample sample;
    sample.slot = slot;
    sample.price_opt = interval_.oracle.price;
    sample.overhead_cum = static_cast<long>(result_.trace.size());
    if (script_.architecture == Architecture::Centralized) {
      sample.price = allocation_.shadow_price;
      for (const auto& ue : profiles_) {
        const double rate = allocation_.ue_rates.at(ue.id());
        sample.ues.push_back({ue.id(), rate, sample.price * rate,
                              interval_.oracle.rates.at(ue.id()),
                              interval_.oracle.bids.at(ue.id())});
      }
    } else {
      sample.price = engine_.price();
      for (const auto& ue : profiles_) {
        sample.ues.push_back({ue.id(), engine_.rate_of(ue.id()),
                              engine_.bids().at(ue.id()),
                              interval_.oracle.rates.at(ue.id()),
                              interval_.oracle.bids.at(ue.id())});
      }
    }
    result_.slots.push_back(std::move(sample));
  }

  void close_interval(long end_slot) {
    interval_.end_slot = end_slot;
    const SlotSample& last = result_.slots.back();
    interval_.steady_price = last.price;
    for (const auto& ue : last.ues) {
      interval_.steady_rates[ue.id] = ue.rate;
      interval_.steady_bids[ue.id] = ue.bid;
    }
    interval_.messages = measure_overhead(
        result_.trace, SlotWindow{interval_.start_slot, interval_.end_slot});
    if (!interval_.converged) result_.all_converged = false;
    result_.intervals.push_back(interval_);
  }

  const ScenarioScript& script_;
  std::map<long, Batch> batches_;

  Defs active_;
  std::vector<UEProfile> profiles_;
  std::vector<const UEProfile*> bidders_;
  BiddingEngine engine_;
  Allocation allocation_;
  bool bidding_ = false;
  IntervalSummary interval_;
  TimeSeriesResult result_;
};

}  // namespace

TimeSeriesResult run_scenario(const ScenarioScript& script) {
  return ScenarioRun(script).run();
}

std::vector<SlotErrorRow> error_trace(const TimeSeriesResult& result) {
  std::vector<SlotErrorRow> rows;
  rows.reserve(result.slots.size());
  for (const auto& sample : result.slots) {
    SlotErrorRow row;
    row.slot = sample.slot;
    for (const auto& ue : sample.ues) {
      row.rate_err[ue.id] = std::abs(ue.rate - ue.rate_opt);
      row.bid_err[ue.id] = std::abs(ue.bid - ue.bid_opt);
    }
    row.price_err_abs = std::abs(sample.price - sample.price_opt);
    row.price_err_rel_pct = 100.0 * row.price_err_abs / sample.price_opt;
    rows.push_back(std::move(row));
  }
  return rows;
}

}  // namespace upf
