#include "upf/distributed.hpp"

#include <cmath>
#include <stdexcept>

namespace upf {

ShadowPrice enb_price(const std::vector<Bid>& bids, double total_rate,
                      long slot) {
  if (bids.empty()) throw std::invalid_argument("no bids to price");
  if (!(total_rate > 0.0)) throw std::invalid_argument("cell rate must be positive");
  double sum = 0.0;
  for (const auto& bid : bids) sum += bid.w;
  return ShadowPrice{sum / total_rate, slot, Addressing::Broadcast,
                     sum / total_rate};
}

std::pair<double, Bid> ue_bid(const UEProfile& ue, const ShadowPrice& price,
                              const ProtocolConfig& cfg, double previous_bid) {
  if (!(price.p > 0.0)) throw std::invalid_argument("price must be positive");
  const double effective = price.addressing == Addressing::Broadcast
                               ? price.p / ue.beta()
                               : price.effective;
  const double rate = ue_demand(ue, effective);
  const double undamped = price.p * rate;
  const double w =
      cfg.damping * undamped + (1.0 - cfg.damping) * previous_bid;
  return {rate, Bid{ue.id(), w, price.slot}};
}

BiddingEngine::BiddingEngine(double total_rate, ProtocolConfig cfg)
    : total_rate_(total_rate), cfg_(std::move(cfg)) {
  if (!(total_rate_ > 0.0)) throw std::invalid_argument("cell rate must be positive");
  if (!(cfg_.delta > 0.0)) throw std::invalid_argument("delta must be positive");
  if (!(cfg_.damping > 0.0) || cfg_.damping > 1.0)
    throw std::invalid_argument("damping must lie in (0, 1]");
}

void BiddingEngine::reprice() {
  double sum = 0.0;
  for (const auto& [id, w] : bids_) sum += w;
  price_ = sum / total_rate_;
  priced_ = true;
}

void BiddingEngine::issue_price(
    const std::vector<const UEProfile*>& recipients, MessageTrace& trace,
    long slot) {
  if (cfg_.beta_location == BetaLocation::AtUe) {
    trace.add({MessageKind::Price, Direction::EnbToUe, Addressing::Broadcast,
               slot, std::nullopt});
  } else {
    for (const auto* ue : recipients)
      trace.add({MessageKind::Price, Direction::EnbToUe, Addressing::Unicast,
                 slot, ue->id()});
  }
}

void BiddingEngine::announce(const std::vector<Bid>& transmitted,
                             const std::vector<const UEProfile*>& recipients,
                             MessageTrace& trace, long slot) {
  for (const auto& bid : transmitted) {
    trace.add({MessageKind::Bid, Direction::UeToEnb, Addressing::Unicast, slot,
               bid.ue_id});
    bids_[bid.ue_id] = bid.w;
  }
  reprice();
  if (!recipients.empty()) issue_price(recipients, trace, slot);
}

double BiddingEngine::exchange(const std::vector<const UEProfile*>& bidders,
                               MessageTrace& trace, long slot) {
  if (bidders.empty())
    throw std::invalid_argument("exchange needs at least one bidder");
  if (!priced_) throw std::logic_error("exchange before any price was set");

  const ShadowPrice announced{price_, slot, Addressing::Broadcast, price_};
  double max_change = 0.0;
  for (const auto* ue : bidders) {
    ShadowPrice seen = announced;
    if (cfg_.beta_location == BetaLocation::AtEnb) {
      seen.addressing = Addressing::Unicast;
      seen.effective = price_ / ue->beta();
    }
    const double previous = bids_.at(ue->id());
    auto [rate, bid] = ue_bid(*ue, seen, cfg_, previous);
    (void)rate;
    max_change = std::max(max_change, std::abs(bid.w - previous));
    trace.add({MessageKind::Bid, Direction::UeToEnb, Addressing::Unicast, slot,
               ue->id()});
    bids_[ue->id()] = bid.w;
  }
  reprice();
  issue_price(bidders, trace, slot);
  return max_change;
}

void BiddingEngine::remove(const std::string& ue_id) {
  bids_.erase(ue_id);
  if (!bids_.empty()) reprice();
}

double BiddingEngine::rate_of(const std::string& ue_id) const {
  if (!priced_ || !(price_ > 0.0))
    throw std::logic_error("no price available yet");
  return bids_.at(ue_id) / price_;
}

EuraResult run_eura(const std::vector<UEProfile>& ues, double total_rate,
                    const ProtocolConfig& cfg, MessageTrace& trace) {
  if (ues.empty()) throw std::invalid_argument("no UEs to allocate");

  BiddingEngine engine(total_rate, cfg);
  std::vector<const UEProfile*> all;
  std::vector<Bid> opening;
  all.reserve(ues.size());
  for (const auto& ue : ues) {
    all.push_back(&ue);
    opening.push_back(Bid{ue.id(), 1.0, 1});
  }

  long slot = 1;
  engine.announce(opening, all, trace, slot);

  EuraResult result;
  while (slot < cfg.max_slots) {
    ++slot;
    const double change = engine.exchange(all, trace, slot);
    if (change < cfg.delta) {
      result.converged = true;
      break;
    }
  }

  result.slots_used = slot;
  result.price = engine.price();
  result.bids = engine.bids();
  for (const auto& ue : ues) result.rates[ue.id()] = engine.rate_of(ue.id());
  return result;
}

std::vector<double> run_iura(const UEProfile& ue, double granted_rate) {
  if (!(granted_rate > 0.0))
    throw std::invalid_argument("granted rate must be positive");

  const auto demand_at = [&ue](double price) {
    double sum = 0.0;
    for (const auto& app : ue.apps())
      sum += app_demand(app.utility, app.alpha, price);
    return sum;
  };

  // One-octave bracket around the internal clearing price.
  double lo = 1.0, hi = 1.0;
  if (demand_at(hi) > granted_rate) {
    do {
      lo = hi;
      hi *= 2.0;
    } while (demand_at(hi) > granted_rate);
  } else {
    while (demand_at(lo) < granted_rate) {
      hi = lo;
      lo *= 0.5;
    }
  }

  double price = 0.5 * (lo + hi);
  for (int i = 0; i < 200; ++i) {
    price = 0.5 * (lo + hi);
    const double demand = demand_at(price);
    if (std::abs(demand - granted_rate) <= 1e-8 * granted_rate) break;
    if (demand > granted_rate)
      lo = price;
    else
      hi = price;
  }

  std::vector<double> rates;
  rates.reserve(ue.apps().size());
  for (const auto& app : ue.apps())
    rates.push_back(app_demand(app.utility, app.alpha, price));
  return rates;
}

}  // namespace upf
