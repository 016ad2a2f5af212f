#pragma once

#include <map>
#include <string>
#include <utility>
#include <vector>

#include "upf/overhead.hpp"
#include "upf/utility.hpp"

namespace upf {

struct Bid {
  std::string ue_id;
  double w = 0.0;  // price x rate pledged
  long slot = 0;
};

// Price announcement. Broadcast carries the cell price; unicast carries
// the per-UE effective price (cell price over the subscriber weight)
// when the eNB keeps the weights.
struct ShadowPrice {
  double p = 0.0;  // cell price
  long slot = 0;
  Addressing addressing = Addressing::Broadcast;
  double effective = 0.0;  // p / beta for unicast; equals p for broadcasts
};

struct ProtocolConfig {
  double delta = 1e-3;    // bid-change termination threshold
  BetaLocation beta_location = BetaLocation::AtUe;
  double damping = 1.0;   // bid update weight; 1 = undamped
  long max_slots = 20000; // exchange cap before flagging non-convergence
};

// p = (sum of bids) / R, exactly as computed in bid order.
ShadowPrice enb_price(const std::vector<Bid>& bids, double total_rate,
                      long slot = 0);

// UE response to a price: the demand at the effective price and the new
// (damped) bid w = damping * p * r + (1 - damping) * previous_bid.
std::pair<double, Bid> ue_bid(const UEProfile& ue, const ShadowPrice& price,
                              const ProtocolConfig& cfg, double previous_bid);

// Drives bid/price exchanges over the counted channel. The caller owns the
// event semantics (who announces, who keeps bidding); the engine owns the
// bid pool, pricing, message recording, and the bid-change measurement.
//
// An exchange mirrors one protocol round: the listed UEs transmit bids,
// then the eNB answers with a price to the same set (one broadcast when
// the weights sit at the UEs, one unicast per recipient otherwise).
class BiddingEngine {
 public:
  BiddingEngine(double total_rate, ProtocolConfig cfg);

  // Event volley: the given bids are transmitted verbatim and merged into
  // the pool, then the eNB prices. No price is issued when `recipients`
  // is empty (nobody would respond); the pool is still repriced silently.
  void announce(const std::vector<Bid>& transmitted,
                const std::vector<const UEProfile*>& recipients,
                MessageTrace& trace, long slot);

  // Response volley: every bidder answers the standing price with a fresh
  // bid, then the eNB reprices. Returns max |w_new - w_old| over bidders.
  double exchange(const std::vector<const UEProfile*>& bidders,
                  MessageTrace& trace, long slot);

  // Drop a departing UE's bid from the pool and reprice silently.
  void remove(const std::string& ue_id);

  double price() const { return price_; }
  bool priced() const { return priced_; }
  const std::map<std::string, double>& bids() const { return bids_; }

  // The eNB's capacity-clearing grant: w / p. Grants sum to R exactly.
  double rate_of(const std::string& ue_id) const;

 private:
  void reprice();
  void issue_price(const std::vector<const UEProfile*>& recipients,
                   MessageTrace& trace, long slot);

  double total_rate_;
  ProtocolConfig cfg_;
  std::map<std::string, double> bids_;
  double price_ = 0.0;
  bool priced_ = false;
};

struct EuraResult {
  std::map<std::string, double> rates;
  std::map<std::string, double> bids;
  double price = 0.0;
  long slots_used = 0;  // exchanges, the opening volley included
  bool converged = false;
};

// Fresh-start bidding to convergence: every UE opens with w = 1, then
// rounds of re-bids and prices run until the largest bid change drops
// below delta. Every transmission lands in `trace`. Non-convergence at
// max_slots comes back flagged, never thrown.
EuraResult run_eura(const std::vector<UEProfile>& ues, double total_rate,
                    const ProtocolConfig& cfg, MessageTrace& trace);

// Internal stage: split a UE's granted total among its applications by
// bisecting the internal price until the demands absorb the grant.
std::vector<double> run_iura(const UEProfile& ue, double granted_rate);

}  // namespace upf
