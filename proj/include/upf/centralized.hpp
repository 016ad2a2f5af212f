#pragma once

#include <map>
#include <string>
#include <vector>

#include "upf/utility.hpp"

namespace upf {

// Capacity-clearing rate assignment for one cell. Per-UE totals always
// equal the sum of that UE's per-application rates, and the totals
// exhaust the cell rate up to the solver residual.
struct Allocation {
  std::map<std::string, std::vector<double>> app_rates;  // ue id -> per-app
  std::map<std::string, double> ue_rates;                // ue id -> total
  double shadow_price = 0.0;
  int bisections = 0;
  double residual = 0.0;  // |sum of rates - R|
};

// One-shot solve of
//   max  prod_i ( prod_j U_ij(r_ij)^alpha_ij )^beta_i   s.t.  sum r_ij <= R
// by bisecting the shadow price on the aggregate demand curve: every
// application is priced at p/beta_i, and p is driven until total demand
// meets R. The constraint always binds because demand diverges as the
// price vanishes and vanishes as the price diverges.
Allocation allocate_centralized(const std::vector<UEProfile>& ues,
                                double total_rate);

struct KktReport {
  double stationarity_rel = 0.0;  // max_ij |beta_i * marginal_ij - p| / p
  double feasibility_rel = 0.0;   // |sum r - R| / R
  double shadow_price = 0.0;
  bool pass = false;

  static constexpr double kStationarityTol = 1e-5;
  static constexpr double kFeasibilityTol = 1e-6;
};

// Report-only optimality check of an allocation against its inputs.
KktReport kkt_certificate(const std::vector<UEProfile>& ues, double total_rate,
                          const Allocation& alloc);

}  // namespace upf
