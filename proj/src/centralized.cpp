#include "upf/centralized.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace upf {
namespace {

constexpr int kMaxPriceBisections = 200;
constexpr double kDemandResidualTol = 1e-8;

// The dual search runs on the price normalized by the first UE's weight,
// so only weight ratios enter the demand curve. Uniformly rescaling every
// subscriber weight then reproduces the exact same bisection path (and the
// exact same rates); the reported shadow price rescales with the weights.
double aggregate_demand(const std::vector<UEProfile>& ues,
                        const std::vector<double>& weight_ratio,
                        double norm_price) {
  double total = 0.0;
  for (std::size_t i = 0; i < ues.size(); ++i)
    total += ue_demand(ues[i], norm_price / weight_ratio[i]);
  return total;
}

double marginal_slope(const UEProfile& ue, const ApplicationProfile& app,
                      double r) {
  const double h = std::max(1e-9, 1e-6 * r);
  const double up = log_marginal(app.utility, app.alpha, r + h);
  const double down = log_marginal(app.utility, app.alpha, r - h);
  return ue.beta() * (up - down) / (2.0 * h);
}

Allocation build_allocation(const std::vector<UEProfile>& ues,
                            const std::vector<double>& weight_ratio,
                            double norm_price, double price, double total_rate,
                            int bisections) {
  Allocation alloc;
  alloc.shadow_price = price;
  alloc.bisections = bisections;
  double sum = 0.0;
  for (std::size_t i = 0; i < ues.size(); ++i) {
    const UEProfile& ue = ues[i];
    auto& rates = alloc.app_rates[ue.id()];
    double ue_total = 0.0;
    for (const auto& app : ue.apps()) {
      const double r =
          app_demand(app.utility, app.alpha, norm_price / weight_ratio[i]);
      rates.push_back(r);
      ue_total += r;
    }
    alloc.ue_rates[ue.id()] = ue_total;
    sum += ue_total;
  }

  // Residual sweep. When some application's marginal runs flat at the
  // clearing price (a sigmoid plateau), demand is numerically free along
  // that direction and the price bisection alone cannot close the budget.
  // Hand the leftover to the flattest-marginal application, where a rate
  // shift moves the stationarity residual the least.
  const double leftover = total_rate - sum;
  if (leftover != 0.0) {
    const UEProfile* best_ue = nullptr;
    std::size_t best_app = 0;
    double best_slope = std::numeric_limits<double>::infinity();
    for (const auto& ue : ues) {
      const auto& rates = alloc.app_rates[ue.id()];
      for (std::size_t j = 0; j < rates.size(); ++j) {
        if (rates[j] <= 2e-9) continue;  // too close to the domain boundary
        if (rates[j] + leftover < 0.5 * rates[j]) continue;
        const double slope = std::abs(marginal_slope(ue, ue.apps()[j], rates[j]));
        if (slope < best_slope) {
          best_slope = slope;
          best_ue = &ue;
          best_app = j;
        }
      }
    }
    if (best_ue != nullptr) {
      alloc.app_rates[best_ue->id()][best_app] += leftover;
      alloc.ue_rates[best_ue->id()] += leftover;
    }
  }

  double check = 0.0;
  for (const auto& [id, r] : alloc.ue_rates) check += r;
  alloc.residual = std::abs(check - total_rate);
  return alloc;
}

}  // namespace

Allocation allocate_centralized(const std::vector<UEProfile>& ues,
                                double total_rate) {
  if (ues.empty()) throw std::invalid_argument("no UEs to allocate");
  if (!(total_rate > 0.0)) throw std::invalid_argument("cell rate must be positive");

  const double beta_ref = ues.front().beta();
  std::vector<double> weight_ratio;
  weight_ratio.reserve(ues.size());
  for (const auto& ue : ues) weight_ratio.push_back(ue.beta() / beta_ref);

  // Bracket the clearing price by geometric expansion around 1, keeping
  // the bracket one octave wide. Demand can span dozens of decades in
  // price, and bisecting a loose bracket would spend every iteration
  // just descending to the root's magnitude.
  double lo = 1.0, hi = 1.0;
  if (aggregate_demand(ues, weight_ratio, hi) > total_rate) {
    do {
      lo = hi;
      hi *= 2.0;
    } while (aggregate_demand(ues, weight_ratio, hi) > total_rate);
  } else {
    while (aggregate_demand(ues, weight_ratio, lo) < total_rate) {
      hi = lo;
      lo *= 0.5;
    }
  }

  int used = 0;
  double norm_price = 0.5 * (lo + hi);
  for (; used < kMaxPriceBisections; ++used) {
    norm_price = 0.5 * (lo + hi);
    const double demand = aggregate_demand(ues, weight_ratio, norm_price);
    if (std::abs(demand - total_rate) <= kDemandResidualTol * total_rate) break;
    if (demand > total_rate)
      lo = norm_price;
    else
      hi = norm_price;
  }
  return build_allocation(ues, weight_ratio, norm_price, norm_price * beta_ref,
                          total_rate, used);
}

KktReport kkt_certificate(const std::vector<UEProfile>& ues, double total_rate,
                          const Allocation& alloc) {
  KktReport report;
  report.shadow_price = alloc.shadow_price;

  double worst = 0.0;
  double sum = 0.0;
  for (const auto& ue : ues) {
    const auto it = alloc.app_rates.find(ue.id());
    if (it == alloc.app_rates.end() || it->second.size() != ue.apps().size())
      throw std::invalid_argument("allocation does not match the UE set");
    for (std::size_t j = 0; j < ue.apps().size(); ++j) {
      const double r = it->second[j];
      const double marginal =
          ue.beta() * log_marginal(ue.apps()[j].utility, ue.apps()[j].alpha, r);
      worst = std::max(worst, std::abs(marginal - alloc.shadow_price));
      sum += r;
    }
  }
  report.stationarity_rel = worst / alloc.shadow_price;
  report.feasibility_rel = std::abs(sum - total_rate) / total_rate;
  report.pass = report.stationarity_rel <= KktReport::kStationarityTol &&
                report.feasibility_rel <= KktReport::kFeasibilityTol;
  return report;
}

}  // namespace upf
