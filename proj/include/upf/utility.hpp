#pragma once

#include <string>
#include <variant>
#include <vector>

namespace upf {

// Real-time traffic: S-shaped satisfaction curve. Zero at zero rate,
// saturates toward 1, steepest around `inflection`.
struct SigmoidParams {
  double steepness = 1.0;   // > 0, per rate unit
  double inflection = 1.0;  // > 0, rate units
};

// Delay-tolerant traffic: concave satisfaction reaching 1 at r_max.
// The closed form keeps growing past r_max; callers stay below it in
// any capacity-constrained allocation.
struct LogParams {
  double k_log = 1.0;  // > 0, rate sensitivity
  double r_max = 1.0;  // > 0, rate of 100% satisfaction
};

using UtilityFunction = std::variant<SigmoidParams, LogParams>;

// Satisfaction at the given rate. eval(u, 0) == 0 for every valid model,
// and the value is strictly increasing in the rate.
double eval(const UtilityFunction& u, double rate);

// alpha * d/dr ln U(r): the usage-weighted marginal of log satisfaction.
// Strictly positive, strictly decreasing, diverges as rate -> 0+.
// Throws std::domain_error for rate <= 0.
double log_marginal(const UtilityFunction& u, double alpha, double rate);

// Inverse of log_marginal in the rate: the unique r > 0 whose marginal
// equals `price`. Bracketed bisection; the lower bracket is pinned at
// 1e-12 rate units and the upper bracket grows geometrically from 1.0
// (capped at 2^30). Throws std::runtime_error if no bracket exists.
double app_demand(const UtilityFunction& u, double alpha, double price);

struct ApplicationProfile {
  UtilityFunction utility;
  double alpha = 1.0;  // usage fraction, (0, 1] after normalization
};

// One device: its applications with usage fractions and a subscriber
// weight. Usage fractions are renormalized to sum to 1 on construction;
// zero-usage applications are dropped (absent for the current interval).
class UEProfile {
 public:
  UEProfile(std::string id, std::vector<ApplicationProfile> apps, double beta);

  const std::string& id() const { return id_; }
  double beta() const { return beta_; }
  const std::vector<ApplicationProfile>& apps() const { return apps_; }

 private:
  std::string id_;
  std::vector<ApplicationProfile> apps_;
  double beta_ = 1.0;
};

// Total rate the UE asks for at an effective price: sum of per-application
// demands. Internally every application equalizes its weighted marginal to
// the same price, so the sum inverts the UE-level demand curve.
double ue_demand(const UEProfile& ue, double effective_price);

}  // namespace upf
