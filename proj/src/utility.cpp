#include "upf/utility.hpp"

#include <cmath>
#include <stdexcept>
#include <utility>

namespace upf {
namespace {

void check_params(const SigmoidParams& p) {
  if (!(p.steepness > 0.0) || !(p.inflection > 0.0))
    throw std::invalid_argument("sigmoid parameters must be positive");
}

void check_params(const LogParams& p) {
  if (!(p.k_log > 0.0) || !(p.r_max > 0.0))
    throw std::invalid_argument("log-utility parameters must be positive");
}

void check_params(const UtilityFunction& u) {
  std::visit([](const auto& p) { check_params(p); }, u);
}

void check_alpha(double alpha) {
  if (!(alpha > 0.0) || alpha > 1.0)
    throw std::invalid_argument("usage fraction must lie in (0, 1]");
}

// Logistic tail 1/(1+e^x), safe against overflow for large |x|.
double logistic_neg(double x) {
  if (x > 700.0) return 0.0;
  return 1.0 / (1.0 + std::exp(x));
}

double eval_sigmoid(const SigmoidParams& p, double r) {
  // Normalized form c*(logistic - d) reduces algebraically to
  // (1 - e^{-ar}) / (1 + e^{-a(r-b)}), which avoids cancellation near 0.
  const double a = p.steepness, b = p.inflection;
  return -std::expm1(-a * r) / (1.0 + std::exp(-a * (r - b)));
}

double eval_log(const LogParams& p, double r) {
  return std::log1p(p.k_log * r) / std::log1p(p.k_log * p.r_max);
}

double log_marginal_sigmoid(const SigmoidParams& p, double r) {
  // d/dr ln U = a * (1/(e^{ar}-1) + 1/(1+e^{a(r-b)}))
  const double a = p.steepness, b = p.inflection;
  return a * (1.0 / std::expm1(a * r) + logistic_neg(a * (r - b)));
}

double log_marginal_log(const LogParams& p, double r) {
  // d/dr ln U = k / ((1+kr) ln(1+kr)); the r_max normalization cancels.
  const double k = p.k_log;
  return k / ((1.0 + k * r) * std::log1p(k * r));
}

double log_marginal_raw(const UtilityFunction& u, double r) {
  return std::visit(
      [r](const auto& p) {
        using T = std::decay_t<decltype(p)>;
        if constexpr (std::is_same_v<T, SigmoidParams>)
          return log_marginal_sigmoid(p, r);
        else
          return log_marginal_log(p, r);
      },
      u);
}

constexpr double kBracketFloor = 1e-12;
constexpr double kBracketCap = 1073741824.0;  // 2^30 rate units
constexpr int kMaxBisections = 200;

}  // namespace

double eval(const UtilityFunction& u, double rate) {
  check_params(u);
  if (rate < 0.0) throw std::domain_error("rate must be nonnegative");
  return std::visit(
      [rate](const auto& p) {
        using T = std::decay_t<decltype(p)>;
        if constexpr (std::is_same_v<T, SigmoidParams>)
          return eval_sigmoid(p, rate);
        else
          return eval_log(p, rate);
      },
      u);
}

double log_marginal(const UtilityFunction& u, double alpha, double rate) {
  check_params(u);
  check_alpha(alpha);
  if (!(rate > 0.0))
    throw std::domain_error("log marginal needs rate > 0; it diverges at 0");
  return alpha * log_marginal_raw(u, rate);
}

double app_demand(const UtilityFunction& u, double alpha, double price) {
  check_params(u);
  check_alpha(alpha);
  if (!(price > 0.0)) throw std::domain_error("price must be positive");

  const double target = price / alpha;
  double lo = kBracketFloor;
  if (log_marginal_raw(u, lo) < target)
    throw std::runtime_error("demand bracket failure: price above marginal range");

  double hi = 1.0;
  while (log_marginal_raw(u, hi) >= target) {
    hi *= 2.0;
    if (hi > kBracketCap)
      throw std::runtime_error("demand bracket failure: demand exceeds rate cap");
  }

  // Marginal is strictly decreasing: the root is pinned in [lo, hi].
  for (int i = 0; i < kMaxBisections; ++i) {
    const double mid = 0.5 * (lo + hi);
    if (log_marginal_raw(u, mid) >= target)
      lo = mid;
    else
      hi = mid;
    if (hi - lo <= 1e-12 * std::max(1.0, mid)) return 0.5 * (lo + hi);
  }
  return 0.5 * (lo + hi);
}

UEProfile::UEProfile(std::string id, std::vector<ApplicationProfile> apps,
                     double beta)
    : id_(std::move(id)), beta_(beta) {
  if (!(beta_ > 0.0)) throw std::invalid_argument("subscriber weight must be positive");
  double total = 0.0;
  for (const auto& app : apps) {
    check_params(app.utility);
    if (app.alpha < 0.0)
      throw std::invalid_argument("usage fraction must be nonnegative");
    if (app.alpha == 0.0) continue;  // parked application, absent this interval
    total += app.alpha;
    apps_.push_back(app);
  }
  if (apps_.empty())
    throw std::invalid_argument("UE needs at least one application with usage > 0");
  for (auto& app : apps_) app.alpha /= total;
}

double ue_demand(const UEProfile& ue, double effective_price) {
  if (!(effective_price > 0.0))
    throw std::domain_error("effective price must be positive");
  double total = 0.0;
  for (const auto& app : ue.apps())
    total += app_demand(app.utility, app.alpha, effective_price);
  return total;
}

}  // namespace upf
