#include "upf/centralized.hpp"

#include <cmath>
#include <stdexcept>
#include <random>

#include "doctest.h"
#include "oracles.hpp"
#include "upf/presets.hpp"

using namespace upf;

namespace {

std::vector<UEProfile> default_profiles() {
  std::vector<UEProfile> out;
  for (const auto& def : default_cell()) out.push_back(def.active_profile());
  return out;
}

double total_of(const Allocation& alloc) {
  double sum = 0.0;
  for (const auto& [id, r] : alloc.ue_rates) sum += r;
  return sum;
}

// Random small instance used by the property checks.
std::vector<UEProfile> random_instance(std::mt19937& rng, int max_ues,
                                       int max_apps) {
  std::uniform_int_distribution<int> m_dist(1, max_ues);
  std::uniform_int_distribution<int> n_dist(1, max_apps);
  std::uniform_real_distribution<double> a_dist(0.5, 6.0);
  std::uniform_real_distribution<double> b_dist(4.0, 30.0);
  std::uniform_real_distribution<double> k_dist(0.3, 15.0);
  std::uniform_real_distribution<double> beta_dist(0.5, 3.0);
  std::uniform_real_distribution<double> alpha_dist(0.2, 1.0);
  std::bernoulli_distribution coin(0.5);

  std::vector<UEProfile> ues;
  const int m = m_dist(rng);
  for (int i = 0; i < m; ++i) {
    std::vector<ApplicationProfile> apps;
    const int n = n_dist(rng);
    for (int j = 0; j < n; ++j) {
      const UtilityFunction u =
          coin(rng) ? UtilityFunction(SigmoidParams{a_dist(rng), b_dist(rng)})
                    : UtilityFunction(LogParams{k_dist(rng), 100.0});
      apps.push_back({u, alpha_dist(rng)});
    }
    ues.emplace_back("r" + std::to_string(i), std::move(apps), beta_dist(rng));
  }
  return ues;
}

}  // namespace

TEST_CASE("single UE with one log app absorbs the whole cell") {
  const std::vector<UEProfile> ues = {
      UEProfile("solo", {{LogParams{1, 100}, 1.0}}, 1.0)};
  const double R = 42.0;
  const auto alloc = allocate_centralized(ues, R);
  CHECK(alloc.ue_rates.at("solo") == doctest::Approx(R).epsilon(1e-6));
  CHECK(alloc.shadow_price ==
        doctest::Approx(log_marginal(LogParams{1, 100}, 1.0, R)).epsilon(1e-6));
}

TEST_CASE("identical UEs get identical rates") {
  const UEProfile a("a", {{SigmoidParams{3, 20}, 0.5}, {LogParams{3, 100}, 0.5}},
                    2.0);
  const UEProfile b("b", {{SigmoidParams{3, 20}, 0.5}, {LogParams{3, 100}, 0.5}},
                    2.0);
  const auto alloc = allocate_centralized({a, b}, 90.0);
  CHECK(std::abs(alloc.ue_rates.at("a") - alloc.ue_rates.at("b")) <= 1e-6);
}

TEST_CASE("two single-app UEs match the exhaustive grid search") {
  // 1e5-point sweep of (r1, R - r1) maximizing the weighted log objective
  const UtilityFunction u1 = SigmoidParams{5, 10};
  const UtilityFunction u2 = LogParams{0.5, 100};
  const double beta1 = 1.0, beta2 = 2.0;
  const double R = 180.0;

  double best_r1 = 0.0, best_val = -1e300;
  const int points = 100000;
  for (int i = 1; i < points; ++i) {
    const double r1 = R * i / points;
    const double val =
        beta1 * std::log(eval(u1, r1)) + beta2 * std::log(eval(u2, R - r1));
    if (val > best_val) {
      best_val = val;
      best_r1 = r1;
    }
  }

  const std::vector<UEProfile> ues = {UEProfile("a", {{u1, 1.0}}, beta1),
                                      UEProfile("b", {{u2, 1.0}}, beta2)};
  const auto alloc = allocate_centralized(ues, R);
  CHECK(std::abs(alloc.ue_rates.at("a") - best_r1) <= 1e-2);
  CHECK(std::abs(alloc.ue_rates.at("b") - (R - best_r1)) <= 1e-2);

  const auto cert = kkt_certificate(ues, R, alloc);
  CHECK(cert.pass);
}

TEST_CASE("certificate passes on a solve and flags a perturbed one") {
  const auto ues = default_profiles();
  const double R = 180.0;
  auto alloc = allocate_centralized(ues, R);
  CHECK(kkt_certificate(ues, R, alloc).pass);

  auto bumped = alloc;
  bumped.app_rates.at("ue1")[0] *= 1.01;
  const auto cert = kkt_certificate(ues, R, bumped);
  CHECK_FALSE(cert.pass);
  CHECK(cert.stationarity_rel > KktReport::kStationarityTol);
}

TEST_CASE("allocation structure invariants on the stock cell") {
  const auto ues = default_profiles();
  const double R = 180.0;
  const auto alloc = allocate_centralized(ues, R);

  CHECK(std::abs(total_of(alloc) - R) <= 1e-6 * R);
  for (const auto& [id, rates] : alloc.app_rates) {
    double sum = 0.0;
    for (const double r : rates) {
      CHECK(r > 0.0);
      sum += r;
    }
    CHECK(std::abs(sum - alloc.ue_rates.at(id)) <= 1e-9);
  }
}

TEST_CASE("doubling every subscriber weight reproduces identical rates") {
  const auto base = default_cell();
  std::vector<UEProfile> ues, scaled;
  for (const auto& def : base) {
    ues.push_back(def.active_profile());
    UEDefinition two = def;
    two.beta *= 2.0;
    scaled.push_back(two.active_profile());
  }
  const auto a = allocate_centralized(ues, 180.0);
  const auto b = allocate_centralized(scaled, 180.0);
  for (const auto& [id, r] : a.ue_rates) CHECK(b.ue_rates.at(id) == r);
  CHECK(b.shadow_price == doctest::Approx(2.0 * a.shadow_price).epsilon(1e-12));
}

TEST_CASE("raising one subscriber weight never lowers that UE's rate") {
  std::mt19937 rng(11);
  for (int trial = 0; trial < 8; ++trial) {
    auto ues = random_instance(rng, 3, 2);
    const double R = 60.0;
    const auto before = allocate_centralized(ues, R);
    const std::string target = ues.front().id();
    std::vector<UEProfile> boosted;
    for (std::size_t i = 0; i < ues.size(); ++i) {
      const auto& ue = ues[i];
      boosted.emplace_back(ue.id(), ue.apps(),
                           i == 0 ? ue.beta() * 2.5 : ue.beta());
    }
    const auto after = allocate_centralized(boosted, R);
    CHECK(after.ue_rates.at(target) >= before.ue_rates.at(target) - 1e-9);
  }
}

TEST_CASE("the capacity constraint binds on random instances") {
  std::mt19937 rng(99);
  for (int trial = 0; trial < 12; ++trial) {
    const auto ues = random_instance(rng, 3, 2);
    const double R = 15.0 + 5.0 * trial;
    const auto alloc = allocate_centralized(ues, R);
    CHECK(std::abs(total_of(alloc) - R) <= 1e-6 * R);
  }
}

TEST_CASE("a marginal plateau at the clearing price still certifies") {
  // Here one sigmoid's weighted marginal runs flat at beta*alpha*a ~ p*,
  // so demand is numerically discontinuous in the price and the optimal
  // rate direction is flat to ~1e-14. Rate values on the plateau are not
  // comparable across solvers; what must still hold is the certificate:
  // stationarity everywhere and an exactly closed budget.
  const std::vector<UEProfile> ues = {
      UEProfile("q0",
                {{SigmoidParams{3.719, 7.994}, 0.480},
                 {SigmoidParams{4.028, 19.491}, 0.520}},
                1.1392),
      UEProfile("q1",
                {{SigmoidParams{3.719, 11.401}, 0.389},
                 {SigmoidParams{2.112, 15.761}, 0.611}},
                2.6683),
      UEProfile("q2",
                {{SigmoidParams{2.512, 13.376}, 0.695},
                 {LogParams{12.600, 100}, 0.305}},
                0.6944)};
  const double R = 39.049;
  const auto alloc = allocate_centralized(ues, R);
  const auto cert = kkt_certificate(ues, R, alloc);
  CHECK(cert.pass);
  CHECK(alloc.residual <= 1e-9 * R);
}

TEST_CASE("degenerate inputs are rejected") {
  CHECK_THROWS_AS(allocate_centralized({}, 100.0), std::invalid_argument);
  const std::vector<UEProfile> one = {
      UEProfile("x", {{LogParams{1, 100}, 1.0}}, 1.0)};
  CHECK_THROWS_AS(allocate_centralized(one, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(allocate_centralized(one, -5.0), std::invalid_argument);
}
