#include "upf/overhead.hpp"

#include <sstream>
#include <stdexcept>

namespace upf {

long measure_overhead(const MessageTrace& trace, SlotWindow window) {
  long n = 0;
  for (const auto& rec : trace.records())
    if (rec.slot >= window.first && rec.slot <= window.last) ++n;
  return n;
}

namespace {

long churn_count(const OverheadScenario& s) {
  const long k = s.n_iter;
  const long m1 = s.m1, m2 = s.m2;
  if (s.architecture == Architecture::Centralized)
    return m2 > m1 ? 2 * m2 - m1 : m1;

  const bool at_ue = s.beta_location == BetaLocation::AtUe;
  if (s.policy == RebidPolicy::Rebid) {
    if (m2 > m1)  // joiners announce, one price round, k full rounds
      return at_ue ? (k + 1) * m2 + k + 1 - m1 : (2 * k + 2) * m2 - m1;
    // leavers terminate, one price round, k full rounds over the survivors
    return at_ue ? (m1 - m2) + 1 + k * (m2 + 1) : m1 + 2 * k * m2;
  }
  // no-rebid: only the changed UEs exchange
  if (m2 > m1) return at_ue ? k * (m2 - m1) + k : (2 * k + 2) * (m2 - m1);
  return m1 - m2;  // terminations only, either beta location
}

long usage_count(const OverheadScenario& s) {
  const long k = s.n_iter;
  const long m = s.m, mc = s.m_changed;
  if (s.architecture == Architecture::Centralized) return mc + m;

  const bool at_ue = s.beta_location == BetaLocation::AtUe;
  if (s.policy == RebidPolicy::Rebid)
    return at_ue ? mc + 1 + k * m + k : mc + m + 2 * k * m;
  return at_ue ? k * mc + k : (2 * k + 2) * mc;
}

}  // namespace

long predict_overhead(const OverheadScenario& s) {
  if (s.n_iter < 1) throw std::invalid_argument("iteration count must be >= 1");
  switch (s.kind) {
    case OverheadScenario::Kind::FreshStart: {
      if (s.m < 1) throw std::invalid_argument("fresh start needs m >= 1");
      if (s.architecture == Architecture::Centralized) return 2L * s.m;
      OverheadScenario churn = s;
      churn.kind = OverheadScenario::Kind::Churn;
      churn.m1 = 0;
      churn.m2 = s.m;
      return churn_count(churn);
    }
    case OverheadScenario::Kind::Churn:
      if (s.m1 < 0 || s.m2 < 0 || s.m1 == s.m2)
        throw std::invalid_argument("churn needs m1 != m2, both nonnegative");
      return churn_count(s);
    case OverheadScenario::Kind::UsageChange:
      if (s.m < 1 || s.m_changed < 1 || s.m_changed > s.m)
        throw std::invalid_argument("usage change needs 1 <= m_changed <= m");
      return usage_count(s);
  }
  throw std::invalid_argument("unknown scenario kind");
}

const char* to_string(MessageKind k) {
  switch (k) {
    case MessageKind::Bid: return "bid";
    case MessageKind::Price: return "price";
    case MessageKind::UtilityParams: return "utility-params";
    case MessageKind::RateAssignment: return "rate-assignment";
    case MessageKind::ServiceTermination: return "service-termination";
  }
  return "?";
}

const char* to_string(Direction d) {
  return d == Direction::UeToEnb ? "ue-to-enb" : "enb-to-ue";
}

const char* to_string(Addressing a) {
  return a == Addressing::Unicast ? "unicast" : "broadcast";
}

const char* to_string(Architecture a) {
  return a == Architecture::Centralized ? "centralized" : "distributed";
}

const char* to_string(RebidPolicy p) {
  return p == RebidPolicy::Rebid ? "rebid" : "no-rebid";
}

const char* to_string(BetaLocation b) {
  return b == BetaLocation::AtUe ? "ue" : "enb";
}

void write_trace(std::ostream& os, const MessageTrace& trace) {
  for (const auto& rec : trace.records()) {
    os << rec.slot << ' ' << to_string(rec.kind) << ' '
       << to_string(rec.direction) << ' ' << to_string(rec.addressing) << ' '
       << (rec.ue_id ? rec.ue_id->c_str() : "-") << '\n';
  }
}

std::string trace_to_string(const MessageTrace& trace) {
  std::ostringstream os;
  write_trace(os, trace);
  return os.str();
}

}  // namespace upf
