#pragma once

#include <cstddef>
#include <limits>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

namespace upf {

enum class Architecture { Centralized, Distributed };
enum class RebidPolicy { Rebid, NoRebid };

// Where the subscriber weight lives. At the UE, the eNB announces one
// broadcast price per exchange; at the eNB, it unicasts a pre-divided
// price to every recipient.
enum class BetaLocation { AtUe, AtEnb };

enum class MessageKind { Bid, Price, UtilityParams, RateAssignment, ServiceTermination };
enum class Direction { UeToEnb, EnbToUe };
enum class Addressing { Unicast, Broadcast };

struct MessageRecord {
  MessageKind kind = MessageKind::Bid;
  Direction direction = Direction::UeToEnb;
  Addressing addressing = Addressing::Unicast;
  long slot = 0;
  std::optional<std::string> ue_id;  // absent for broadcasts
};

// Append-only log of logical transmissions on the eNB<->UE channel.
// A broadcast is one record and therefore one counted transmission,
// whatever the audience size.
class MessageTrace {
 public:
  void add(MessageRecord rec) { records_.push_back(std::move(rec)); }
  const std::vector<MessageRecord>& records() const { return records_; }
  std::size_t size() const { return records_.size(); }
  void clear() { records_.clear(); }

 private:
  std::vector<MessageRecord> records_;
};

// Inclusive slot range; defaults to everything.
struct SlotWindow {
  long first = std::numeric_limits<long>::min();
  long last = std::numeric_limits<long>::max();
};

// Transmission count inside the window. Pure read of the trace.
long measure_overhead(const MessageTrace& trace, SlotWindow window = {});

struct OverheadScenario {
  enum class Kind { FreshStart, Churn, UsageChange };

  Kind kind = Kind::FreshStart;
  Architecture architecture = Architecture::Centralized;
  RebidPolicy policy = RebidPolicy::Rebid;
  BetaLocation beta_location = BetaLocation::AtUe;
  int n_iter = 1;      // bidding iterations k >= 1; ignored by centralized
  int m = 0;           // population for fresh-start and usage-change
  int m1 = 0;          // churn: UEs before the change
  int m2 = 0;          // churn: UEs after the change
  int m_changed = 0;   // usage-change: UEs that switched usage (M')
};

// Closed-form transmission count for the scenario at the given iteration
// count. Centralized cases are exact; distributed cases are the minima the
// protocol attains when it converges in exactly n_iter bidding rounds.
// A fresh distributed start is counted as a churn from zero UEs.
long predict_overhead(const OverheadScenario& s);

const char* to_string(MessageKind k);
const char* to_string(Direction d);
const char* to_string(Addressing a);
const char* to_string(Architecture a);
const char* to_string(RebidPolicy p);
const char* to_string(BetaLocation b);

// One record per line: "slot kind direction addressing ue_id", with '-'
// standing in for the absent ue_id of a broadcast.
void write_trace(std::ostream& os, const MessageTrace& trace);
std::string trace_to_string(const MessageTrace& trace);

}  // namespace upf
