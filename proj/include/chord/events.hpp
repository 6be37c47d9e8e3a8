#pragma once

#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "chord/network.hpp"

namespace chord {

enum class EventKind {
  JoinLookup,
  Join,
  StabilizeFromOldSuccessor,
  StabilizeFromNewSuccessor,
  Rectify,
  Fail,
};

std::string_view to_string(EventKind kind);
/// Accepts the full names and the SFOS / SFNS abbreviations.
EventKind eventKindFromString(std::string_view name);
bool isRepair(EventKind kind);

/// One atomic protocol step, executed by `node`.
struct Event {
  EventKind kind{};
  Identifier node;
  std::optional<Identifier> newPred;  // Rectify: the notifying node
  std::optional<Identifier> known;    // JoinLookup: the contacted member

  static Event joinLookup(Identifier joining, Identifier known);
  static Event join(Identifier joining);
  static Event stabilizeFromOldSuccessor(Identifier n);
  static Event stabilizeFromNewSuccessor(Identifier n);
  static Event rectify(Identifier n, Identifier newPred);
  static Event fail(Identifier n);

  friend bool operator==(const Event&, const Event&) = default;
};

std::string to_string(const Event& e);

/// Kernel switches. The defaults are the corrected protocol; the other
/// settings reproduce known defects or lift operating assumptions.
struct ProtocolRules {
  // A fail is only enabled if every remaining member keeps a live successor.
  bool failGuard = true;
  // The improved successor must answer before it is adopted.
  bool liveCheckBeforeAdoption = true;
  // Join copies a full r-entry list from the new successor; when false the
  // joiner starts with its successor alone.
  bool fullJoinLists = true;

  friend bool operator==(const ProtocolRules&, const ProtocolRules&) = default;
};

class EventNotEnabled : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

/// Raised when a member has no live successor, which the operating
/// assumptions rule out.
class AssumptionBreach : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Precondition test for any event kind.
bool isEnabled(const Network& net, const Event& e, const ProtocolRules& rules = {});

/// Applies an enabled event. Throws EventNotEnabled otherwise.
Network applyEvent(const Network& net, const Event& e, const ProtocolRules& rules = {});

/// `joining` records its lookup result. A dead `known` leaves the state
/// unchanged (the join is retried later).
Network applyJoinLookup(const Network& net, Identifier joining, Identifier known,
                        const ProtocolRules& rules = {});
Network applyJoin(const Network& net, Identifier joining, const ProtocolRules& rules = {});
Network applyStabilizeFromOldSuccessor(const Network& net, Identifier n,
                                       const ProtocolRules& rules = {});
Network applyStabilizeFromNewSuccessor(const Network& net, Identifier n,
                                       const ProtocolRules& rules = {});
Network applyRectify(const Network& net, Identifier n, Identifier newPred,
                     const ProtocolRules& rules = {});
Network applyFail(const Network& net, Identifier n, const ProtocolRules& rules = {});

/// True when no base member lies strictly between `joining` and `newSucc`.
bool joinPreconditionHolds(const Network& net, Identifier joining, Identifier newSucc);

/// Every event enabled in `net`. JoinLookup is generated for each
/// non-live identifier in the node table plus `extraJoiners`, paired with
/// every live `known`. Order is deterministic.
std::vector<Event> enabledEvents(const Network& net, const ProtocolRules& rules = {},
                                 std::span<const Identifier> extraJoiners = {});

/// The SFOS, SFNS and Rectify subset of enabledEvents, in the same order.
std::vector<Event> enabledRepairEvents(const Network& net, const ProtocolRules& rules = {});

}  // namespace chord
