#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "chord/events.hpp"
#include "chord/network.hpp"

namespace chord {

struct RepairWeights {
  double stabilizeOld = 1.0;
  double stabilizeNew = 1.0;
  double rectify = 1.0;
};

struct SimConfig {
  RingParams params;
  // Stable base; drawn from the seed when empty.
  std::vector<Identifier> base;
  std::size_t churnSteps = 100;
  double joinWeight = 3.0;
  double failWeight = 1.0;
  double repairWeight = 1.0;
  RepairWeights repairWeights;
  std::uint64_t seed = 1;
  // An effective event enabled this many consecutive steps is forced next.
  std::size_t fairnessWindow = 8;
  std::size_t maxNodes = 20;
  std::size_t stepCeiling = 1000000;
  // Repair events run after convergence to confirm the state is stable.
  std::size_t settleEvents = 100;
  ProtocolRules rules;
  // Unsafe: drop the stable base after initialization so base members
  // may fail. For experiments only.
  bool dropBase = false;

  /// Throws std::invalid_argument for unusable settings.
  void validate() const;
};

enum class SimPhase { Churn = 1, Repair = 2, Settle = 3 };

struct TraceStep {
  std::size_t step = 0;
  SimPhase phase = SimPhase::Churn;
  Event event;
  Network state;
  std::size_t totalError = 0;
  bool valid = false;
  bool ideal = false;
  // The event changed its executor's pointers.
  bool effective = false;

  friend bool operator==(const TraceStep&, const TraceStep&) = default;
};

struct Trace {
  Network initial;
  ProtocolRules rules;
  std::uint64_t seed = 0;
  std::vector<TraceStep> steps;

  friend bool operator==(const Trace&, const Trace&) = default;
};

class DivergenceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class TraceMismatch : public std::runtime_error {
 public:
  TraceMismatch(const std::string& what, bool disabledEvent)
      : std::runtime_error(what), disabledEvent_(disabledEvent) {}
  /// The recorded event was not enabled in the replayed state.
  bool disabledEvent() const { return disabledEvent_; }

 private:
  bool disabledEvent_;
};

/// Churn for config.churnSteps steps, then effective repair events under
/// weak fairness until none is enabled, then config.settleEvents enabled
/// repair events. Throws DivergenceError past the step ceiling and
/// AssumptionBreach if a member loses every live successor.
Trace runSimulation(const SimConfig& config);

/// Replays a scripted event sequence as a repair-phase trace.
Trace traceOf(const Network& init, const std::vector<Event>& events, const ProtocolRules& rules = {});

/// Repair-phase steps until the first ideal state (0 if the repair phase
/// starts ideal). Throws DivergenceError if no ideal state is reached or
/// the ideal state is later left.
std::size_t convergenceSteps(const Trace& trace);

/// Total error when the repair phase starts.
std::size_t repairPhaseInitialError(const Trace& trace);

/// Line-delimited JSON: a header with seed, rules and initial network,
/// one record per step ({step, phase, event, totalError, valid, ideal,
/// effective}), full snapshots every `snapshotInterval` steps (0: none)
/// and always on the last step.
void writeTrace(std::ostream& out, const Trace& trace, std::size_t snapshotInterval = 0);

/// Rebuilds a trace by replaying its events from the header state and
/// verifies every recorded field and snapshot. Throws ParseError on
/// malformed input and TraceMismatch naming the first disagreement.
Trace readTrace(std::istream& in);

}  // namespace chord
