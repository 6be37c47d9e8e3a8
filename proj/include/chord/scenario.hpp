#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "chord/checker.hpp"
#include "chord/events.hpp"
#include "chord/network.hpp"
#include "chord/serialize.hpp"
#include "chord/sim.hpp"

namespace chord {

/// A check evaluated after `step` scripted events (0: the initial state).
struct Expectation {
  std::size_t step = 0;
  std::string predicate;
  std::optional<Identifier> node;
  std::optional<Identifier> other;
  Json expected;

  friend bool operator==(const Expectation&, const Expectation&) = default;
};

struct Scenario {
  std::string name;
  RingParams params;
  std::vector<Identifier> base;
  // Replaces initNetwork(params, base) when present.
  std::optional<Network> initialState;
  ProtocolRules rules;
  std::vector<Event> script;
  std::vector<Expectation> expectations;

  Network initialNetwork() const;

  friend bool operator==(const Scenario&, const Scenario&) = default;
};

Json toJson(const Scenario& s);
Scenario scenarioFromJson(const Json& doc);
Scenario parseScenario(std::string_view text);
Scenario loadScenario(const std::string& path);

/// Evaluates a named predicate. Throws std::invalid_argument for unknown
/// names or missing node arguments.
Json evaluatePredicate(const Network& net, const std::string& predicate,
                       const std::optional<Identifier>& node, const std::optional<Identifier>& other,
                       const ProtocolRules& rules = {});

/// Names accepted by evaluatePredicate.
std::vector<std::string> predicateNames();

/// Replay outcome codes.
enum class ReplayStatus : int {
  Ok = 0,
  ParseFailure = 2,
  DisabledEvent = 3,
  ExpectationFailed = 4,
};

struct ReplayReport {
  ReplayStatus status = ReplayStatus::Ok;
  std::size_t stepsApplied = 0;
  std::size_t expectationsChecked = 0;
  std::vector<std::string> messages;
  // State in which a scripted event was disabled.
  std::optional<Network> failingState;
  // Steps replayed so far.
  std::optional<Trace> trace;

  bool ok() const { return status == ReplayStatus::Ok; }
};

/// Applies the script, checking expectations as their steps are reached.
/// Stops at the first disabled event; collects every failed expectation.
ReplayReport replayScenario(const Scenario& s);

/// Reads a scenario or trace file, replays it and never throws.
ReplayReport replayFile(const std::string& path);

/// A replayable fixture documenting a violation: the offending state, the
/// events, and the observed outcomes as expectations.
Scenario scenarioFromViolation(const Violation& v, const ProtocolRules& rules, std::string name);
Scenario scenarioFromCounterexample(const TrialCounterexample& c, InvariantSet trial, std::string name);

Json toJson(const CheckReport& rep);

/// Graphviz digraph with solid first-successor edges, dashed later
/// successor edges and dotted predecessor edges.
std::string exportDot(const Network& net);

}  // namespace chord
