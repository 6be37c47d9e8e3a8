#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "chord/events.hpp"
#include "chord/invariants.hpp"
#include "chord/measure.hpp"
#include "chord/network.hpp"

namespace chord {

struct CheckBounds {
  std::size_t maxNodes = 0;
  std::vector<unsigned> rValues;
  std::string mode;  // exhaustive | random | fixed | reachable | search
  std::uint64_t seed = 0;
  std::size_t samples = 0;
};

struct Violation {
  Network state;
  std::vector<Event> events;  // empty for state-only properties
  std::string detail;
};

struct CheckReport {
  std::string lemma;
  std::size_t statesChecked = 0;
  std::size_t eventsChecked = 0;
  std::size_t violationCount = 0;
  std::vector<Violation> violations;  // first kMaxStoredViolations only
  CheckBounds bounds;
  bool truncated = false;

  static constexpr std::size_t kMaxStoredViolations = 16;

  bool passed() const { return violationCount == 0 && !truncated; }
  void addViolation(Violation v);
  /// Sums counters and appends violations; used to combine campaigns.
  void merge(const CheckReport& other);
};

using StateVisitor = std::function<void(const Network&)>;

/// A replayable stream of networks.
struct StateSource {
  CheckBounds bounds;
  std::function<void(const StateVisitor&)> forEach;
};

// --- exhaustive enumeration ------------------------------------------------

struct EnumerationOptions {
  // Emit one representative per rotation class of the node positions.
  bool symmetryReduction = true;
  // Fewest nodes (live plus dead) in the identifier universe.
  std::size_t minNodes = 0;
};

/// Largest universe (live plus dead nodes) enumerateValidStates accepts.
inline constexpr std::size_t kExhaustionCeiling = 5;

/// Identifiers used for a universe of `count` nodes: evenly spaced.
std::vector<Identifier> universeIds(const RingParams& params, std::size_t count);

/// Every Valid network over at most maxNodes identifiers (live subset,
/// base, successor lists for all nodes, preds for live nodes), in a
/// deterministic order. Dead nodes carry no pred. Throws
/// std::invalid_argument above kExhaustionCeiling.
void enumerateValidStates(const RingParams& params, std::size_t maxNodes, const StateVisitor& visit,
                          const EnumerationOptions& options = {});

StateSource exhaustiveSource(const RingParams& params, std::size_t maxNodes,
                             const EnumerationOptions& options = {});

// --- constructive sampling -------------------------------------------------

struct SamplingOptions {
  unsigned m = 6;
  std::vector<unsigned> rValues{2, 3};
  std::size_t maxNodes = 9;
  // When false no stable base is built and BaseNotSkipped is not enforced;
  // used to generate trial-invariant states.
  bool withBase = true;
  double extraRingProbability = 0.5;
  double freshEntryProbability = 0.6;
  double correctPredProbability = 0.4;
};

/// Draws one network satisfying Valid (or, without a base, one whose ring
/// structure and successor lists are ordered walks).
Network sampleValidState(std::mt19937_64& rng, const SamplingOptions& options);

void sampleValidStates(const SamplingOptions& options, std::size_t count, std::uint64_t seed,
                       const StateVisitor& visit);

StateSource sampledSource(const SamplingOptions& options, std::size_t count, std::uint64_t seed);

StateSource fixedSource(std::vector<Network> states, std::string name = "fixed");

// --- lemmas ----------------------------------------------------------------

struct PreservationOptions {
  InvariantSet invariant = InvariantSet::Valid;
  ProtocolRules rules;
  // Join is tried from every non-live node toward every live successor that
  // satisfies the join precondition, covering stale lookup results.
  bool arbitraryJoinTargets = true;
};

CheckReport checkPreservation(const StateSource& source, const std::vector<EventKind>& kinds,
                              const PreservationOptions& options = {});

/// Valid && !Ideal => improvable, and Valid && Ideal => not improvable.
CheckReport checkProgress(const StateSource& source, const ProtocolRules& rules = {});

/// Every effective repair event strictly lowers totalError.
CheckReport checkMonotonicity(const StateSource& source, const ProtocolRules& rules = {},
                              RankDirection dir = RankDirection::Clockwise);

/// Every effective repair event strictly lowers the executor's own error.
CheckReport checkExecutorMonotonicity(const StateSource& source, const ProtocolRules& rules = {});

/// totalError == 0 iff isIdeal.
CheckReport checkErrorZeroIffIdeal(const StateSource& source);

/// BaseNotSkipped => NoDuplicates and OrderedSuccessorLists for every member.
CheckReport checkImplications(const StateSource& source);

/// Every state in the source satisfies Valid.
CheckReport checkSourceValidity(const StateSource& source);

// --- reachability ----------------------------------------------------------

struct ExploreBounds {
  std::size_t maxJoins = 0;
  std::size_t maxFails = 0;
  std::size_t maxDepth = 16;
  std::size_t maxStates = 200000;
  // Identifiers that may join; defaults to none.
  std::vector<Identifier> joinPool;
};

struct ExploreReport {
  CheckReport check;
  std::size_t transitions = 0;
  std::size_t terminalStates = 0;
  std::size_t depthReached = 0;
};

/// Breadth-first exploration of every interleaving within the budget.
/// Asserts Valid in each reached state and Ideal in each state with no
/// further state-changing event. `onState` sees every distinct state.
ExploreReport exploreReachable(const Network& init, const ExploreBounds& bounds,
                               const ProtocolRules& rules = {},
                               const StateVisitor& onState = {});

// --- trial counterexamples -------------------------------------------------

struct TrialSearchBounds {
  std::size_t maxNodes = 7;
  unsigned r = 2;
  unsigned m = 6;
  std::size_t maxSamples = 2000000;
  std::uint64_t seed = 1;
};

struct TrialCounterexample {
  Network state;
  std::vector<Event> events;
  std::vector<std::string> broken;  // conjuncts violated after the events
  std::size_t samplesTried = 0;
};

/// Searches trial-valid states without a stable base for a violating step.
/// TrialSix: a Fail followed by a stabilize of some member that breaks
/// OrderedRing.
/// TrialEight: one stabilize or one fail that breaks NoConflictingDates.
/// Valid: one event of any kind from a state with a stable base.
std::optional<TrialCounterexample> searchTrialCounterexample(InvariantSet trial,
                                                             const TrialSearchBounds& bounds);

}  // namespace chord
