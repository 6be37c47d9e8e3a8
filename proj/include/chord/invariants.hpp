#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "chord/network.hpp"

namespace chord {

/// The five conjuncts of the inductive invariant.
struct ConjunctReport {
  bool atLeastOneRing = false;
  bool atMostOneRing = false;
  bool orderedRing = false;
  bool connectedAppendages = false;
  bool baseNotSkipped = false;
  bool valid = false;

  friend bool operator==(const ConjunctReport&, const ConjunctReport&) = default;
};

struct ListProperties {
  bool noDuplicates = false;
  bool orderedSuccessorLists = false;
};

/// Candidate conjuncts that were tried and rejected.
struct TrialPredicates {
  bool noConflictingDates = false;
  bool noEjects = false;
};

/// True iff some adjacent pair (a, b) of n's extended successor list has
/// between(a, n2, b).
bool skips(const Network& net, Identifier n, Identifier n2);

ConjunctReport conjuncts(const Network& net);
inline bool isValid(const Network& net) { return conjuncts(net).valid; }

ListProperties listProperties(const Network& net, Identifier n);

/// n1 and n2 are ring members and some ring member mentions n1 in its
/// extended list while skipping n2.
bool mustPreDate(const Network& net, Identifier n1, Identifier n2);
TrialPredicates trialPredicates(const Network& net);

/// Named invariant sets the checker can target.
enum class InvariantSet {
  Valid,         // the five conjuncts
  TrialSix,      // four ring conjuncts + NoDuplicates + OrderedSuccessorLists
  TrialEight,    // TrialSix + NoConflictingDates + NoEjects
};

std::string_view to_string(InvariantSet set);
InvariantSet invariantSetFromString(std::string_view name);

/// Conjunct names of `set` that fail in `net`; empty when it holds.
std::vector<std::string> brokenConjuncts(const Network& net, InvariantSet set);
inline bool holds(const Network& net, InvariantSet set) { return brokenConjuncts(net, set).empty(); }

}  // namespace chord
