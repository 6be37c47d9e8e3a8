#pragma once

#include <optional>
#include <vector>

#include "chord/network.hpp"

namespace chord {

/// Partition of the live members into the ring and its appendages.
struct StructureReport {
  std::vector<Identifier> ringMembers;
  std::vector<Identifier> appendageMembers;
  bool orderedRing = false;
};

/// First live entry of n's successor list; nullopt if every entry is dead.
/// Throws if n is not a live member.
std::optional<Identifier> bestSuccessor(const Network& net, Identifier n);

/// Live members that reach themselves along best successors, sorted.
std::vector<Identifier> ringMembers(const Network& net);

StructureReport structure(const Network& net);

/// The i-th nearest live member clockwise from n (1-based).
/// Throws std::invalid_argument if fewer than i other members are live.
Identifier globallyCorrectSucc(const Network& net, Identifier n, std::size_t i);

/// Nearest live member counterclockwise from n.
Identifier globallyCorrectPred(const Network& net, Identifier n);

bool isIdeal(const Network& net);

/// Global lookup oracle: the ring member y whose ring predecessor x has
/// between(x, joining, y). nullopt when there is no ring.
/// Throws std::invalid_argument if `joining` is live.
std::optional<Identifier> lookupSucc(const Network& net, Identifier joining);

}  // namespace chord
