#pragma once

#include <map>
#include <utility>
#include <vector>

#include "chord/events.hpp"
#include "chord/network.hpp"

namespace chord {

/// Pointer roles: 0 is the predecessor, i >= 1 is the i-th successor.
using PointerRole = std::size_t;
inline constexpr PointerRole kPredRole = 0;

/// Direction in which rank error grows away from the correct target.
/// Clockwise: members passed going clockwise from the correct first
/// successor (counterclockwise from the correct predecessor).
/// Counterclockwise: the reverse ordering of the same members.
enum class RankDirection { Clockwise, Counterclockwise };

struct ErrorReport {
  std::map<std::pair<Identifier, PointerRole>, std::size_t> perPointer;
  std::size_t total = 0;
};

/// Error of one pointer of live member n, with s = number of live members.
/// pred / succ1: clockwise rank distance from the globally correct member
/// (0..s-1), s for a missing pointer, s + 1 for a dead target.
/// succ_i (i >= 2): 0 iff the first successor is live and the entry equals
/// entry i-1 of that successor's list, else 1.
std::size_t pointerError(const Network& net, Identifier n, PointerRole role,
                         RankDirection dir = RankDirection::Clockwise);

/// Sum of pointer errors over the r + 1 roles of one member.
std::size_t memberError(const Network& net, Identifier n,
                        RankDirection dir = RankDirection::Clockwise);

ErrorReport errorReport(const Network& net, RankDirection dir = RankDirection::Clockwise);
std::size_t totalError(const Network& net, RankDirection dir = RankDirection::Clockwise);

/// Enabled repair events (SFOS, SFNS, Rectify) that change the executor's
/// pointers.
std::vector<Event> effectiveEnabled(const Network& net, const ProtocolRules& rules = {});

bool networkIsImprovable(const Network& net, const ProtocolRules& rules = {});

}  // namespace chord
