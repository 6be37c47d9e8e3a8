#include "chord/topology.hpp"

#include <algorithm>
#include <stdexcept>

namespace chord {

namespace {

const NodeState& liveNode(const Network& net, Identifier n) {
  const NodeState& ns = net.node(n);
  if (!ns.live) throw std::invalid_argument(to_string(n) + " is not a live member");
  return ns;
}

std::optional<Identifier> bestSuccessorOf(const Network& net, const NodeState& ns) {
  for (Identifier s : ns.succList) {
    if (net.isLive(s)) return s;
  }
  return std::nullopt;
}

bool reachesSelf(const Network& net, Identifier start, std::size_t bound) {
  Identifier cur = start;
  for (std::size_t step = 0; step < bound; ++step) {
    auto next = bestSuccessorOf(net, net.node(cur));
    if (!next) return false;
    if (*next == start) return true;
    cur = *next;
  }
  return false;
}

}  // namespace

std::optional<Identifier> bestSuccessor(const Network& net, Identifier n) {
  return bestSuccessorOf(net, liveNode(net, n));
}

std::vector<Identifier> ringMembers(const Network& net) {
  std::vector<Identifier> out;
  const std::size_t bound = net.liveCount();
  for (const NodeState& ns : net.nodes()) {
    if (ns.live && reachesSelf(net, ns.ident, bound)) out.push_back(ns.ident);
  }
  return out;
}

StructureReport structure(const Network& net) {
  StructureReport rep;
  rep.ringMembers = ringMembers(net);
  for (const NodeState& ns : net.nodes()) {
    if (ns.live && !std::binary_search(rep.ringMembers.begin(), rep.ringMembers.end(), ns.ident)) {
      rep.appendageMembers.push_back(ns.ident);
    }
  }
  // Ordered: no ring member sits strictly between a ring member and its
  // best successor.
  rep.orderedRing = true;
  if (rep.ringMembers.size() >= 3) {
    for (Identifier x : rep.ringMembers) {
      const Identifier y = *bestSuccessor(net, x);
      for (Identifier z : rep.ringMembers) {
        if (z != x && z != y && between(x, z, y)) rep.orderedRing = false;
      }
    }
  }
  return rep;
}

Identifier globallyCorrectSucc(const Network& net, Identifier n, std::size_t i) {
  liveNode(net, n);
  const auto live = net.liveMembers();
  if (i == 0 || live.size() - 1 < i) {
    throw std::invalid_argument("globallyCorrectSucc: fewer than " + std::to_string(i) +
                                " other live members");
  }
  const auto self = std::find(live.begin(), live.end(), n) - live.begin();
  return live[(static_cast<std::size_t>(self) + i) % live.size()];
}

Identifier globallyCorrectPred(const Network& net, Identifier n) {
  liveNode(net, n);
  const auto live = net.liveMembers();
  if (live.size() < 2) throw std::invalid_argument("globallyCorrectPred: no other live member");
  const auto self = static_cast<std::size_t>(std::find(live.begin(), live.end(), n) - live.begin());
  return live[(self + live.size() - 1) % live.size()];
}

bool isIdeal(const Network& net) {
  const auto live = net.liveMembers();
  const std::size_t r = net.params().r;
  if (live.size() < r + 1) return false;
  for (Identifier n : live) {
    const NodeState& ns = net.node(n);
    if (ns.succList.size() != r) return false;
    for (std::size_t i = 0; i < r; ++i) {
      if (ns.succList[i] != globallyCorrectSucc(net, n, i + 1)) return false;
    }
    if (ns.pred != globallyCorrectPred(net, n)) return false;
  }
  return true;
}

std::optional<Identifier> lookupSucc(const Network& net, Identifier joining) {
  if (net.isLive(joining)) {
    throw std::invalid_argument("lookupSucc: " + to_string(joining) + " is already a member");
  }
  const auto ring = ringMembers(net);
  for (Identifier x : ring) {
    const Identifier y = *bestSuccessor(net, x);
    if (between(x, joining, y)) return y;
  }
  return std::nullopt;
}

}  // namespace chord
