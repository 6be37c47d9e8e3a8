#include "chord/events.hpp"

#include <algorithm>
#include <array>

#include "chord/topology.hpp"

namespace chord {

namespace {

constexpr std::array<std::pair<EventKind, std::string_view>, 6> kKindNames{{
    {EventKind::JoinLookup, "JoinLookup"},
    {EventKind::Join, "Join"},
    {EventKind::StabilizeFromOldSuccessor, "StabilizeFromOldSuccessor"},
    {EventKind::StabilizeFromNewSuccessor, "StabilizeFromNewSuccessor"},
    {EventKind::Rectify, "Rectify"},
    {EventKind::Fail, "Fail"},
}};

// append(head, butLast(list))
SuccList adoptList(Identifier head, const SuccList& fromList) {
  SuccList out;
  out.reserve(fromList.size());
  out.push_back(head);
  if (!fromList.empty()) out.insert(out.end(), fromList.begin(), fromList.end() - 1);
  return out;
}

std::optional<Identifier> firstLive(const Network& net, const SuccList& list) {
  for (Identifier s : list) {
    if (net.isLive(s)) return s;
  }
  return std::nullopt;
}

bool isLiveMember(const Network& net, Identifier n) { return net.isLive(n); }

// Candidate for adoption by an improving stabilize: the current head's
// predecessor, if it lies strictly between n and that head.
std::optional<Identifier> improvedSuccessor(const Network& net, const NodeState& ns,
                                            const ProtocolRules& rules) {
  if (ns.succList.empty()) return std::nullopt;
  const Identifier head = ns.succList.front();
  if (!net.isLive(head)) return std::nullopt;
  const auto& candidate = net.node(head).pred;
  if (!candidate || !between(ns.ident, *candidate, head)) return std::nullopt;
  if (rules.liveCheckBeforeAdoption && !net.isLive(*candidate)) return std::nullopt;
  return candidate;
}

bool failKeepsLiveSuccessors(const Network& net, Identifier failing) {
  for (const NodeState& ns : net.nodes()) {
    if (!ns.live || ns.ident == failing) continue;
    const bool hasLive = std::any_of(ns.succList.begin(), ns.succList.end(), [&](Identifier s) {
      return s != failing && net.isLive(s);
    });
    if (!hasLive) return false;
  }
  return true;
}

void requireEnabled(const Network& net, const Event& e, const ProtocolRules& rules) {
  if (!isEnabled(net, e, rules)) throw EventNotEnabled("event not enabled: " + to_string(e));
}

}  // namespace

std::string_view to_string(EventKind kind) {
  for (const auto& [k, name] : kKindNames) {
    if (k == kind) return name;
  }
  return "?";
}

EventKind eventKindFromString(std::string_view name) {
  for (const auto& [k, n] : kKindNames) {
    if (n == name) return k;
  }
  if (name == "SFOS") return EventKind::StabilizeFromOldSuccessor;
  if (name == "SFNS") return EventKind::StabilizeFromNewSuccessor;
  throw std::invalid_argument("unknown event kind: " + std::string(name));
}

bool isRepair(EventKind kind) {
  return kind == EventKind::StabilizeFromOldSuccessor ||
         kind == EventKind::StabilizeFromNewSuccessor || kind == EventKind::Rectify;
}

Event Event::joinLookup(Identifier joining, Identifier known) {
  return Event{EventKind::JoinLookup, joining, std::nullopt, known};
}
Event Event::join(Identifier joining) { return Event{EventKind::Join, joining, {}, {}}; }
Event Event::stabilizeFromOldSuccessor(Identifier n) {
  return Event{EventKind::StabilizeFromOldSuccessor, n, {}, {}};
}
Event Event::stabilizeFromNewSuccessor(Identifier n) {
  return Event{EventKind::StabilizeFromNewSuccessor, n, {}, {}};
}
Event Event::rectify(Identifier n, Identifier newPred) {
  return Event{EventKind::Rectify, n, newPred, std::nullopt};
}
Event Event::fail(Identifier n) { return Event{EventKind::Fail, n, {}, {}}; }

std::string to_string(const Event& e) {
  std::string out(to_string(e.kind));
  out += "(" + to_string(e.node);
  if (e.newPred) out += ", " + to_string(*e.newPred);
  if (e.known) out += ", known=" + to_string(*e.known);
  return out + ")";
}

bool joinPreconditionHolds(const Network& net, Identifier joining, Identifier newSucc) {
  return std::none_of(net.base().begin(), net.base().end(),
                      [&](Identifier b) { return between(joining, b, newSucc); });
}

bool isEnabled(const Network& net, const Event& e, const ProtocolRules& rules) {
  const NodeState* ns = net.find(e.node);
  switch (e.kind) {
    case EventKind::JoinLookup: {
      if (!net.params().contains(e.node) || (ns && (ns->live || ns->pendingNewSucc))) return false;
      if (!e.known || !isLiveMember(net, *e.known)) return false;
      return lookupSucc(net, e.node).has_value();
    }
    case EventKind::Join: {
      if (!ns || ns->live || !ns->pendingNewSucc) return false;
      // A dead successor makes the query time out; that branch is enabled.
      if (!net.isLive(*ns->pendingNewSucc)) return true;
      return joinPreconditionHolds(net, e.node, *ns->pendingNewSucc);
    }
    case EventKind::StabilizeFromOldSuccessor:
      return ns && ns->live && firstLive(net, ns->succList).has_value();
    case EventKind::StabilizeFromNewSuccessor:
      return ns && ns->live && improvedSuccessor(net, *ns, rules).has_value();
    case EventKind::Rectify: {
      if (!ns || !ns->live || !e.newPred || *e.newPred == e.node) return false;
      const NodeState* notifier = net.find(*e.newPred);
      return notifier && notifier->live && !notifier->succList.empty() &&
             notifier->succList.front() == e.node;
    }
    case EventKind::Fail:
      if (!ns || !ns->live || net.isBase(e.node)) return false;
      return !rules.failGuard || failKeepsLiveSuccessors(net, e.node);
  }
  return false;
}

Network applyJoinLookup(const Network& net, Identifier joining, Identifier known,
                        const ProtocolRules& rules) {
  const Event e = Event::joinLookup(joining, known);
  const NodeState* existing = net.find(joining);
  if ((!existing || !existing->live) && !net.isLive(known)) return net;
  requireEnabled(net, e, rules);
  NodeState ns;
  ns.ident = joining;
  ns.live = false;
  ns.known = known;
  ns.pendingNewSucc = lookupSucc(net, joining);
  return net.withNode(std::move(ns));
}

Network applyJoin(const Network& net, Identifier joining, const ProtocolRules& rules) {
  requireEnabled(net, Event::join(joining), rules);
  NodeState ns = net.node(joining);
  const Identifier newSucc = *ns.pendingNewSucc;
  ns.pendingNewSucc.reset();
  if (net.isLive(newSucc)) {
    ns.live = true;
    ns.pred.reset();
    if (rules.fullJoinLists) {
      ns.succList = adoptList(newSucc, net.node(newSucc).succList);
    } else {
      ns.succList = SuccList{newSucc};
    }
  }
  return net.withNode(std::move(ns));
}

Network applyStabilizeFromOldSuccessor(const Network& net, Identifier n,
                                       const ProtocolRules& rules) {
  const NodeState* cur = net.find(n);
  if (cur && cur->live && !firstLive(net, cur->succList)) {
    throw AssumptionBreach("member " + to_string(n) + " has no live successor");
  }
  requireEnabled(net, Event::stabilizeFromOldSuccessor(n), rules);
  NodeState ns = *cur;
  // Dead entries at the front time out and are dropped.
  const Identifier head = *firstLive(net, ns.succList);
  const NodeState& headState = net.node(head);
  ns.succList = adoptList(head, headState.succList);
  ns.pendingCandidate.reset();
  if (headState.pred && between(n, *headState.pred, head)) ns.pendingCandidate = headState.pred;
  return net.withNode(std::move(ns));
}

Network applyStabilizeFromNewSuccessor(const Network& net, Identifier n,
                                       const ProtocolRules& rules) {
  requireEnabled(net, Event::stabilizeFromNewSuccessor(n), rules);
  NodeState ns = net.node(n);
  const Identifier candidate = *improvedSuccessor(net, ns, rules);
  ns.succList = adoptList(candidate, net.node(candidate).succList);
  ns.pendingCandidate.reset();
  return net.withNode(std::move(ns));
}

Network applyRectify(const Network& net, Identifier n, Identifier newPred,
                     const ProtocolRules& rules) {
  requireEnabled(net, Event::rectify(n, newPred), rules);
  NodeState ns = net.node(n);
  if (!ns.pred || !net.isLive(*ns.pred) || between(*ns.pred, newPred, n)) ns.pred = newPred;
  ns.pendingCandidate.reset();
  return net.withNode(std::move(ns));
}

Network applyFail(const Network& net, Identifier n, const ProtocolRules& rules) {
  requireEnabled(net, Event::fail(n), rules);
  NodeState ns = net.node(n);
  ns.live = false;
  return net.withNode(std::move(ns));
}

Network applyEvent(const Network& net, const Event& e, const ProtocolRules& rules) {
  switch (e.kind) {
    case EventKind::JoinLookup:
      if (!e.known) throw EventNotEnabled("JoinLookup without a known member");
      requireEnabled(net, e, rules);
      return applyJoinLookup(net, e.node, *e.known, rules);
    case EventKind::Join:
      return applyJoin(net, e.node, rules);
    case EventKind::StabilizeFromOldSuccessor:
      return applyStabilizeFromOldSuccessor(net, e.node, rules);
    case EventKind::StabilizeFromNewSuccessor:
      return applyStabilizeFromNewSuccessor(net, e.node, rules);
    case EventKind::Rectify:
      if (!e.newPred) throw EventNotEnabled("Rectify without a notifying node");
      return applyRectify(net, e.node, *e.newPred, rules);
    case EventKind::Fail:
      return applyFail(net, e.node, rules);
  }
  throw EventNotEnabled("unknown event kind");
}

std::vector<Event> enabledEvents(const Network& net, const ProtocolRules& rules,
                                 std::span<const Identifier> extraJoiners) {
  std::vector<Event> out;
  const auto live = net.liveMembers();

  std::vector<Identifier> joiners;
  for (const NodeState& ns : net.nodes()) {
    if (!ns.live) joiners.push_back(ns.ident);
  }
  for (Identifier j : extraJoiners) {
    if (net.find(j) == nullptr) joiners.push_back(j);
  }
  std::sort(joiners.begin(), joiners.end());
  joiners.erase(std::unique(joiners.begin(), joiners.end()), joiners.end());

  const auto push = [&](const Event& e) {
    if (isEnabled(net, e, rules)) out.push_back(e);
  };
  for (Identifier j : joiners) {
    for (Identifier k : live) push(Event::joinLookup(j, k));
    push(Event::join(j));
  }
  const auto repairs = enabledRepairEvents(net, rules);
  out.insert(out.end(), repairs.begin(), repairs.end());
  for (Identifier n : live) push(Event::fail(n));
  return out;
}

std::vector<Event> enabledRepairEvents(const Network& net, const ProtocolRules& rules) {
  std::vector<Event> out;
  const auto push = [&](const Event& e) {
    if (isEnabled(net, e, rules)) out.push_back(e);
  };
  for (const NodeState& ns : net.nodes()) {
    if (!ns.live) continue;
    push(Event::stabilizeFromOldSuccessor(ns.ident));
    push(Event::stabilizeFromNewSuccessor(ns.ident));
  }
  for (const NodeState& ns : net.nodes()) {
    if (ns.live && !ns.succList.empty()) push(Event::rectify(ns.succList.front(), ns.ident));
  }
  return out;
}

}  // namespace chord
