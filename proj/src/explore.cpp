#include <deque>
#include <unordered_map>

#include "chord/checker.hpp"
#include "chord/serialize.hpp"
#include "chord/topology.hpp"

namespace chord {

namespace {

struct Visit {
  Network net;
  std::size_t joins;
  std::size_t fails;
  std::size_t depth;
  std::size_t parent;
  std::optional<Event> via;
};

// The stabilize candidate never influences enabling, so it is dropped from
// explored states to keep the visited set small.
Network normalize(const Network& net) {
  Network out = net;
  for (const NodeState& ns : net.nodes()) {
    if (ns.pendingCandidate) {
      NodeState copy = ns;
      copy.pendingCandidate.reset();
      out = out.withNode(std::move(copy));
    }
  }
  return out;
}

bool changesPointers(const Network& a, const Network& b) {
  const auto x = a.nodes();
  const auto y = b.nodes();
  if (x.size() != y.size()) return true;
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (!samePointers(x[i], y[i]) || x[i].pendingNewSucc != y[i].pendingNewSucc) return true;
  }
  return false;
}

std::vector<Event> pathTo(const std::vector<Visit>& visits, std::size_t idx) {
  std::vector<Event> out;
  while (visits[idx].via) {
    out.push_back(*visits[idx].via);
    idx = visits[idx].parent;
  }
  return {out.rbegin(), out.rend()};
}

}  // namespace

ExploreReport exploreReachable(const Network& init, const ExploreBounds& bounds,
                               const ProtocolRules& rules, const StateVisitor& onState) {
  ExploreReport rep;
  rep.check.lemma = "reachability";
  rep.check.bounds.mode = "reachable";
  rep.check.bounds.maxNodes = init.nodes().size() + bounds.joinPool.size();
  rep.check.bounds.rValues = {init.params().r};

  std::vector<Visit> visits;
  std::unordered_map<std::string, std::size_t> seen;
  std::deque<std::size_t> frontier;

  const auto keyOf = [](const Network& net, std::size_t joins, std::size_t fails) {
    return dumpNetwork(net) + "|" + std::to_string(joins) + "|" + std::to_string(fails);
  };
  const auto admit = [&](Network net, std::size_t joins, std::size_t fails, std::size_t depth,
                         std::size_t parent, std::optional<Event> via) {
    net = normalize(net);
    auto [it, inserted] = seen.emplace(keyOf(net, joins, fails), visits.size());
    if (!inserted) return;
    if (visits.size() >= bounds.maxStates) {
      rep.check.truncated = true;
      seen.erase(it);
      return;
    }
    visits.push_back(Visit{std::move(net), joins, fails, depth, parent, std::move(via)});
    const std::size_t idx = visits.size() - 1;
    const Network& cur = visits[idx].net;
    ++rep.check.statesChecked;
    rep.depthReached = std::max(rep.depthReached, depth);
    if (onState) onState(cur);
    if (!isValid(cur) || !cur.wellFormed()) {
      rep.check.addViolation(Violation{init, pathTo(visits, idx), "reached a state that is not valid"});
    }
    frontier.push_back(idx);
  };

  admit(init, 0, 0, 0, 0, std::nullopt);
  while (!frontier.empty()) {
    const std::size_t idx = frontier.front();
    frontier.pop_front();
    const Network net = visits[idx].net;
    const std::size_t joins = visits[idx].joins;
    const std::size_t fails = visits[idx].fails;
    const std::size_t depth = visits[idx].depth;

    std::vector<std::pair<Event, Network>> successors;
    std::vector<Identifier> lookedUp;
    for (const Event& e : enabledEvents(net, rules, bounds.joinPool)) {
      if (e.kind == EventKind::JoinLookup) {
        // The lookup result does not depend on the contact; keep one.
        if (joins >= bounds.maxJoins) continue;
        if (std::find(lookedUp.begin(), lookedUp.end(), e.node) != lookedUp.end()) continue;
        lookedUp.push_back(e.node);
      }
      if (e.kind == EventKind::Fail && fails >= bounds.maxFails) continue;
      Network after = [&] {
        try {
          return applyEvent(net, e, rules);
        } catch (const AssumptionBreach& ex) {
          ++rep.check.eventsChecked;
          auto path = pathTo(visits, idx);
          path.push_back(e);
          rep.check.addViolation(Violation{init, std::move(path), ex.what()});
          return net;
        }
      }();
      if (!changesPointers(net, after)) continue;
      successors.emplace_back(e, std::move(after));
    }

    if (successors.empty()) {
      ++rep.terminalStates;
      if (!isIdeal(net)) {
        rep.check.addViolation(Violation{init, pathTo(visits, idx), "terminal state is not ideal"});
      }
      continue;
    }
    if (depth >= bounds.maxDepth) {
      rep.check.truncated = true;
      continue;
    }
    for (auto& [e, after] : successors) {
      ++rep.check.eventsChecked;
      ++rep.transitions;
      const std::size_t nj = joins + (e.kind == EventKind::JoinLookup ? 1 : 0);
      const std::size_t nf = fails + (e.kind == EventKind::Fail ? 1 : 0);
      admit(std::move(after), nj, nf, depth + 1, idx, e);
    }
  }
  return rep;
}

}  // namespace chord
