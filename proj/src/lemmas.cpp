#include <algorithm>

#include "chord/checker.hpp"
#include "chord/measure.hpp"
#include "chord/topology.hpp"

namespace chord {

void CheckReport::addViolation(Violation v) {
  ++violationCount;
  if (violations.size() < kMaxStoredViolations) violations.push_back(std::move(v));
}

void CheckReport::merge(const CheckReport& other) {
  statesChecked += other.statesChecked;
  eventsChecked += other.eventsChecked;
  violationCount += other.violationCount;
  truncated = truncated || other.truncated;
  for (const Violation& v : other.violations) {
    if (violations.size() >= kMaxStoredViolations) break;
    violations.push_back(v);
  }
}

namespace {

CheckReport startReport(std::string lemma, const StateSource& source) {
  CheckReport rep;
  rep.lemma = std::move(lemma);
  rep.bounds = source.bounds;
  return rep;
}

bool wants(const std::vector<EventKind>& kinds, EventKind k) {
  return std::find(kinds.begin(), kinds.end(), k) != kinds.end();
}

// Identifiers absent from the node table, one per gap between consecutive
// entries, used as first-time joiners.
std::vector<Identifier> freshJoiners(const Network& net) {
  std::vector<Identifier> out;
  const auto nodes = net.nodes();
  const std::uint64_t space = net.params().spaceSize();
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    const std::uint64_t a = nodes[i].ident.value();
    const std::uint64_t b = nodes[(i + 1) % nodes.size()].ident.value();
    const std::uint64_t gap = (b + space - a) % space;
    if (gap >= 2 || (nodes.size() == 1 && space >= 2)) {
      const std::uint64_t width = nodes.size() == 1 ? space : gap;
      out.emplace_back(static_cast<std::uint32_t>((a + width / 2) % space));
    }
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

std::vector<Identifier> joinCandidates(const Network& net) {
  std::vector<Identifier> out = freshJoiners(net);
  for (const NodeState& ns : net.nodes()) {
    if (!ns.live) out.push_back(ns.ident);
  }
  return out;
}

}  // namespace

CheckReport checkPreservation(const StateSource& source, const std::vector<EventKind>& kinds,
                              const PreservationOptions& options) {
  CheckReport rep = startReport("preservation/" + std::string(to_string(options.invariant)), source);
  const ProtocolRules& rules = options.rules;

  source.forEach([&](const Network& net) {
    ++rep.statesChecked;
    const auto judge = [&](const Network& before, const Event& e, const Network& after) {
      ++rep.eventsChecked;
      auto broken = brokenConjuncts(after, options.invariant);
      if (!after.wellFormed()) broken.push_back("wellFormed");
      if (broken.empty()) return;
      std::string detail = to_string(e) + " breaks";
      for (const auto& b : broken) detail += " " + b;
      rep.addViolation(Violation{before, {e}, std::move(detail)});
    };
    const auto attempt = [&](const Network& before, const Event& e) {
      try {
        judge(before, e, applyEvent(before, e, rules));
      } catch (const AssumptionBreach& ex) {
        ++rep.eventsChecked;
        rep.addViolation(Violation{before, {e}, ex.what()});
      }
    };

    const bool lookups = wants(kinds, EventKind::JoinLookup);
    const bool joins = wants(kinds, EventKind::Join);
    if (lookups || joins) {
      const auto live = net.liveMembers();
      for (Identifier j : joinCandidates(net)) {
        const NodeState* existing = net.find(j);
        if (existing && existing->pendingNewSucc) {
          if (joins) attempt(net, Event::join(j));
          continue;
        }
        if (lookups) {
          for (Identifier k : live) {
            const Event e = Event::joinLookup(j, k);
            if (isEnabled(net, e, rules)) attempt(net, e);
          }
        }
        if (!joins) continue;
        // Stage a pending join toward every admissible successor. Stale
        // lookups can deliver any member that satisfied the precondition.
        std::vector<Identifier> targets;
        if (options.arbitraryJoinTargets) {
          targets = live;
        } else if (auto y = lookupSucc(net, j)) {
          targets.push_back(*y);
        }
        for (Identifier y : targets) {
          NodeState staged = existing ? *existing : NodeState{};
          staged.ident = j;
          staged.live = false;
          staged.known = live.front();
          staged.pendingNewSucc = y;
          const Network before = net.withNode(std::move(staged));
          const Event e = Event::join(j);
          if (isEnabled(before, e, rules)) attempt(before, e);
        }
      }
    }

    std::vector<Event> events;
    if (wants(kinds, EventKind::StabilizeFromOldSuccessor) ||
        wants(kinds, EventKind::StabilizeFromNewSuccessor) || wants(kinds, EventKind::Rectify)) {
      for (const Event& e : enabledRepairEvents(net, rules)) {
        if (wants(kinds, e.kind)) events.push_back(e);
      }
    }
    if (wants(kinds, EventKind::Fail)) {
      for (Identifier n : net.liveMembers()) {
        const Event e = Event::fail(n);
        if (isEnabled(net, e, rules)) events.push_back(e);
      }
    }
    for (const Event& e : events) attempt(net, e);
  });
  return rep;
}

CheckReport checkProgress(const StateSource& source, const ProtocolRules& rules) {
  CheckReport rep = startReport("progress", source);
  source.forEach([&](const Network& net) {
    if (!isValid(net)) return;
    ++rep.statesChecked;
    const bool ideal = isIdeal(net);
    const bool improvable = networkIsImprovable(net, rules);
    if (!ideal && !improvable) {
      rep.addViolation(Violation{net, {}, "ValidNetworkIsImprovable: valid, not ideal, no effective event"});
    } else if (ideal && improvable) {
      const auto eff = effectiveEnabled(net, rules);
      rep.addViolation(Violation{net, eff, "IdealNetworkIsNotImprovable: ideal state has an effective event"});
    }
  });
  return rep;
}

namespace {

template <typename Measure>
CheckReport monotonicity(std::string lemma, const StateSource& source, const ProtocolRules& rules,
                         Measure measure) {
  CheckReport rep = startReport(std::move(lemma), source);
  source.forEach([&](const Network& net) {
    if (!isValid(net)) return;
    ++rep.statesChecked;
    for (const Event& e : effectiveEnabled(net, rules)) {
      ++rep.eventsChecked;
      const Network after = applyEvent(net, e, rules);
      const std::size_t before = measure(net, e);
      const std::size_t now = measure(after, e);
      if (now >= before) {
        rep.addViolation(Violation{net, {e},
                                   to_string(e) + ": error " + std::to_string(before) + " -> " +
                                       std::to_string(now)});
      }
    }
  });
  return rep;
}

}  // namespace

CheckReport checkMonotonicity(const StateSource& source, const ProtocolRules& rules,
                              RankDirection dir) {
  return monotonicity(dir == RankDirection::Clockwise ? "monotonicity" : "monotonicity/counterclockwise",
                      source, rules, [dir](const Network& net, const Event&) { return totalError(net, dir); });
}

CheckReport checkExecutorMonotonicity(const StateSource& source, const ProtocolRules& rules) {
  return monotonicity("executor-monotonicity", source, rules,
                      [](const Network& net, const Event& e) { return memberError(net, e.node); });
}

CheckReport checkErrorZeroIffIdeal(const StateSource& source) {
  CheckReport rep = startReport("error-zero-iff-ideal", source);
  source.forEach([&](const Network& net) {
    ++rep.statesChecked;
    const std::size_t total = totalError(net);
    const bool ideal = isIdeal(net);
    if ((total == 0) != ideal) {
      rep.addViolation(Violation{net, {}, "totalError " + std::to_string(total) +
                                              (ideal ? " on an ideal state" : " on a non-ideal state")});
    }
  });
  return rep;
}

CheckReport checkImplications(const StateSource& source) {
  CheckReport rep = startReport("implications", source);
  source.forEach([&](const Network& net) {
    ++rep.statesChecked;
    if (!conjuncts(net).baseNotSkipped) return;
    for (Identifier n : net.liveMembers()) {
      const ListProperties lp = listProperties(net, n);
      if (!lp.noDuplicates || !lp.orderedSuccessorLists) {
        rep.addViolation(Violation{net, {}, "member " + to_string(n) + ":" +
                                                (lp.noDuplicates ? "" : " duplicates") +
                                                (lp.orderedSuccessorLists ? "" : " unordered")});
      }
    }
  });
  return rep;
}

CheckReport checkSourceValidity(const StateSource& source) {
  CheckReport rep = startReport("source-validity", source);
  source.forEach([&](const Network& net) {
    ++rep.statesChecked;
    if (!isValid(net)) rep.addViolation(Violation{net, {}, "generated state is not valid"});
  });
  return rep;
}

}  // namespace chord
