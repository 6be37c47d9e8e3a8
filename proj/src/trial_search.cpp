#include <algorithm>

#include "chord/checker.hpp"
#include "chord/invariants.hpp"

namespace chord {

namespace {

std::optional<Network> tryApply(const Network& net, const Event& e, const ProtocolRules& rules) {
  if (!isEnabled(net, e, rules)) return std::nullopt;
  try {
    return applyEvent(net, e, rules);
  } catch (const AssumptionBreach&) {
    return std::nullopt;
  }
}

bool contains(const std::vector<std::string>& broken, const char* name) {
  return std::find(broken.begin(), broken.end(), name) != broken.end();
}

// A fail followed by one or two stabilize steps of a single member that
// leaves the ring disordered.
std::optional<TrialCounterexample> failThenStabilize(const Network& net) {
  const ProtocolRules rules;
  for (Identifier f : net.liveMembers()) {
    const Event fail = Event::fail(f);
    auto afterFail = tryApply(net, fail, rules);
    if (!afterFail) continue;
    for (Identifier n : afterFail->liveMembers()) {
      const Event sfos = Event::stabilizeFromOldSuccessor(n);
      auto afterOld = tryApply(*afterFail, sfos, rules);
      if (!afterOld) continue;
      auto broken = brokenConjuncts(*afterOld, InvariantSet::TrialSix);
      if (contains(broken, "orderedRing")) {
        return TrialCounterexample{net, {fail, sfos}, std::move(broken), 0};
      }
      const Event sfns = Event::stabilizeFromNewSuccessor(n);
      if (auto afterNew = tryApply(*afterOld, sfns, rules)) {
        broken = brokenConjuncts(*afterNew, InvariantSet::TrialSix);
        if (contains(broken, "orderedRing")) {
          return TrialCounterexample{net, {fail, sfos, sfns}, std::move(broken), 0};
        }
      }
    }
  }
  return std::nullopt;
}

std::optional<TrialCounterexample> singleStepConflict(const Network& net) {
  const ProtocolRules rules;
  std::vector<Event> events;
  for (Identifier n : net.liveMembers()) {
    events.push_back(Event::stabilizeFromOldSuccessor(n));
    events.push_back(Event::stabilizeFromNewSuccessor(n));
    events.push_back(Event::fail(n));
  }
  for (const Event& e : events) {
    auto after = tryApply(net, e, rules);
    if (!after) continue;
    auto broken = brokenConjuncts(*after, InvariantSet::TrialEight);
    if (contains(broken, "noConflictingDates")) return TrialCounterexample{net, {e}, std::move(broken), 0};
  }
  return std::nullopt;
}

std::optional<TrialCounterexample> anyStepBreaksValid(const Network& net) {
  const std::vector<EventKind> kinds{EventKind::JoinLookup, EventKind::Join,
                                     EventKind::StabilizeFromOldSuccessor,
                                     EventKind::StabilizeFromNewSuccessor, EventKind::Rectify,
                                     EventKind::Fail};
  const CheckReport rep = checkPreservation(fixedSource({net}), kinds);
  if (rep.violations.empty()) return std::nullopt;
  const Violation& v = rep.violations.front();
  Network after = v.state;
  try {
    after = applyEvent(v.state, v.events.front());
  } catch (const AssumptionBreach&) {
  }
  auto broken = brokenConjuncts(after, InvariantSet::Valid);
  if (!after.wellFormed()) broken.push_back("wellFormed");
  return TrialCounterexample{v.state, v.events, std::move(broken), 0};
}

}  // namespace

std::optional<TrialCounterexample> searchTrialCounterexample(InvariantSet trial,
                                                             const TrialSearchBounds& bounds) {
  SamplingOptions opt;
  opt.m = bounds.m;
  opt.rValues = {bounds.r};
  opt.maxNodes = bounds.maxNodes;
  opt.withBase = trial == InvariantSet::Valid;
  std::mt19937_64 rng(bounds.seed);

  for (std::size_t i = 1; i <= bounds.maxSamples; ++i) {
    const Network net = sampleValidState(rng, opt);
    if (!holds(net, trial)) continue;
    std::optional<TrialCounterexample> found;
    switch (trial) {
      case InvariantSet::TrialSix:
        found = failThenStabilize(net);
        break;
      case InvariantSet::TrialEight:
        found = singleStepConflict(net);
        break;
      case InvariantSet::Valid:
        found = anyStepBreaksValid(net);
        break;
    }
    if (found) {
      found->samplesTried = i;
      return found;
    }
  }
  return std::nullopt;
}

}  // namespace chord
