// Acceptance runner: one PASS/FAIL line per criterion.

#include <chrono>
#include <cstdio>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "chord/checker.hpp"
#include "chord/scenario.hpp"
#include "chord/serialize.hpp"
#include "chord/sim.hpp"
#include "chord/topology.hpp"

#ifndef CHORD_SCENARIO_DIR
#define CHORD_SCENARIO_DIR "scenarios"
#endif

using namespace chord;

namespace {

// Bounds and budgets.
constexpr std::size_t kExhaustiveNodes = 4;
constexpr unsigned kExhaustiveR = 2;
constexpr std::size_t kRandomSamples = 100000;
constexpr std::size_t kRandomNodes = 9;
constexpr std::uint64_t kSeed = 20240601;
constexpr double kReplayBudget = 1.0;
constexpr double kExhaustiveBudget = 600.0;
constexpr double kRandomBudget = 300.0;
constexpr double kTrialBudget = 600.0;
constexpr std::size_t kTrialNodes = 7;
constexpr std::size_t kSimRuns = 200;
constexpr std::size_t kSimMaxNodes = 20;
constexpr std::size_t kSettleEvents = 100;
constexpr double kSimBudget = 600.0;
constexpr std::size_t kRoundTripStates = 10000;

const std::vector<EventKind> kAllKinds{EventKind::JoinLookup, EventKind::Join,
                                       EventKind::StabilizeFromOldSuccessor,
                                       EventKind::StabilizeFromNewSuccessor, EventKind::Rectify,
                                       EventKind::Fail};

struct Outcome {
  bool pass = true;
  std::vector<std::string> notes;
  void require(bool ok, const std::string& what) {
    pass = pass && ok;
    notes.push_back((ok ? "ok: " : "FAILED: ") + what);
  }
  void info(const std::string& what) { notes.push_back("info: " + what); }
};

class Stopwatch {
 public:
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
  }

 private:
  std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

std::string fmt(double secs) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2fs", secs);
  return buf;
}

RingParams exhaustiveParams() {
  RingParams p;
  p.r = kExhaustiveR;
  return p;
}

StateSource exhaustive() { return exhaustiveSource(exhaustiveParams(), kExhaustiveNodes); }

StateSource randomized() {
  SamplingOptions opt;
  opt.maxNodes = kRandomNodes;
  opt.rValues = {2, 3};
  return sampledSource(opt, kRandomSamples, kSeed);
}

std::string summary(const CheckReport& rep) {
  std::ostringstream out;
  out << rep.lemma << " [" << rep.bounds.mode << "]: " << rep.statesChecked << " states, "
      << rep.eventsChecked << " events, " << rep.violationCount << " violations";
  if (rep.truncated) out << ", truncated";
  return out.str();
}

void firstViolation(Outcome& out, const CheckReport& rep) {
  if (rep.violations.empty()) return;
  const Violation& v = rep.violations.front();
  std::string events;
  for (const Event& e : v.events) events += (events.empty() ? "" : " ") + to_string(e);
  out.info("first violation: " + v.detail + "; events " + (events.empty() ? "none" : events));
  out.info("state " + dumpNetwork(v.state));
}

// Runs `check` on both campaigns, requiring zero violations within budget.
void bothCampaigns(Outcome& out, const std::function<CheckReport(const StateSource&)>& check) {
  {
    Stopwatch t;
    const CheckReport rep = check(exhaustive());
    const double s = t.seconds();
    out.require(rep.passed(), summary(rep) + " in " + fmt(s));
    out.require(s <= kExhaustiveBudget, "exhaustive within " + fmt(kExhaustiveBudget));
    firstViolation(out, rep);
  }
  {
    Stopwatch t;
    const CheckReport rep = check(randomized());
    const double s = t.seconds();
    out.require(rep.passed(), summary(rep) + " in " + fmt(s));
    out.require(s <= kRandomBudget, "randomized within " + fmt(kRandomBudget));
    firstViolation(out, rep);
  }
}

Outcome scenarioReplays() {
  Outcome out;
  for (const char* f : {"fig2.json", "fig3.json", "fig4.json"}) {
    Stopwatch t;
    const ReplayReport rep = replayFile(std::string(CHORD_SCENARIO_DIR) + "/" + f);
    const double s = t.seconds();
    out.require(rep.ok(), std::string(f) + ": status " + std::to_string(static_cast<int>(rep.status)) + ", " +
                              std::to_string(rep.expectationsChecked) + " expectations, " + fmt(s));
    out.require(s < kReplayBudget, std::string(f) + " under " + fmt(kReplayBudget));
    for (const auto& m : rep.messages) {
      if (m.rfind("FAIL", 0) == 0 || m.rfind("step", 0) == 0) out.info(m);
    }
  }
  return out;
}

Outcome preservation() {
  Outcome out;
  bothCampaigns(out, [](const StateSource& s) { return checkPreservation(s, kAllKinds); });
  return out;
}

Outcome progress() {
  Outcome out;
  bothCampaigns(out, [](const StateSource& s) { return checkProgress(s); });
  return out;
}

Outcome monotonicity() {
  Outcome out;
  bothCampaigns(out, [](const StateSource& s) { return checkMonotonicity(s); });
  bothCampaigns(out, [](const StateSource& s) { return checkErrorZeroIffIdeal(s); });
  // Diagnostics only; these do not decide the criterion.
  const CheckReport ccw = checkMonotonicity(exhaustive(), {}, RankDirection::Counterclockwise);
  out.info(summary(ccw));
  const CheckReport own = checkExecutorMonotonicity(exhaustive());
  out.info(summary(own));
  const CheckReport ownRandom = checkExecutorMonotonicity(randomized());
  out.info(summary(ownRandom));
  return out;
}

Outcome implications() {
  Outcome out;
  bothCampaigns(out, [](const StateSource& s) { return checkImplications(s); });
  return out;
}

Outcome trialSearch() {
  Outcome out;
  TrialSearchBounds b;
  b.maxNodes = kTrialNodes;
  b.r = 2;
  b.seed = kSeed;
  for (InvariantSet set : {InvariantSet::TrialSix, InvariantSet::TrialEight}) {
    Stopwatch t;
    const auto found = searchTrialCounterexample(set, b);
    const double s = t.seconds();
    const std::string name(to_string(set));
    out.require(found.has_value(), name + " counterexample found in " + fmt(s));
    out.require(s <= kTrialBudget, name + " within " + fmt(kTrialBudget));
    if (!found) continue;
    const std::string want = set == InvariantSet::TrialSix ? "orderedRing" : "noConflictingDates";
    const bool brokeIt = std::find(found->broken.begin(), found->broken.end(), want) != found->broken.end();
    out.require(brokeIt, name + " step breaks " + want);
    out.require(found->state.nodes().size() <= kTrialNodes, name + " state within " +
                                                                  std::to_string(kTrialNodes) + " nodes");
    const bool schema = set == InvariantSet::TrialSix
                            ? found->events.size() >= 2 && found->events.front().kind == EventKind::Fail
                            : found->events.size() == 1;
    out.require(schema, name + " event schema");
    const ReplayReport replay = replayScenario(scenarioFromCounterexample(*found, set, name));
    out.require(replay.ok(), name + " counterexample replays");
    std::string events;
    for (const Event& e : found->events) events += " " + to_string(e);
    out.info(name + " after " + std::to_string(found->samplesTried) + " samples:" + events);
    out.info("state " + dumpNetwork(found->state));
  }
  return out;
}

Outcome convergence() {
  Outcome out;
  Stopwatch total;
  std::size_t passed = 0;
  std::size_t maxConv = 0;
  std::size_t maxLive = 0;
  for (std::size_t i = 0; i < kSimRuns; ++i) {
    SimConfig c;
    c.params.r = i % 2 == 0 ? 2 : 3;
    c.churnSteps = 50 + (i * 37) % 151;
    c.seed = kSeed + i;
    c.maxNodes = kSimMaxNodes;
    c.settleEvents = kSettleEvents;
    std::string problem;
    try {
      const Trace t = runSimulation(c);
      std::size_t settle = 0;
      bool allValid = true;
      bool settleIdeal = true;
      for (const TraceStep& st : t.steps) {
        allValid = allValid && st.valid;
        maxLive = std::max(maxLive, st.state.liveCount());
        if (st.phase == SimPhase::Settle) {
          ++settle;
          settleIdeal = settleIdeal && st.ideal && !st.effective;
        }
      }
      const std::size_t conv = convergenceSteps(t);
      const std::size_t initial = repairPhaseInitialError(t);
      maxConv = std::max(maxConv, conv);
      if (!allValid) problem = "a state is not valid";
      else if (t.steps.empty() || !t.steps.back().ideal) problem = "final state not ideal";
      else if (conv > initial) problem = "convergence " + std::to_string(conv) + " > error " + std::to_string(initial);
      else if (settle != kSettleEvents || !settleIdeal) problem = "settle phase left the ideal state";
    } catch (const std::exception& e) {
      problem = e.what();
    }
    if (problem.empty()) {
      ++passed;
    } else {
      out.info("seed " + std::to_string(c.seed) + ": " + problem);
    }
  }
  const double s = total.seconds();
  out.require(passed == kSimRuns, std::to_string(passed) + "/" + std::to_string(kSimRuns) +
                                      " runs converged and stayed ideal, " + fmt(s));
  out.require(s <= kSimBudget, "within " + fmt(kSimBudget));
  out.info("largest convergenceSteps " + std::to_string(maxConv) + ", most live members " +
           std::to_string(maxLive));
  return out;
}

Outcome canaries() {
  Outcome out;
  struct Canary {
    const char* name;
    ProtocolRules rules;
  };
  ProtocolRules liveness;
  liveness.liveCheckBeforeAdoption = false;
  ProtocolRules lists;
  lists.fullJoinLists = false;
  for (const Canary& c : {Canary{"no live check before adoption", liveness},
                          Canary{"partial join lists", lists}}) {
    PreservationOptions opt;
    opt.rules = c.rules;
    const CheckReport rep = checkPreservation(exhaustive(), kAllKinds, opt);
    out.require(rep.violationCount > 0, std::string(c.name) + ": " + summary(rep));
    if (rep.violations.empty()) continue;
    const Violation& v = rep.violations.front();
    const Scenario sc = scenarioFromViolation(v, c.rules, c.name);
    const ReplayReport replay = replayScenario(sc);
    bool reproduces = replay.ok() && replay.trace && !replay.trace->steps.empty();
    if (reproduces) {
      const Network& last = replay.trace->steps.back().state;
      reproduces = !isValid(last) || !last.wellFormed();
    }
    out.require(reproduces, std::string(c.name) + ": counterexample replays to a broken state");
    firstViolation(out, rep);
  }
  return out;
}

Outcome roundTrip() {
  Outcome out;
  std::size_t mismatches = 0;
  SamplingOptions opt;
  sampleValidStates(opt, kRoundTripStates, kSeed, [&](const Network& net) {
    const std::string text = dumpNetwork(net);
    const Network back = parseNetwork(text);
    if (!(back == net) || dumpNetwork(back) != text || !(networkFromJson(toJson(net)) == net)) ++mismatches;
  });
  out.require(mismatches == 0, std::to_string(kRoundTripStates) + " networks, " + std::to_string(mismatches) +
                                   " mismatches");
  std::size_t traceFailures = 0;
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    SimConfig c;
    c.seed = seed;
    c.params.r = seed % 2 == 0 ? 2 : 3;
    c.churnSteps = 80;
    const Trace t = runSimulation(c);
    std::stringstream ss;
    writeTrace(ss, t, 10);
    try {
      if (!(readTrace(ss) == t)) ++traceFailures;
    } catch (const std::exception&) {
      ++traceFailures;
    }
  }
  out.require(traceFailures == 0, "20 simulation traces, " + std::to_string(traceFailures) + " mismatches");
  std::size_t scenarioFailures = 0;
  for (const char* f : {"fig2.json", "fig3.json", "fig4.json"}) {
    const Scenario s = loadScenario(std::string(CHORD_SCENARIO_DIR) + "/" + f);
    if (!(parseScenario(toJson(s).dump(2)) == s)) ++scenarioFailures;
  }
  out.require(scenarioFailures == 0, "3 scenarios, " + std::to_string(scenarioFailures) + " mismatches");
  return out;
}

const std::vector<std::pair<const char*, Outcome (*)()>> kCriteria{
    {"scenario replays", scenarioReplays},
    {"invariant preservation", preservation},
    {"progress", progress},
    {"error monotonicity", monotonicity},
    {"list implications", implications},
    {"trial invariant counterexamples", trialSearch},
    {"convergence under simulation", convergence},
    {"fault-injection canaries", canaries},
    {"serialization round trip", roundTrip},
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Acceptance criteria"};
  std::vector<int> selected;
  bool verbose = false;
  app.add_option("--criterion,-c", selected, "Criterion numbers to run (default: all)")
      ->check(CLI::Range(1, static_cast<int>(kCriteria.size())));
  app.add_flag("--verbose,-v", verbose, "Print per-check notes");
  CLI11_PARSE(app, argc, argv);
  if (selected.empty()) {
    for (int i = 1; i <= static_cast<int>(kCriteria.size()); ++i) selected.push_back(i);
  }

  bool allPass = true;
  for (int n : selected) {
    const auto& [name, run] = kCriteria[static_cast<std::size_t>(n - 1)];
    Stopwatch t;
    Outcome o;
    try {
      o = run();
    } catch (const std::exception& e) {
      o.require(false, std::string("exception: ") + e.what());
    }
    std::cout << "criterion " << n << " (" << name << "): " << (o.pass ? "PASS" : "FAIL") << " in "
              << fmt(t.seconds()) << '\n';
    if (verbose || !o.pass) {
      for (const auto& note : o.notes) std::cout << "    " << note << '\n';
    }
    std::cout.flush();
    allPass = allPass && o.pass;
  }
  return allPass ? 0 : 1;
}
