#include <chrono>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"

#include "chord/checker.hpp"
#include "chord/measure.hpp"
#include "chord/scenario.hpp"
#include "chord/serialize.hpp"
#include "chord/sim.hpp"
#include "chord/topology.hpp"

using namespace chord;

namespace {

constexpr int kExitUsage = 64;

std::vector<Identifier> toIds(const std::vector<std::uint32_t>& v) {
  return {v.begin(), v.end()};
}

void writeText(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << text;
}

Network readNetwork(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return parseNetwork(ss.str());
}

std::vector<EventKind> parseKinds(const std::vector<std::string>& names) {
  if (names.empty()) {
    return {EventKind::JoinLookup, EventKind::Join, EventKind::StabilizeFromOldSuccessor,
            EventKind::StabilizeFromNewSuccessor, EventKind::Rectify, EventKind::Fail};
  }
  std::vector<EventKind> out;
  for (const auto& n : names) out.push_back(eventKindFromString(n));
  return out;
}

struct CheckArgs {
  std::string lemma;
  std::size_t n = 4;
  std::vector<unsigned> r{2};
  unsigned m = 6;
  std::string mode = "exhaustive";
  std::size_t samples = 100000;
  std::uint64_t seed = 1;
  std::string trial = "six-conjunct";
  std::string out;
  std::vector<std::string> kinds;
  std::string canary;
  std::string direction = "clockwise";
};

int runCheck(const CheckArgs& a) {
  ProtocolRules rules;
  if (a.canary == "liveness") {
    rules.liveCheckBeforeAdoption = false;
  } else if (a.canary == "join-lists") {
    rules.fullJoinLists = false;
  } else if (!a.canary.empty()) {
    throw std::invalid_argument("unknown canary: " + a.canary);
  }

  if (a.lemma == "trial-search") {
    TrialSearchBounds b;
    b.maxNodes = a.n;
    b.r = a.r.front();
    b.m = a.m;
    b.seed = a.seed;
    b.maxSamples = a.samples;
    const InvariantSet set = invariantSetFromString(a.trial);
    const auto found = searchTrialCounterexample(set, b);
    Json summary{{"lemma", "trial-search"},
                 {"trial", std::string(to_string(set))},
                 {"seed", a.seed},
                 {"n", a.n},
                 {"r", b.r},
                 {"found", found.has_value()}};
    if (found) {
      summary["samplesTried"] = found->samplesTried;
      Json events = Json::array();
      for (const Event& e : found->events) events.push_back(toJson(e));
      summary["events"] = events;
      summary["broken"] = found->broken;
      const std::string name = "trial-" + std::string(to_string(set));
      const std::string path = a.out.empty() ? name + ".json" : a.out;
      writeText(path, toJson(scenarioFromCounterexample(*found, set, name)).dump(2) + "\n");
      summary["artifact"] = path;
    }
    std::cout << summary.dump(2) << "\n";
    return found ? 0 : 1;
  }

  const RankDirection dir =
      a.direction == "counterclockwise" ? RankDirection::Counterclockwise : RankDirection::Clockwise;
  const auto runLemma = [&](const StateSource& src) {
    if (a.lemma == "preservation") return checkPreservation(src, parseKinds(a.kinds), {InvariantSet::Valid, rules});
    if (a.lemma == "progress") return checkProgress(src, rules);
    if (a.lemma == "monotonicity") return checkMonotonicity(src, rules, dir);
    if (a.lemma == "executor-monotonicity") return checkExecutorMonotonicity(src, rules);
    if (a.lemma == "error-zero") return checkErrorZeroIffIdeal(src);
    if (a.lemma == "implications") return checkImplications(src);
    throw std::invalid_argument("unknown lemma: " + a.lemma);
  };

  CheckReport total;
  if (a.mode == "random") {
    // One campaign; each sample draws its r from the list.
    SamplingOptions opt;
    opt.m = a.m;
    opt.rValues = a.r;
    opt.maxNodes = a.n;
    total = runLemma(sampledSource(opt, a.samples, a.seed));
  } else if (a.mode == "exhaustive") {
    for (std::size_t i = 0; i < a.r.size(); ++i) {
      RingParams p;
      p.m = a.m;
      p.r = a.r[i];
      const CheckReport rep = runLemma(exhaustiveSource(p, a.n));
      if (i == 0) {
        total = rep;
      } else {
        total.merge(rep);
        total.bounds.rValues.push_back(p.r);
      }
    }
  } else {
    throw std::invalid_argument("unknown mode: " + a.mode);
  }

  Json summary = toJson(total);
  summary.erase("violations");
  if (!total.violations.empty()) {
    summary["firstViolation"] = total.violations.front().detail;
  }
  std::cout << summary.dump(2) << "\n";
  if (!a.out.empty()) {
    if (!total.violations.empty()) {
      writeText(a.out, toJson(scenarioFromViolation(total.violations.front(), rules, total.lemma)).dump(2) + "\n");
    } else {
      writeText(a.out, toJson(total).dump(2) + "\n");
    }
  }
  return total.passed() ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Chord ring-maintenance model checker and simulator"};
  app.require_subcommand(1);

  // init
  auto* init = app.add_subcommand("init", "Emit the ideal ring over a base");
  unsigned initM = 6;
  unsigned initR = 2;
  std::vector<std::uint32_t> initBase{7, 19, 33};
  std::string initOut;
  init->add_option("--m", initM, "Identifier bits");
  init->add_option("--r", initR, "Successor-list length");
  init->add_option("--base", initBase, "Base identifiers (r + 1 of them)")->delimiter(',');
  init->add_option("--out", initOut, "Output file (default stdout)");

  // check
  auto* check = app.add_subcommand("check", "Check a lemma over generated states");
  CheckArgs ca;
  check->add_option("lemma", ca.lemma,
                    "preservation | progress | monotonicity | executor-monotonicity | error-zero | "
                    "implications | trial-search")
      ->required();
  check->add_option("--n", ca.n, "Maximum nodes");
  check->add_option("--r", ca.r, "Successor-list length(s)")->delimiter(',');
  check->add_option("--m", ca.m, "Identifier bits");
  check->add_option("--mode", ca.mode, "exhaustive | random");
  check->add_option("--samples", ca.samples, "Random samples (random mode, trial search)");
  check->add_option("--seed", ca.seed, "Random seed");
  check->add_option("--trial", ca.trial, "six-conjunct | eight-conjunct | valid");
  check->add_option("--out", ca.out, "Write a violation scenario or the full report here (trial-search: defaults to trial-<set>.json)");
  check->add_option("--kinds", ca.kinds, "Event kinds for preservation")->delimiter(',');
  check->add_option("--canary", ca.canary, "Fault injection: liveness | join-lists");
  check->add_option("--direction", ca.direction, "Rank direction for monotonicity");

  // explore
  auto* explore = app.add_subcommand("explore", "Explore every interleaving from a network");
  std::string exInit;
  unsigned exM = 6;
  unsigned exR = 2;
  std::vector<std::uint32_t> exBase{7, 19, 33};
  std::vector<std::uint32_t> exPool;
  ExploreBounds eb;
  explore->add_option("--init", exInit, "Initial network file (default: ideal ring over --base)");
  explore->add_option("--m", exM, "Identifier bits");
  explore->add_option("--r", exR, "Successor-list length");
  explore->add_option("--base", exBase, "Base identifiers")->delimiter(',');
  explore->add_option("--joins", eb.maxJoins, "Join budget");
  explore->add_option("--fails", eb.maxFails, "Fail budget");
  explore->add_option("--depth", eb.maxDepth, "Depth bound");
  explore->add_option("--max-states", eb.maxStates, "State budget");
  explore->add_option("--join-pool", exPool, "Identifiers allowed to join")->delimiter(',');

  // simulate
  auto* simulate = app.add_subcommand("simulate", "Run a churn-then-repair simulation");
  SimConfig sc;
  unsigned simM = 6;
  unsigned simR = 2;
  std::vector<std::uint32_t> simBase;
  std::string traceOut;
  std::size_t snapshotInterval = 0;
  simulate->add_option("--m", simM, "Identifier bits");
  simulate->add_option("--r", simR, "Successor-list length");
  simulate->add_option("--base", simBase, "Base identifiers (default: drawn from the seed)")->delimiter(',');
  simulate->add_option("--churn-steps", sc.churnSteps, "Churn-phase steps");
  simulate->add_option("--seed", sc.seed, "Random seed");
  simulate->add_option("--max-nodes", sc.maxNodes, "Maximum concurrent members");
  simulate->add_option("--fairness-window", sc.fairnessWindow, "Weak-fairness window");
  simulate->add_option("--join-weight", sc.joinWeight, "Churn weight of joins");
  simulate->add_option("--fail-weight", sc.failWeight, "Churn weight of fails");
  simulate->add_option("--repair-weight", sc.repairWeight, "Churn weight of repairs");
  simulate->add_option("--trace-out", traceOut, "Write the trace (line-delimited JSON)");
  simulate->add_option("--snapshot-interval", snapshotInterval, "Snapshot every k steps");
  simulate->add_flag("--drop-base", sc.dropBase, "Unsafe: let base members fail");

  // replay
  auto* replay = app.add_subcommand("replay", "Replay a scenario or trace file");
  std::string replayPath;
  bool quiet = false;
  replay->add_option("file", replayPath, "Scenario or trace file")->required();
  replay->add_flag("--quiet", quiet, "Only print failures");

  // export-dot
  auto* dot = app.add_subcommand("export-dot", "Render a network file as Graphviz DOT");
  std::string dotPath;
  std::string dotOut;
  dot->add_option("file", dotPath, "Network file")->required();
  dot->add_option("--out", dotOut, "Output file (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  try {
    if (*init) {
      RingParams p;
      p.m = initM;
      p.r = initR;
      writeText(initOut, toJson(initNetwork(p, toIds(initBase))).dump(2) + "\n");
      return 0;
    }
    if (*check) return runCheck(ca);
    if (*explore) {
      Network net;
      if (!exInit.empty()) {
        net = readNetwork(exInit);
      } else {
        RingParams p;
        p.m = exM;
        p.r = exR;
        net = initNetwork(p, toIds(exBase));
      }
      eb.joinPool = toIds(exPool);
      if (eb.joinPool.empty() && eb.maxJoins > 0) {
        // Default joiners: the midpoint of every gap between table entries.
        const auto nodes = net.nodes();
        const std::uint64_t space = net.params().spaceSize();
        for (std::size_t i = 0; i < nodes.size(); ++i) {
          const std::uint64_t a = nodes[i].ident.value();
          const std::uint64_t gap = (nodes[(i + 1) % nodes.size()].ident.value() + space - a) % space;
          if (gap >= 2) eb.joinPool.emplace_back(static_cast<std::uint32_t>((a + gap / 2) % space));
        }
      }
      const auto start = std::chrono::steady_clock::now();
      const ExploreReport rep = exploreReachable(net, eb);
      Json summary = toJson(rep.check);
      summary.erase("violations");
      summary["transitions"] = rep.transitions;
      summary["terminalStates"] = rep.terminalStates;
      summary["depthReached"] = rep.depthReached;
      summary["seconds"] = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
      if (!rep.check.violations.empty()) summary["firstViolation"] = rep.check.violations.front().detail;
      std::cout << summary.dump(2) << "\n";
      return rep.check.passed() ? 0 : 1;
    }
    if (*simulate) {
      sc.params.m = simM;
      sc.params.r = simR;
      sc.base = toIds(simBase);
      Trace trace = runSimulation(sc);
      if (!traceOut.empty()) {
        std::ofstream out(traceOut, std::ios::binary);
        if (!out) throw std::runtime_error("cannot write " + traceOut);
        writeTrace(out, trace, snapshotInterval);
      }
      bool allValid = true;
      for (const TraceStep& st : trace.steps) allValid = allValid && st.valid;
      const Network& last = trace.steps.empty() ? trace.initial : trace.steps.back().state;
      Json summary{{"seed", sc.seed},
                   {"steps", trace.steps.size()},
                   {"liveMembers", last.liveCount()},
                   {"allValid", allValid},
                   {"finalIdeal", isIdeal(last)}};
      int code = allValid && isIdeal(last) ? 0 : 1;
      try {
        const std::size_t conv = convergenceSteps(trace);
        const std::size_t bound = repairPhaseInitialError(trace);
        summary["convergenceSteps"] = conv;
        summary["repairPhaseInitialError"] = bound;
        if (conv > bound) code = 1;
      } catch (const DivergenceError& e) {
        summary["divergence"] = e.what();
        code = 1;
      }
      std::cout << summary.dump(2) << "\n";
      return code;
    }
    if (*replay) {
      const ReplayReport rep = replayFile(replayPath);
      for (const auto& line : rep.messages) {
        if (!quiet || line.rfind("ok", 0) != 0) std::cout << line << "\n";
      }
      std::cout << (rep.ok() ? "replay ok" : "replay failed") << " (" << rep.stepsApplied << " steps, "
                << rep.expectationsChecked << " expectations)\n";
      return static_cast<int>(rep.status);
    }
    if (*dot) {
      writeText(dotOut, exportDot(readNetwork(dotPath)));
      return 0;
    }
  } catch (const ParseError& e) {
    std::cerr << "parse error: " << e.what() << "\n";
    return 2;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return kExitUsage;
}
