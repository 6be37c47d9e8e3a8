#include "chord/sim.hpp"

#include <algorithm>
#include <istream>
#include <map>
#include <ostream>
#include <random>
#include <string>

#include "chord/invariants.hpp"
#include "chord/measure.hpp"
#include "chord/serialize.hpp"
#include "chord/topology.hpp"

namespace chord {

void SimConfig::validate() const {
  params.validate();
  if (fairnessWindow < 1) throw std::invalid_argument("fairnessWindow must be at least 1");
  if (maxNodes < params.r + 1 || maxNodes > params.spaceSize()) {
    throw std::invalid_argument("maxNodes must lie between r + 1 and the identifier space size");
  }
  if (!base.empty() && base.size() != params.r + 1) {
    throw std::invalid_argument("base must hold r + 1 identifiers");
  }
  if (joinWeight < 0 || failWeight < 0 || repairWeight < 0 || repairWeights.stabilizeOld < 0 ||
      repairWeights.stabilizeNew < 0 || repairWeights.rectify < 0) {
    throw std::invalid_argument("weights must be non-negative");
  }
}

namespace {

double weightOf(const RepairWeights& w, EventKind k) {
  switch (k) {
    case EventKind::StabilizeFromOldSuccessor:
      return w.stabilizeOld;
    case EventKind::StabilizeFromNewSuccessor:
      return w.stabilizeNew;
    case EventKind::Rectify:
      return w.rectify;
    default:
      return 0.0;
  }
}

// Weighted choice among repair events; uniform if every weight is zero.
std::size_t pickRepair(std::mt19937_64& rng, const std::vector<Event>& events, const RepairWeights& w) {
  std::vector<double> weights;
  double sum = 0;
  for (const Event& e : events) {
    weights.push_back(weightOf(w, e.kind));
    sum += weights.back();
  }
  if (sum <= 0) return std::uniform_int_distribution<std::size_t>(0, events.size() - 1)(rng);
  std::discrete_distribution<std::size_t> dist(weights.begin(), weights.end());
  return dist(rng);
}

template <typename T>
const T& pickOne(std::mt19937_64& rng, const std::vector<T>& v) {
  return v[std::uniform_int_distribution<std::size_t>(0, v.size() - 1)(rng)];
}

bool pointersChanged(const Network& a, const Network& b, Identifier n) {
  const NodeState* x = a.find(n);
  const NodeState* y = b.find(n);
  if (!x || !y) return x != y;
  return !samePointers(*x, *y);
}

class Recorder {
 public:
  explicit Recorder(Trace& trace) : trace_(trace) {}

  void record(SimPhase phase, const Event& e, const Network& before, Network after) {
    TraceStep st;
    st.step = trace_.steps.size() + 1;
    st.phase = phase;
    st.event = e;
    st.effective = pointersChanged(before, after, e.node);
    st.totalError = totalError(after);
    st.valid = isValid(after);
    st.ideal = isIdeal(after);
    st.state = std::move(after);
    trace_.steps.push_back(std::move(st));
  }

  const Network& current() const {
    return trace_.steps.empty() ? trace_.initial : trace_.steps.back().state;
  }

 private:
  Trace& trace_;
};

SimPhase phaseOf(EventKind k) { return isRepair(k) ? SimPhase::Repair : SimPhase::Churn; }

std::string_view to_string(SimPhase p) {
  switch (p) {
    case SimPhase::Churn:
      return "churn";
    case SimPhase::Repair:
      return "repair";
    case SimPhase::Settle:
      return "settle";
  }
  return "?";
}

SimPhase phaseFromString(const std::string& s) {
  if (s == "churn") return SimPhase::Churn;
  if (s == "repair") return SimPhase::Repair;
  if (s == "settle") return SimPhase::Settle;
  throw ParseError("unknown phase: " + s);
}

}  // namespace

Trace runSimulation(const SimConfig& config) {
  config.validate();
  std::mt19937_64 rng(config.seed);
  const RingParams& params = config.params;
  const std::uint32_t space = static_cast<std::uint32_t>(params.spaceSize());

  std::vector<Identifier> base = config.base;
  if (base.empty()) {
    std::vector<std::uint32_t> pool(space);
    for (std::uint32_t i = 0; i < space; ++i) pool[i] = i;
    std::shuffle(pool.begin(), pool.end(), rng);
    for (unsigned i = 0; i <= params.r; ++i) base.emplace_back(pool[i]);
  }
  Trace trace{initNetwork(params, base), config.rules, config.seed, {}};
  if (config.dropBase) trace.initial = trace.initial.withBase({});
  Recorder rec(trace);
  const ProtocolRules& rules = config.rules;

  // Phase 1: churn.
  for (std::size_t step = 0; step < config.churnSteps; ++step) {
    const Network& net = rec.current();
    std::vector<Identifier> pending;
    std::vector<Identifier> unused;
    std::size_t occupied = 0;
    for (const NodeState& ns : net.nodes()) {
      if (!ns.live && ns.pendingNewSucc) pending.push_back(ns.ident);
      if (ns.live || ns.pendingNewSucc) ++occupied;
    }
    for (std::uint32_t v = 0; v < space; ++v) {
      const NodeState* ns = net.find(Identifier(v));
      if (!ns || (!ns->live && !ns->pendingNewSucc)) unused.emplace_back(v);
    }
    const bool canLookup = occupied < config.maxNodes && !unused.empty();
    std::vector<Identifier> failable;
    for (Identifier n : net.liveMembers()) {
      if (!net.isBase(n)) failable.push_back(n);
    }
    const auto repairs = enabledRepairEvents(net, rules);

    const double join = (canLookup || !pending.empty()) ? config.joinWeight : 0.0;
    const double fail = failable.empty() ? 0.0 : config.failWeight;
    const double repair = repairs.empty() ? 0.0 : config.repairWeight;
    if (join + fail + repair <= 0) break;
    std::discrete_distribution<int> category({join, fail, repair});

    std::optional<Event> chosen;
    switch (category(rng)) {
      case 0:
        if (!pending.empty() && (!canLookup || std::bernoulli_distribution(0.5)(rng))) {
          chosen = Event::join(pickOne(rng, pending));
        } else {
          chosen = Event::joinLookup(pickOne(rng, unused), pickOne(rng, net.liveMembers()));
        }
        break;
      case 1:
        chosen = Event::fail(pickOne(rng, failable));
        break;
      default:
        chosen = repairs[pickRepair(rng, repairs, config.repairWeights)];
        break;
    }
    // Fails blocked by the successor guard are skipped.
    if (!isEnabled(net, *chosen, rules)) continue;
    rec.record(SimPhase::Churn, *chosen, net, applyEvent(net, *chosen, rules));
  }

  // Phase 2: effective repair events under weak fairness.
  std::map<std::string, std::size_t> age;
  for (std::size_t step = 0;; ++step) {
    const Network& net = rec.current();
    const auto effective = effectiveEnabled(net, rules);
    if (effective.empty()) break;
    if (step >= config.stepCeiling) {
      throw DivergenceError("repair phase exceeded " + std::to_string(config.stepCeiling) + " steps");
    }
    std::map<std::string, std::size_t> next;
    std::size_t oldest = 0;
    std::optional<std::size_t> forced;
    for (std::size_t i = 0; i < effective.size(); ++i) {
      const std::string key = to_string(effective[i]);
      const std::size_t a = age.contains(key) ? age[key] + 1 : 1;
      next[key] = a;
      if (a >= config.fairnessWindow && a > oldest) {
        oldest = a;
        forced = i;
      }
    }
    age = std::move(next);
    const std::size_t idx = forced ? *forced : pickRepair(rng, effective, config.repairWeights);
    const Event e = effective[idx];
    age.erase(to_string(e));
    rec.record(SimPhase::Repair, e, net, applyEvent(net, e, rules));
  }

  // Phase 3: any enabled repair event must leave the state unchanged.
  for (std::size_t i = 0; i < config.settleEvents; ++i) {
    const Network& net = rec.current();
    const auto repairs = enabledRepairEvents(net, rules);
    if (repairs.empty()) break;
    const Event e = repairs[pickRepair(rng, repairs, config.repairWeights)];
    rec.record(SimPhase::Settle, e, net, applyEvent(net, e, rules));
  }
  return trace;
}

Trace traceOf(const Network& init, const std::vector<Event>& events, const ProtocolRules& rules) {
  Trace trace{init, rules, 0, {}};
  Recorder rec(trace);
  for (const Event& e : events) {
    const Network& net = rec.current();
    rec.record(phaseOf(e.kind), e, net, applyEvent(net, e, rules));
  }
  return trace;
}

namespace {

// Index of the first step after the last churn step.
std::size_t repairStart(const Trace& trace) {
  std::size_t start = 0;
  for (std::size_t i = 0; i < trace.steps.size(); ++i) {
    if (trace.steps[i].phase == SimPhase::Churn) start = i + 1;
  }
  return start;
}

const Network& stateBefore(const Trace& trace, std::size_t idx) {
  return idx == 0 ? trace.initial : trace.steps[idx - 1].state;
}

}  // namespace

std::size_t convergenceSteps(const Trace& trace) {
  const std::size_t start = repairStart(trace);
  std::size_t count = 0;
  std::optional<std::size_t> idealAt;
  if (isIdeal(stateBefore(trace, start))) idealAt = start;
  for (std::size_t i = start; i < trace.steps.size(); ++i) {
    const TraceStep& st = trace.steps[i];
    if (idealAt) {
      if (!st.ideal || !(samePointers(st.state.node(st.event.node),
                                      stateBefore(trace, i).node(st.event.node)))) {
        throw DivergenceError("ideal state left at step " + std::to_string(st.step));
      }
      continue;
    }
    if (st.effective) ++count;
    if (st.ideal) idealAt = i;
  }
  if (!idealAt) throw DivergenceError("trace never reaches an ideal state");
  return count;
}

std::size_t repairPhaseInitialError(const Trace& trace) {
  return totalError(stateBefore(trace, repairStart(trace)));
}

void writeTrace(std::ostream& out, const Trace& trace, std::size_t snapshotInterval) {
  out << Json{{"type", "header"},
              {"seed", trace.seed},
              {"rules", toJson(trace.rules)},
              {"initial", toJson(trace.initial)}}
             .dump()
      << '\n';
  for (std::size_t i = 0; i < trace.steps.size(); ++i) {
    const TraceStep& st = trace.steps[i];
    Json rec{{"type", "step"},
             {"step", st.step},
             {"phase", std::string(to_string(st.phase))},
             {"event", toJson(st.event)},
             {"totalError", st.totalError},
             {"valid", st.valid},
             {"ideal", st.ideal},
             {"effective", st.effective}};
    const bool last = i + 1 == trace.steps.size();
    if (last || (snapshotInterval > 0 && st.step % snapshotInterval == 0)) {
      rec["snapshot"] = toJson(st.state);
    }
    out << rec.dump() << '\n';
  }
}

namespace {

Json parseLine(const std::string& line, std::size_t lineNo) {
  try {
    return Json::parse(line);
  } catch (const Json::parse_error& e) {
    throw ParseError("trace line " + std::to_string(lineNo) + ": " + e.what());
  }
}

template <typename T>
T field(const Json& rec, const char* name, std::size_t lineNo) {
  auto it = rec.find(name);
  if (it == rec.end()) {
    throw ParseError("trace line " + std::to_string(lineNo) + ": missing field '" + name + "'");
  }
  try {
    return it->get<T>();
  } catch (const Json::exception& e) {
    throw ParseError("trace line " + std::to_string(lineNo) + ": field '" + name + "': " + e.what());
  }
}

}  // namespace

Trace readTrace(std::istream& in) {
  std::string line;
  std::size_t lineNo = 0;
  std::optional<Trace> trace;
  while (std::getline(in, line)) {
    ++lineNo;
    if (line.empty()) continue;
    const Json rec = parseLine(line, lineNo);
    if (!rec.is_object()) throw ParseError("trace line " + std::to_string(lineNo) + ": not an object");
    const std::string type = field<std::string>(rec, "type", lineNo);
    if (type == "header") {
      if (trace) throw ParseError("duplicate trace header");
      trace = Trace{networkFromJson(rec.at("initial")), rulesFromJson(rec.value("rules", Json::object())),
                    field<std::uint64_t>(rec, "seed", lineNo), {}};
      continue;
    }
    if (type != "step") throw ParseError("unknown record type: " + type);
    if (!trace) throw ParseError("trace step before header");

    const Event e = eventFromJson(rec.at("event"));
    const Network& before = trace->steps.empty() ? trace->initial : trace->steps.back().state;
    const auto mismatch = [&](const std::string& what, bool disabled = false) {
      return TraceMismatch("trace step " + std::to_string(trace->steps.size() + 1) + ": " + what, disabled);
    };
    if (!isEnabled(before, e, trace->rules)) throw mismatch("event not enabled: " + to_string(e), true);
    Recorder rec2(*trace);
    rec2.record(phaseFromString(field<std::string>(rec, "phase", lineNo)), e, before,
                applyEvent(before, e, trace->rules));
    const TraceStep& st = trace->steps.back();
    if (field<std::size_t>(rec, "step", lineNo) != st.step) throw mismatch("step number");
    if (field<std::size_t>(rec, "totalError", lineNo) != st.totalError) throw mismatch("totalError");
    if (field<bool>(rec, "valid", lineNo) != st.valid) throw mismatch("valid flag");
    if (field<bool>(rec, "ideal", lineNo) != st.ideal) throw mismatch("ideal flag");
    if (field<bool>(rec, "effective", lineNo) != st.effective) throw mismatch("effective flag");
    if (auto it = rec.find("snapshot"); it != rec.end() && !(networkFromJson(*it) == st.state)) {
      throw mismatch("snapshot differs from the replayed state");
    }
  }
  if (!trace) throw ParseError("empty trace");
  return std::move(*trace);
}

}  // namespace chord
