#include "chord/scenario.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include "chord/invariants.hpp"
#include "chord/measure.hpp"
#include "chord/topology.hpp"

namespace chord {

Network Scenario::initialNetwork() const {
  if (initialState) return *initialState;
  return initNetwork(params, base);
}

namespace {

Json idJson(const std::optional<Identifier>& id) { return id ? Json(id->value()) : Json(nullptr); }

Json idsJson(const std::vector<Identifier>& ids) {
  Json arr = Json::array();
  for (Identifier id : ids) arr.push_back(id.value());
  return arr;
}

std::optional<Identifier> optionalId(const Json& obj, const char* field) {
  auto it = obj.find(field);
  if (it == obj.end() || it->is_null()) return std::nullopt;
  if (!it->is_number_unsigned()) throw ParseError(std::string("field '") + field + "' must be an identifier");
  return Identifier(it->get<std::uint32_t>());
}

Identifier need(const std::optional<Identifier>& node, const std::string& predicate) {
  if (!node) throw std::invalid_argument("predicate '" + predicate + "' needs a node");
  return *node;
}

bool admissibleBaseExists(const Network& net) {
  const auto live = net.liveMembers();
  const std::size_t k = net.params().r + 1;
  if (live.size() < k) return false;
  std::vector<bool> pick(live.size(), false);
  std::fill(pick.begin(), pick.begin() + static_cast<long>(k), true);
  do {
    std::vector<Identifier> base;
    for (std::size_t i = 0; i < live.size(); ++i) {
      if (pick[i]) base.push_back(live[i]);
    }
    if (conjuncts(net.withBase(std::move(base))).baseNotSkipped) return true;
  } while (std::prev_permutation(pick.begin(), pick.end()));
  return false;
}

using Evaluator = Json (*)(const Network&, const std::string&, const std::optional<Identifier>&,
                           const std::optional<Identifier>&, const ProtocolRules&);

#define CHORD_PRED(name, body)                                                                    \
  {name, [](const Network& net, const std::string& p, const std::optional<Identifier>& node,      \
            const std::optional<Identifier>& other, const ProtocolRules& rules) -> Json {         \
     (void)net; (void)p; (void)node; (void)other; (void)rules;                                    \
     body                                                                                         \
   }}

const std::vector<std::pair<std::string, Evaluator>>& evaluators() {
  static const std::vector<std::pair<std::string, Evaluator>> table{
      CHORD_PRED("atLeastOneRing", return conjuncts(net).atLeastOneRing;),
      CHORD_PRED("atMostOneRing", return conjuncts(net).atMostOneRing;),
      CHORD_PRED("orderedRing", return conjuncts(net).orderedRing;),
      CHORD_PRED("connectedAppendages", return conjuncts(net).connectedAppendages;),
      CHORD_PRED("baseNotSkipped", return conjuncts(net).baseNotSkipped;),
      CHORD_PRED("valid", return isValid(net);),
      CHORD_PRED("ideal", return isIdeal(net);),
      CHORD_PRED("wellFormed", return net.wellFormed();),
      CHORD_PRED("improvable", return networkIsImprovable(net, rules);),
      CHORD_PRED("noDuplicates", {
        if (node) return listProperties(net, *node).noDuplicates;
        const auto live = net.liveMembers();
        return std::all_of(live.begin(), live.end(),
                           [&](Identifier n) { return listProperties(net, n).noDuplicates; });
      }),
      CHORD_PRED("orderedSuccessorLists", {
        if (node) return listProperties(net, *node).orderedSuccessorLists;
        const auto live = net.liveMembers();
        return std::all_of(live.begin(), live.end(),
                           [&](Identifier n) { return listProperties(net, n).orderedSuccessorLists; });
      }),
      CHORD_PRED("noConflictingDates", return trialPredicates(net).noConflictingDates;),
      CHORD_PRED("noEjects", return trialPredicates(net).noEjects;),
      CHORD_PRED("sixConjunct", return holds(net, InvariantSet::TrialSix);),
      CHORD_PRED("eightConjunct", return holds(net, InvariantSet::TrialEight);),
      CHORD_PRED("admissibleBaseExists", return admissibleBaseExists(net);),
      CHORD_PRED("mustPreDate", return mustPreDate(net, need(node, p), need(other, p));),
      CHORD_PRED("skips", return skips(net, need(node, p), need(other, p));),
      CHORD_PRED("live", return net.isLive(need(node, p));),
      CHORD_PRED("isBase", return net.isBase(need(node, p));),
      CHORD_PRED("pred", return idJson(net.node(need(node, p)).pred);),
      CHORD_PRED("succ", {
        const auto& list = net.node(need(node, p)).succList;
        return list.empty() ? Json(nullptr) : Json(list.front().value());
      }),
      CHORD_PRED("succList", return idsJson(net.node(need(node, p)).succList);),
      CHORD_PRED("bestSuccessor", return idJson(bestSuccessor(net, need(node, p)));),
      CHORD_PRED("pendingNewSucc", return idJson(net.node(need(node, p)).pendingNewSucc);),
      CHORD_PRED("pendingCandidate", return idJson(net.node(need(node, p)).pendingCandidate);),
      CHORD_PRED("totalError", return totalError(net);),
      CHORD_PRED("memberError", return memberError(net, need(node, p));),
      CHORD_PRED("ringMembers", return idsJson(ringMembers(net));),
      CHORD_PRED("appendageMembers", return idsJson(structure(net).appendageMembers);),
      CHORD_PRED("liveMembers", return idsJson(net.liveMembers());),
  };
  return table;
}

#undef CHORD_PRED

}  // namespace

std::vector<std::string> predicateNames() {
  std::vector<std::string> out;
  for (const auto& [name, fn] : evaluators()) out.push_back(name);
  return out;
}

Json evaluatePredicate(const Network& net, const std::string& predicate,
                       const std::optional<Identifier>& node, const std::optional<Identifier>& other,
                       const ProtocolRules& rules) {
  for (const auto& [name, fn] : evaluators()) {
    if (name == predicate) return fn(net, predicate, node, other, rules);
  }
  throw std::invalid_argument("unknown predicate: " + predicate);
}

Json toJson(const Scenario& s) {
  Json script = Json::array();
  for (const Event& e : s.script) script.push_back(toJson(e));
  Json expectations = Json::array();
  for (const Expectation& x : s.expectations) {
    Json rec{{"step", x.step}, {"predicate", x.predicate}, {"expected", x.expected}};
    if (x.node) rec["node"] = x.node->value();
    if (x.other) rec["other"] = x.other->value();
    expectations.push_back(std::move(rec));
  }
  Json out{{"name", s.name},
           {"m", s.params.m},
           {"r", s.params.r},
           {"base", idsJson(s.base)},
           {"rules", toJson(s.rules)},
           {"script", std::move(script)},
           {"expectations", std::move(expectations)}};
  if (s.initialState) out["initialState"] = toJson(*s.initialState);
  return out;
}

Scenario scenarioFromJson(const Json& doc) {
  if (!doc.is_object()) throw ParseError("scenario must be a JSON object");
  Scenario s;
  try {
    s.name = doc.value("name", std::string());
    if (auto it = doc.find("initialState"); it != doc.end() && !it->is_null()) {
      s.initialState = networkFromJson(*it);
      s.params = s.initialState->params();
    }
    if (doc.contains("m")) s.params.m = doc.at("m").get<unsigned>();
    if (doc.contains("r")) s.params.r = doc.at("r").get<unsigned>();
    if (auto it = doc.find("base"); it != doc.end()) {
      for (const Json& v : *it) s.base.emplace_back(v.get<std::uint32_t>());
    }
    if (auto it = doc.find("rules"); it != doc.end()) s.rules = rulesFromJson(*it);
    if (auto it = doc.find("script"); it != doc.end()) {
      if (!it->is_array()) throw ParseError("field 'script' must be an array");
      for (const Json& e : *it) s.script.push_back(eventFromJson(e));
    }
    if (auto it = doc.find("expectations"); it != doc.end()) {
      if (!it->is_array()) throw ParseError("field 'expectations' must be an array");
      for (const Json& x : *it) {
        Expectation ex;
        ex.step = x.at("step").get<std::size_t>();
        ex.predicate = x.at("predicate").get<std::string>();
        ex.node = optionalId(x, "node");
        ex.other = optionalId(x, "other");
        ex.expected = x.at("expected");
        if (ex.step > s.script.size()) throw ParseError("expectation step beyond the script");
        s.expectations.push_back(std::move(ex));
      }
    }
  } catch (const Json::exception& e) {
    throw ParseError(std::string("scenario: ") + e.what());
  }
  if (s.initialState && !(s.initialState->params() == s.params)) {
    throw ParseError("scenario m/r disagree with the initial state");
  }
  return s;
}

Scenario parseScenario(std::string_view text) {
  Json doc;
  try {
    doc = Json::parse(text);
  } catch (const Json::parse_error& e) {
    throw ParseError(std::string("malformed JSON: ") + e.what());
  }
  return scenarioFromJson(doc);
}

namespace {

std::string readFile(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void checkExpectations(const Scenario& s, std::size_t step, const Network& net, ReplayReport& rep) {
  for (const Expectation& x : s.expectations) {
    if (x.step != step) continue;
    ++rep.expectationsChecked;
    std::string label = "step " + std::to_string(step) + " " + x.predicate;
    if (x.node) label += "(" + to_string(*x.node) + (x.other ? ", " + to_string(*x.other) : "") + ")";
    try {
      const Json got = evaluatePredicate(net, x.predicate, x.node, x.other, s.rules);
      if (got != x.expected) {
        rep.status = ReplayStatus::ExpectationFailed;
        rep.messages.push_back("FAIL " + label + ": expected " + x.expected.dump() + ", got " + got.dump());
      } else {
        rep.messages.push_back("ok   " + label + " = " + got.dump());
      }
    } catch (const std::exception& e) {
      rep.status = ReplayStatus::ExpectationFailed;
      rep.messages.push_back("FAIL " + label + ": " + e.what());
    }
  }
}

}  // namespace

Scenario loadScenario(const std::string& path) { return parseScenario(readFile(path)); }

ReplayReport replayScenario(const Scenario& s) {
  ReplayReport rep;
  Network init = [&]() -> Network {
    try {
      return s.initialNetwork();
    } catch (const std::invalid_argument& e) {
      throw ParseError(std::string("invalid initial network: ") + e.what());
    }
  }();
  rep.trace = traceOf(init, {}, s.rules);
  checkExpectations(s, 0, init, rep);
  for (std::size_t i = 0; i < s.script.size(); ++i) {
    const Event& e = s.script[i];
    const Network& cur = rep.trace->steps.empty() ? rep.trace->initial : rep.trace->steps.back().state;
    if (!isEnabled(cur, e, s.rules)) {
      rep.status = ReplayStatus::DisabledEvent;
      rep.failingState = cur;
      rep.messages.push_back("step " + std::to_string(i + 1) + ": event not enabled: " + to_string(e));
      rep.messages.push_back("state: " + dumpNetwork(cur));
      return rep;
    }
    Trace next = traceOf(cur, {e}, s.rules);
    TraceStep st = std::move(next.steps.front());
    st.step = i + 1;
    rep.trace->steps.push_back(std::move(st));
    rep.stepsApplied = i + 1;
    checkExpectations(s, i + 1, rep.trace->steps.back().state, rep);
  }
  return rep;
}

ReplayReport replayFile(const std::string& path) {
  ReplayReport rep;
  try {
    const std::string text = readFile(path);
    std::istringstream probe(text);
    std::string first;
    while (std::getline(probe, first) && first.empty()) {
    }
    bool isTrace = false;
    try {
      const Json head = Json::parse(first);
      isTrace = head.is_object() && head.value("type", std::string()) == "header";
    } catch (const Json::parse_error&) {
    }
    if (!isTrace) return replayScenario(parseScenario(text));
    std::istringstream in(text);
    try {
      rep.trace = readTrace(in);
      rep.stepsApplied = rep.trace->steps.size();
      rep.messages.push_back("trace replayed: " + std::to_string(rep.stepsApplied) + " steps match");
    } catch (const TraceMismatch& e) {
      rep.status = e.disabledEvent() ? ReplayStatus::DisabledEvent : ReplayStatus::ExpectationFailed;
      rep.messages.push_back(e.what());
    }
  } catch (const ParseError& e) {
    rep.status = ReplayStatus::ParseFailure;
    rep.messages.push_back(std::string("parse error: ") + e.what());
  } catch (const std::invalid_argument& e) {
    rep.status = ReplayStatus::ParseFailure;
    rep.messages.push_back(std::string("parse error: ") + e.what());
  }
  return rep;
}

namespace {

// Replays `events` from `state` and records the final value of each
// predicate that differs from its initial value, plus `always`.
std::vector<Expectation> observedOutcome(const Network& state, const std::vector<Event>& events,
                                         const ProtocolRules& rules,
                                         const std::vector<std::string>& always) {
  std::vector<Expectation> out;
  for (const std::string& p : always) out.push_back({0, p, {}, {}, evaluatePredicate(state, p, {}, {}, rules)});
  Network cur = state;
  for (const Event& e : events) {
    try {
      cur = applyEvent(cur, e, rules);
    } catch (const AssumptionBreach&) {
      return out;
    }
  }
  for (const std::string& p : always) {
    out.push_back({events.size(), p, {}, {}, evaluatePredicate(cur, p, {}, {}, rules)});
  }
  return out;
}

}  // namespace

Scenario scenarioFromViolation(const Violation& v, const ProtocolRules& rules, std::string name) {
  Scenario s;
  s.name = std::move(name);
  s.params = v.state.params();
  s.initialState = v.state;
  s.rules = rules;
  s.script = v.events;
  s.expectations = observedOutcome(v.state, v.events, rules,
                                   {"valid", "wellFormed", "ideal", "totalError"});
  return s;
}

Scenario scenarioFromCounterexample(const TrialCounterexample& c, InvariantSet trial, std::string name) {
  Scenario s;
  s.name = std::move(name);
  s.params = c.state.params();
  s.initialState = c.state;
  s.script = c.events;
  const char* set = trial == InvariantSet::TrialSix ? "sixConjunct"
                    : trial == InvariantSet::TrialEight ? "eightConjunct"
                                                        : "valid";
  s.expectations.push_back({0, set, {}, {}, true});
  s.expectations.push_back({c.events.size(), set, {}, {}, false});
  for (const std::string& b : c.broken) {
    if (b == "wellFormed") continue;
    s.expectations.push_back({c.events.size(), b, {}, {}, false});
  }
  return s;
}

Json toJson(const CheckReport& rep) {
  Json violations = Json::array();
  for (const Violation& v : rep.violations) {
    Json events = Json::array();
    for (const Event& e : v.events) events.push_back(toJson(e));
    violations.push_back({{"state", toJson(v.state)}, {"events", std::move(events)}, {"detail", v.detail}});
  }
  return Json{{"lemma", rep.lemma},
              {"passed", rep.passed()},
              {"statesChecked", rep.statesChecked},
              {"eventsChecked", rep.eventsChecked},
              {"violationCount", rep.violationCount},
              {"truncated", rep.truncated},
              {"bounds",
               {{"n", rep.bounds.maxNodes},
                {"r", rep.bounds.rValues},
                {"mode", rep.bounds.mode},
                {"seed", rep.bounds.seed},
                {"samples", rep.bounds.samples}}},
              {"violations", std::move(violations)}};
}

std::string exportDot(const Network& net) {
  std::ostringstream out;
  out << "digraph chord {\n  node [shape=circle];\n";
  for (const NodeState& ns : net.nodes()) {
    out << "  n" << ns.ident.value() << " [label=\"" << ns.ident.value() << "\"";
    if (!ns.live) out << ", style=dashed, color=gray";
    if (net.isBase(ns.ident)) out << ", peripheries=2";
    out << "];\n";
  }
  for (const NodeState& ns : net.nodes()) {
    if (!ns.live) continue;
    for (std::size_t i = 0; i < ns.succList.size(); ++i) {
      out << "  n" << ns.ident.value() << " -> n" << ns.succList[i].value() << " [style="
          << (i == 0 ? "solid" : "dashed") << ", label=\"" << (i + 1) << "\"];\n";
    }
    if (ns.pred) out << "  n" << ns.ident.value() << " -> n" << ns.pred->value() << " [style=dotted];\n";
  }
  out << "}\n";
  return out.str();
}

}  // namespace chord
