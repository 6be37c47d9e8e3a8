#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "chord/checker.hpp"
#include "chord/measure.hpp"
#include "chord/scenario.hpp"
#include "chord/serialize.hpp"
#include "chord/sim.hpp"
#include "chord/topology.hpp"

namespace py = pybind11;
using namespace chord;

// Networks, events and reports cross the boundary as JSON text; the Python
// package decodes them.
namespace {

Network net(const std::string& text) { return parseNetwork(text); }

ProtocolRules rules(const std::string& text) {
  return text.empty() ? ProtocolRules{} : rulesFromJson(Json::parse(text));
}

std::string initNetworkJson(const std::vector<std::uint32_t>& base, unsigned m, unsigned r) {
  RingParams p;
  p.m = m;
  p.r = r;
  std::vector<Identifier> ids(base.begin(), base.end());
  return dumpNetwork(initNetwork(p, ids));
}

std::string enabledEventsJson(const std::string& n, const std::vector<std::uint32_t>& joiners,
                              const std::string& r) {
  std::vector<Identifier> extra(joiners.begin(), joiners.end());
  Json out = Json::array();
  for (const Event& e : enabledEvents(net(n), rules(r), extra)) out.push_back(toJson(e));
  return out.dump();
}

std::string applyEventJson(const std::string& n, const std::string& e, const std::string& r) {
  return dumpNetwork(applyEvent(net(n), eventFromJson(Json::parse(e)), rules(r)));
}

std::string stateReportJson(const std::string& n) {
  const Network x = net(n);
  Json out = toJson(conjuncts(x));
  out["wellFormed"] = x.wellFormed();
  out["ideal"] = isIdeal(x);
  out["totalError"] = totalError(x);
  out["structure"] = toJson(structure(x));
  return out.dump();
}

std::string checkJson(const std::string& lemma, std::size_t n, std::vector<unsigned> rs, const std::string& mode,
                      std::size_t samples, std::uint64_t seed) {
  const auto run = [&](const StateSource& src) {
    if (lemma == "preservation") {
      return checkPreservation(src, {EventKind::JoinLookup, EventKind::Join, EventKind::StabilizeFromOldSuccessor,
                                     EventKind::StabilizeFromNewSuccessor, EventKind::Rectify, EventKind::Fail});
    }
    if (lemma == "progress") return checkProgress(src);
    if (lemma == "monotonicity") return checkMonotonicity(src);
    if (lemma == "executor-monotonicity") return checkExecutorMonotonicity(src);
    if (lemma == "error-zero") return checkErrorZeroIffIdeal(src);
    if (lemma == "implications") return checkImplications(src);
    throw std::invalid_argument("unknown lemma: " + lemma);
  };
  if (rs.empty()) throw std::invalid_argument("r list is empty");
  CheckReport rep;
  if (mode == "random") {
    SamplingOptions opt;
    opt.rValues = rs;
    opt.maxNodes = n;
    rep = run(sampledSource(opt, samples, seed));
  } else if (mode == "exhaustive") {
    for (std::size_t i = 0; i < rs.size(); ++i) {
      RingParams p;
      p.r = rs[i];
      const CheckReport one = run(exhaustiveSource(p, n));
      if (i == 0) {
        rep = one;
      } else {
        rep.merge(one);
      }
    }
  } else {
    throw std::invalid_argument("unknown mode: " + mode);
  }
  return toJson(rep).dump();
}

py::dict simulate(unsigned r, std::size_t churnSteps, std::uint64_t seed, std::size_t maxNodes) {
  SimConfig c;
  c.params.r = r;
  c.churnSteps = churnSteps;
  c.seed = seed;
  c.maxNodes = maxNodes;
  const Trace t = runSimulation(c);
  std::ostringstream out;
  writeTrace(out, t, 0);
  py::dict d;
  d["steps"] = t.steps.size();
  d["ideal"] = !t.steps.empty() && t.steps.back().ideal;
  d["convergence_steps"] = convergenceSteps(t);
  d["initial_repair_error"] = repairPhaseInitialError(t);
  d["final"] = dumpNetwork(t.steps.empty() ? t.initial : t.steps.back().state);
  d["trace"] = out.str();
  return d;
}

py::tuple replay(const std::string& path) {
  const ReplayReport rep = replayFile(path);
  return py::make_tuple(static_cast<int>(rep.status), rep.messages);
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Chord ring-maintenance model checker";
  m.def("init_network", &initNetworkJson, py::arg("base"), py::arg("m") = 6, py::arg("r") = 2);
  m.def("enabled_events", &enabledEventsJson, py::arg("net"), py::arg("joiners") = std::vector<std::uint32_t>{},
        py::arg("rules") = "");
  m.def("apply_event", &applyEventJson, py::arg("net"), py::arg("event"), py::arg("rules") = "");
  m.def("state_report", &stateReportJson, py::arg("net"));
  m.def("export_dot", [](const std::string& n) { return exportDot(net(n)); }, py::arg("net"));
  m.def("check", &checkJson, py::arg("lemma"), py::arg("n") = 4, py::arg("r") = std::vector<unsigned>{2},
        py::arg("mode") = "exhaustive", py::arg("samples") = 1000, py::arg("seed") = 1);
  m.def("simulate", &simulate, py::arg("r") = 2, py::arg("churn_steps") = 100, py::arg("seed") = 1,
        py::arg("max_nodes") = 20);
  m.def("replay", &replay, py::arg("path"));

  py::register_exception<ParseError>(m, "ParseError", PyExc_ValueError);
  py::register_exception<EventNotEnabled>(m, "EventNotEnabled", PyExc_ValueError);
  py::register_exception<AssumptionBreach>(m, "AssumptionBreach", PyExc_RuntimeError);
}
