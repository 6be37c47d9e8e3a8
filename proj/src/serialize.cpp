#include "chord/serialize.hpp"

namespace chord {

namespace {

Json optionalId(const std::optional<Identifier>& id) {
  return id ? Json(id->value()) : Json(nullptr);
}

Identifier idFrom(const Json& v, const char* field) {
  if (!v.is_number_unsigned()) {
    throw ParseError(std::string("field '") + field + "' must be a non-negative integer");
  }
  return Identifier(v.get<std::uint32_t>());
}

std::optional<Identifier> optionalIdFrom(const Json& obj, const char* field) {
  auto it = obj.find(field);
  if (it == obj.end() || it->is_null()) return std::nullopt;
  return idFrom(*it, field);
}

const Json& require(const Json& obj, const char* field) {
  if (!obj.is_object()) throw ParseError("expected a JSON object");
  auto it = obj.find(field);
  if (it == obj.end()) throw ParseError(std::string("missing field '") + field + "'");
  return *it;
}

std::vector<Identifier> idArray(const Json& v, const char* field) {
  if (!v.is_array()) throw ParseError(std::string("field '") + field + "' must be an array");
  std::vector<Identifier> out;
  for (const Json& x : v) out.push_back(idFrom(x, field));
  return out;
}

Json idArrayJson(std::span<const Identifier> ids) {
  Json arr = Json::array();
  for (Identifier id : ids) arr.push_back(id.value());
  return arr;
}

}  // namespace

Json toJson(const Network& net) {
  Json nodes = Json::array();
  for (const NodeState& ns : net.nodes()) {
    nodes.push_back({
        {"ident", ns.ident.value()},
        {"live", ns.live},
        {"pred", optionalId(ns.pred)},
        {"succList", idArrayJson(ns.succList)},
        {"known", optionalId(ns.known)},
        {"pendingNewSucc", optionalId(ns.pendingNewSucc)},
        {"pendingCandidate", optionalId(ns.pendingCandidate)},
    });
  }
  return Json{{"m", net.params().m},
              {"r", net.params().r},
              {"base", idArrayJson(net.base())},
              {"nodes", std::move(nodes)}};
}

Network networkFromJson(const Json& doc) {
  RingParams params;
  const Json& m = require(doc, "m");
  const Json& r = require(doc, "r");
  if (!m.is_number_unsigned() || !r.is_number_unsigned()) throw ParseError("m and r must be integers");
  params.m = m.get<unsigned>();
  params.r = r.get<unsigned>();
  std::vector<NodeState> nodes;
  const Json& arr = require(doc, "nodes");
  if (!arr.is_array()) throw ParseError("field 'nodes' must be an array");
  for (const Json& n : arr) {
    NodeState ns;
    ns.ident = idFrom(require(n, "ident"), "ident");
    const Json& live = require(n, "live");
    if (!live.is_boolean()) throw ParseError("field 'live' must be a boolean");
    ns.live = live.get<bool>();
    ns.pred = optionalIdFrom(n, "pred");
    ns.succList = idArray(require(n, "succList"), "succList");
    ns.known = optionalIdFrom(n, "known");
    ns.pendingNewSucc = optionalIdFrom(n, "pendingNewSucc");
    ns.pendingCandidate = optionalIdFrom(n, "pendingCandidate");
    nodes.push_back(std::move(ns));
  }
  try {
    return Network(params, idArray(require(doc, "base"), "base"), std::move(nodes));
  } catch (const std::invalid_argument& e) {
    throw ParseError(std::string("invalid network: ") + e.what());
  }
}

Json toJson(const Event& e) {
  Json out{{"kind", std::string(to_string(e.kind))}, {"node", e.node.value()}};
  if (e.newPred) out["newPred"] = e.newPred->value();
  if (e.known) out["known"] = e.known->value();
  return out;
}

Event eventFromJson(const Json& doc) {
  const Json& kind = require(doc, "kind");
  if (!kind.is_string()) throw ParseError("field 'kind' must be a string");
  Event e;
  try {
    e.kind = eventKindFromString(kind.get<std::string>());
  } catch (const std::invalid_argument& ex) {
    throw ParseError(ex.what());
  }
  e.node = idFrom(require(doc, "node"), "node");
  e.newPred = optionalIdFrom(doc, "newPred");
  e.known = optionalIdFrom(doc, "known");
  if (e.kind == EventKind::Rectify && !e.newPred) throw ParseError("Rectify requires newPred");
  if (e.kind == EventKind::JoinLookup && !e.known) throw ParseError("JoinLookup requires known");
  return e;
}

Json toJson(const ProtocolRules& rules) {
  return Json{{"failGuard", rules.failGuard},
              {"liveCheckBeforeAdoption", rules.liveCheckBeforeAdoption},
              {"fullJoinLists", rules.fullJoinLists}};
}

ProtocolRules rulesFromJson(const Json& doc) {
  ProtocolRules rules;
  if (!doc.is_object()) throw ParseError("rules must be an object");
  const auto flag = [&](const char* name, bool& target) {
    auto it = doc.find(name);
    if (it == doc.end()) return;
    if (!it->is_boolean()) throw ParseError(std::string("rule '") + name + "' must be a boolean");
    target = it->get<bool>();
  };
  flag("failGuard", rules.failGuard);
  flag("liveCheckBeforeAdoption", rules.liveCheckBeforeAdoption);
  flag("fullJoinLists", rules.fullJoinLists);
  return rules;
}

Json toJson(const ConjunctReport& rep) {
  return Json{{"atLeastOneRing", rep.atLeastOneRing},
              {"atMostOneRing", rep.atMostOneRing},
              {"orderedRing", rep.orderedRing},
              {"connectedAppendages", rep.connectedAppendages},
              {"baseNotSkipped", rep.baseNotSkipped},
              {"valid", rep.valid}};
}

Json toJson(const StructureReport& rep) {
  return Json{{"ringMembers", idArrayJson(rep.ringMembers)},
              {"appendageMembers", idArrayJson(rep.appendageMembers)},
              {"orderedRing", rep.orderedRing}};
}

std::string dumpNetwork(const Network& net) { return toJson(net).dump(); }

Network parseNetwork(std::string_view text) {
  Json doc;
  try {
    doc = Json::parse(text);
  } catch (const Json::parse_error& e) {
    throw ParseError(std::string("malformed JSON: ") + e.what());
  }
  return networkFromJson(doc);
}

}  // namespace chord
