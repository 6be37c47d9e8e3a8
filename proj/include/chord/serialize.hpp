#pragma once

#include <string>
#include <string_view>

#include "json.hpp"

#include "chord/events.hpp"
#include "chord/invariants.hpp"
#include "chord/network.hpp"
#include "chord/topology.hpp"

namespace chord {

using Json = nlohmann::json;

/// Thrown for documents that do not describe a well-formed object.
class ParseError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Network document: {m, r, base, nodes: [{ident, live, pred, succList,
// known, pendingNewSucc, pendingCandidate}]}. Absent pointers are null.
Json toJson(const Network& net);
Network networkFromJson(const Json& doc);

// Event record: {kind, node, newPred?, known?}.
Json toJson(const Event& e);
Event eventFromJson(const Json& doc);

Json toJson(const ProtocolRules& rules);
ProtocolRules rulesFromJson(const Json& doc);

Json toJson(const ConjunctReport& rep);
Json toJson(const StructureReport& rep);

/// Canonical single-line text; identical networks give identical text.
std::string dumpNetwork(const Network& net);
Network parseNetwork(std::string_view text);

}  // namespace chord
