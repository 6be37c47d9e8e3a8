#pragma once

#include <optional>
#include <span>
#include <stdexcept>
#include <vector>

#include "chord/ident.hpp"

namespace chord {

using SuccList = std::vector<Identifier>;

/// Protocol variables of one node. Entries for failed nodes are kept so
/// that obsolete references stay resolvable; they are never queried.
struct NodeState {
  Identifier ident;
  bool live = false;
  std::optional<Identifier> pred;
  SuccList succList;
  std::optional<Identifier> known;
  // JoinLookup result awaiting the Join event.
  std::optional<Identifier> pendingNewSucc;
  // Improved-successor candidate learned by the last stabilize query.
  std::optional<Identifier> pendingCandidate;

  friend bool operator==(const NodeState&, const NodeState&) = default;
};

/// True when the ring-maintenance pointers (liveness, pred, succList) of
/// two states agree. Transient join/stabilize bookkeeping is ignored.
bool samePointers(const NodeState& a, const NodeState& b);

class UnknownNode : public std::out_of_range {
 public:
  explicit UnknownNode(Identifier id);
};

/// One immutable snapshot of a Chord network: the node table (live and
/// previously live identifiers), the stable base, and the ring parameters.
class Network {
 public:
  /// Validates parameters, identifier ranges, uniqueness, that every
  /// referenced identifier has a node entry, and that base members are
  /// live. The base is either empty (no stable base) or of size r + 1.
  /// Empty node table with default parameters.
  Network() = default;

  Network(RingParams params, std::vector<Identifier> base,
          std::vector<NodeState> nodes);

  const RingParams& params() const { return params_; }
  std::span<const Identifier> base() const { return base_; }
  bool isBase(Identifier id) const;

  /// All node entries, sorted by identifier value.
  std::span<const NodeState> nodes() const { return nodes_; }
  const NodeState* find(Identifier id) const;
  /// Throws UnknownNode if the identifier has no entry.
  const NodeState& node(Identifier id) const;

  bool isLive(Identifier id) const;
  std::vector<Identifier> liveMembers() const;
  std::size_t liveCount() const;

  /// Live members all hold exactly r successor entries.
  bool wellFormed() const;

  /// Copy of this network with one node entry inserted or replaced.
  Network withNode(NodeState state) const;
  Network withBase(std::vector<Identifier> base) const;

  friend bool operator==(const Network&, const Network&) = default;

 private:
  void validate() const;

  RingParams params_;
  std::vector<Identifier> base_;
  std::vector<NodeState> nodes_;
};

/// Ideal ring over exactly r + 1 distinct base identifiers.
Network initNetwork(const RingParams& params, std::vector<Identifier> baseIds);

/// The member itself followed by its successor list (length r + 1).
SuccList extendedSuccList(const Network& net, Identifier n);

bool isLive(const Network& net, Identifier n);

}  // namespace chord
