#include "chord/network.hpp"

#include <algorithm>

namespace chord {

bool samePointers(const NodeState& a, const NodeState& b) {
  return a.ident == b.ident && a.live == b.live && a.pred == b.pred &&
         a.succList == b.succList;
}

UnknownNode::UnknownNode(Identifier id)
    : std::out_of_range("no node entry for identifier " + to_string(id)) {}

Network::Network(RingParams params, std::vector<Identifier> base,
                 std::vector<NodeState> nodes)
    : params_(params), base_(std::move(base)), nodes_(std::move(nodes)) {
  std::sort(base_.begin(), base_.end());
  std::sort(nodes_.begin(), nodes_.end(),
            [](const NodeState& a, const NodeState& b) { return a.ident < b.ident; });
  validate();
}

void Network::validate() const {
  params_.validate();
  for (std::size_t i = 0; i < nodes_.size(); ++i) {
    if (!params_.contains(nodes_[i].ident)) {
      throw std::invalid_argument("identifier out of range: " + to_string(nodes_[i].ident));
    }
    if (i > 0 && nodes_[i - 1].ident == nodes_[i].ident) {
      throw std::invalid_argument("duplicate node identifier " + to_string(nodes_[i].ident));
    }
  }
  const auto requireKnown = [&](const std::optional<Identifier>& ref, const char* what) {
    if (ref && find(*ref) == nullptr) {
      throw std::invalid_argument(std::string(what) + " refers to unknown identifier " +
                                  to_string(*ref));
    }
  };
  for (const NodeState& ns : nodes_) {
    requireKnown(ns.pred, "pred");
    requireKnown(ns.known, "known");
    requireKnown(ns.pendingNewSucc, "pendingNewSucc");
    requireKnown(ns.pendingCandidate, "pendingCandidate");
    for (Identifier s : ns.succList) requireKnown(s, "succList entry");
  }
  if (!base_.empty() && base_.size() != params_.r + 1) {
    throw std::invalid_argument("stable base must be empty or hold r + 1 members");
  }
  for (std::size_t i = 0; i < base_.size(); ++i) {
    if (i > 0 && base_[i - 1] == base_[i]) {
      throw std::invalid_argument("duplicate base identifier " + to_string(base_[i]));
    }
    if (!isLive(base_[i])) {
      throw std::invalid_argument("base member " + to_string(base_[i]) + " is not live");
    }
  }
}

bool Network::isBase(Identifier id) const {
  return std::binary_search(base_.begin(), base_.end(), id);
}

const NodeState* Network::find(Identifier id) const {
  auto it = std::lower_bound(nodes_.begin(), nodes_.end(), id,
                             [](const NodeState& ns, Identifier v) { return ns.ident < v; });
  if (it == nodes_.end() || it->ident != id) return nullptr;
  return &*it;
}

const NodeState& Network::node(Identifier id) const {
  const NodeState* ns = find(id);
  if (ns == nullptr) throw UnknownNode(id);
  return *ns;
}

bool Network::isLive(Identifier id) const {
  const NodeState* ns = find(id);
  return ns != nullptr && ns->live;
}

std::vector<Identifier> Network::liveMembers() const {
  std::vector<Identifier> out;
  out.reserve(nodes_.size());
  for (const NodeState& ns : nodes_) {
    if (ns.live) out.push_back(ns.ident);
  }
  return out;
}

std::size_t Network::liveCount() const {
  return static_cast<std::size_t>(
      std::count_if(nodes_.begin(), nodes_.end(), [](const NodeState& ns) { return ns.live; }));
}

bool Network::wellFormed() const {
  return std::all_of(nodes_.begin(), nodes_.end(), [&](const NodeState& ns) {
    return !ns.live || ns.succList.size() == params_.r;
  });
}

Network Network::withNode(NodeState state) const {
  Network out = *this;
  auto it = std::lower_bound(out.nodes_.begin(), out.nodes_.end(), state.ident,
                             [](const NodeState& ns, Identifier v) { return ns.ident < v; });
  if (it != out.nodes_.end() && it->ident == state.ident) {
    *it = std::move(state);
  } else {
    if (!params_.contains(state.ident)) {
      throw std::invalid_argument("identifier out of range: " + to_string(state.ident));
    }
    out.nodes_.insert(it, std::move(state));
  }
  return out;
}

Network Network::withBase(std::vector<Identifier> base) const {
  return Network(params_, std::move(base), nodes_);
}

Network initNetwork(const RingParams& params, std::vector<Identifier> baseIds) {
  params.validate();
  if (baseIds.size() != params.r + 1) {
    throw std::invalid_argument("initial ring must hold exactly r + 1 = " +
                                std::to_string(params.r + 1) + " members, got " +
                                std::to_string(baseIds.size()));
  }
  std::sort(baseIds.begin(), baseIds.end());
  if (std::adjacent_find(baseIds.begin(), baseIds.end()) != baseIds.end()) {
    throw std::invalid_argument("initial ring identifiers must be distinct");
  }
  const std::size_t count = baseIds.size();
  std::vector<NodeState> nodes;
  nodes.reserve(count);
  for (std::size_t i = 0; i < count; ++i) {
    NodeState ns;
    ns.ident = baseIds[i];
    ns.live = true;
    ns.pred = baseIds[(i + count - 1) % count];
    for (std::size_t k = 1; k <= params.r; ++k) {
      ns.succList.push_back(baseIds[(i + k) % count]);
    }
    nodes.push_back(std::move(ns));
  }
  return Network(params, baseIds, std::move(nodes));
}

SuccList extendedSuccList(const Network& net, Identifier n) {
  const NodeState& ns = net.node(n);
  if (!ns.live) {
    throw std::invalid_argument("extendedSuccList: " + to_string(n) + " is not live");
  }
  SuccList out;
  out.reserve(ns.succList.size() + 1);
  out.push_back(n);
  out.insert(out.end(), ns.succList.begin(), ns.succList.end());
  return out;
}

bool isLive(const Network& net, Identifier n) { return net.isLive(n); }

}  // namespace chord
