#include "chord/measure.hpp"

#include <stdexcept>

namespace chord {

std::size_t pointerError(const Network& net, Identifier n, PointerRole role, RankDirection dir) {
  const NodeState& ns = net.node(n);
  if (!ns.live) throw std::invalid_argument("pointerError: " + to_string(n) + " is not live");
  const std::size_t r = net.params().r;
  if (role > r) throw std::invalid_argument("pointerError: role out of range");
  const auto live = net.liveMembers();
  const std::size_t s = live.size();

  if (role == kPredRole || role == 1) {
    const std::optional<Identifier> target =
        role == kPredRole ? ns.pred
                          : (ns.succList.empty() ? std::nullopt
                                                 : std::optional<Identifier>(ns.succList.front()));
    if (!target) return s;
    if (!net.isLive(*target)) return s + 1;
    const std::size_t rank =
        role == kPredRole ? clockwiseRank(*target, n, live) : clockwiseRank(n, *target, live);
    if (dir == RankDirection::Clockwise || *target == n) return rank;
    return (s - 1 - rank) % (s - 1);
  }

  const std::size_t idx = role - 1;
  if (idx >= ns.succList.size()) return 1;
  const Identifier head = ns.succList.front();
  if (!net.isLive(head)) return 1;
  const SuccList& headList = net.node(head).succList;
  if (idx - 1 >= headList.size()) return 1;
  return ns.succList[idx] == headList[idx - 1] ? 0 : 1;
}

std::size_t memberError(const Network& net, Identifier n, RankDirection dir) {
  std::size_t sum = 0;
  for (PointerRole role = 0; role <= net.params().r; ++role) sum += pointerError(net, n, role, dir);
  return sum;
}

ErrorReport errorReport(const Network& net, RankDirection dir) {
  ErrorReport rep;
  for (Identifier n : net.liveMembers()) {
    for (PointerRole role = 0; role <= net.params().r; ++role) {
      const std::size_t e = pointerError(net, n, role, dir);
      rep.perPointer[{n, role}] = e;
      rep.total += e;
    }
  }
  return rep;
}

std::size_t totalError(const Network& net, RankDirection dir) {
  std::size_t sum = 0;
  for (Identifier n : net.liveMembers()) sum += memberError(net, n, dir);
  return sum;
}

std::vector<Event> effectiveEnabled(const Network& net, const ProtocolRules& rules) {
  std::vector<Event> out;
  for (const Event& e : enabledRepairEvents(net, rules)) {
    const Network after = applyEvent(net, e, rules);
    if (!samePointers(net.node(e.node), after.node(e.node))) out.push_back(e);
  }
  return out;
}

bool networkIsImprovable(const Network& net, const ProtocolRules& rules) {
  return !effectiveEnabled(net, rules).empty();
}

}  // namespace chord
