#include "chord/invariants.hpp"

#include <algorithm>
#include <stdexcept>

#include "chord/topology.hpp"

namespace chord {

namespace {

bool contains(const std::vector<Identifier>& sorted, Identifier id) {
  return std::binary_search(sorted.begin(), sorted.end(), id);
}

bool skipsInList(const SuccList& ext, Identifier n2) {
  for (std::size_t i = 0; i + 1 < ext.size(); ++i) {
    if (between(ext[i], n2, ext[i + 1])) return true;
  }
  return false;
}

// Best-successor chain from `start` visits some member satisfying `pred`.
template <typename Pred>
bool chainReaches(const Network& net, Identifier start, std::size_t bound, Pred pred) {
  Identifier cur = start;
  for (std::size_t step = 0; step < bound; ++step) {
    auto next = bestSuccessor(net, cur);
    if (!next) return false;
    if (pred(*next)) return true;
    cur = *next;
  }
  return false;
}

}  // namespace

bool skips(const Network& net, Identifier n, Identifier n2) {
  return skipsInList(extendedSuccList(net, n), n2);
}

ConjunctReport conjuncts(const Network& net) {
  ConjunctReport rep;
  const StructureReport st = structure(net);
  const std::size_t bound = net.liveCount();

  rep.atLeastOneRing = !st.ringMembers.empty();

  rep.atMostOneRing = true;
  for (Identifier x : st.ringMembers) {
    std::vector<Identifier> seen;
    Identifier cur = x;
    for (std::size_t step = 0; step < bound; ++step) {
      cur = *bestSuccessor(net, cur);
      seen.push_back(cur);
      if (cur == x) break;
    }
    std::sort(seen.begin(), seen.end());
    if (seen != st.ringMembers) {
      rep.atMostOneRing = false;
      break;
    }
  }

  rep.orderedRing = st.orderedRing;

  rep.connectedAppendages = true;
  for (Identifier a : st.appendageMembers) {
    if (!chainReaches(net, a, bound, [&](Identifier v) { return contains(st.ringMembers, v); })) {
      rep.connectedAppendages = false;
      break;
    }
  }

  rep.baseNotSkipped = true;
  for (const NodeState& ns : net.nodes()) {
    if (!ns.live) continue;
    const SuccList ext = extendedSuccList(net, ns.ident);
    for (Identifier b : net.base()) {
      if (skipsInList(ext, b)) {
        rep.baseNotSkipped = false;
        break;
      }
    }
    if (!rep.baseNotSkipped) break;
  }

  rep.valid = rep.atLeastOneRing && rep.atMostOneRing && rep.orderedRing &&
              rep.connectedAppendages && rep.baseNotSkipped;
  return rep;
}

ListProperties listProperties(const Network& net, Identifier n) {
  SuccList ext = extendedSuccList(net, n);
  ListProperties props;
  props.orderedSuccessorLists = true;
  for (std::size_t i = 0; i + 2 < ext.size(); ++i) {
    if (!between(ext[i], ext[i + 1], ext[i + 2])) props.orderedSuccessorLists = false;
  }
  std::sort(ext.begin(), ext.end());
  props.noDuplicates = std::adjacent_find(ext.begin(), ext.end()) == ext.end();
  return props;
}

bool mustPreDate(const Network& net, Identifier n1, Identifier n2) {
  const auto ring = ringMembers(net);
  if (!contains(ring, n1) || !contains(ring, n2)) return false;
  for (Identifier n3 : ring) {
    const SuccList ext = extendedSuccList(net, n3);
    if (std::find(ext.begin(), ext.end(), n1) != ext.end() && skipsInList(ext, n2)) return true;
  }
  return false;
}

TrialPredicates trialPredicates(const Network& net) {
  TrialPredicates tp;
  const StructureReport st = structure(net);
  const auto& ring = st.ringMembers;

  // preDates[i][j]: ring[i] must pre-date ring[j].
  const std::size_t k = ring.size();
  std::vector<SuccList> ext;
  ext.reserve(k);
  for (Identifier x : ring) ext.push_back(extendedSuccList(net, x));
  std::vector<char> preDates(k * k, 0);
  for (std::size_t c = 0; c < k; ++c) {
    for (std::size_t j = 0; j < k; ++j) {
      if (!skipsInList(ext[c], ring[j])) continue;
      for (std::size_t i = 0; i < k; ++i) {
        if (std::find(ext[c].begin(), ext[c].end(), ring[i]) != ext[c].end()) {
          preDates[i * k + j] = 1;
        }
      }
    }
  }
  tp.noConflictingDates = true;
  for (std::size_t i = 0; i < k && tp.noConflictingDates; ++i) {
    for (std::size_t j = i + 1; j < k; ++j) {
      if (preDates[i * k + j] && preDates[j * k + i]) {
        tp.noConflictingDates = false;
        break;
      }
    }
  }

  tp.noEjects = true;
  for (Identifier x : ring) {
    for (Identifier s : net.node(x).succList) {
      if (contains(st.appendageMembers, s)) tp.noEjects = false;
    }
  }
  return tp;
}

std::string_view to_string(InvariantSet set) {
  switch (set) {
    case InvariantSet::Valid:
      return "valid";
    case InvariantSet::TrialSix:
      return "six-conjunct";
    case InvariantSet::TrialEight:
      return "eight-conjunct";
  }
  return "?";
}

InvariantSet invariantSetFromString(std::string_view name) {
  if (name == "valid") return InvariantSet::Valid;
  if (name == "six-conjunct" || name == "six") return InvariantSet::TrialSix;
  if (name == "eight-conjunct" || name == "eight") return InvariantSet::TrialEight;
  throw std::invalid_argument("unknown invariant set: " + std::string(name));
}

std::vector<std::string> brokenConjuncts(const Network& net, InvariantSet set) {
  std::vector<std::string> broken;
  const ConjunctReport c = conjuncts(net);
  if (!c.atLeastOneRing) broken.emplace_back("atLeastOneRing");
  if (!c.atMostOneRing) broken.emplace_back("atMostOneRing");
  if (!c.orderedRing) broken.emplace_back("orderedRing");
  if (!c.connectedAppendages) broken.emplace_back("connectedAppendages");
  if (set == InvariantSet::Valid) {
    if (!c.baseNotSkipped) broken.emplace_back("baseNotSkipped");
    return broken;
  }
  bool noDup = true;
  bool ordered = true;
  for (const NodeState& ns : net.nodes()) {
    if (!ns.live) continue;
    const ListProperties lp = listProperties(net, ns.ident);
    noDup = noDup && lp.noDuplicates;
    ordered = ordered && lp.orderedSuccessorLists;
  }
  if (!noDup) broken.emplace_back("noDuplicates");
  if (!ordered) broken.emplace_back("orderedSuccessorLists");
  if (set == InvariantSet::TrialEight) {
    const TrialPredicates tp = trialPredicates(net);
    if (!tp.noConflictingDates) broken.emplace_back("noConflictingDates");
    if (!tp.noEjects) broken.emplace_back("noEjects");
  }
  return broken;
}

}  // namespace chord
