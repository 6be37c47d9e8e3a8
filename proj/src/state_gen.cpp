#include <algorithm>
#include <stdexcept>

#include "chord/checker.hpp"
#include "chord/invariants.hpp"

namespace chord {

namespace {

// A network over positions 0..N-1 of a fixed universe. kNone marks an
// absent pointer.
struct PositionalState {
  static constexpr std::uint8_t kNone = 0xff;
  std::size_t count = 0;
  std::vector<std::uint8_t> live;
  std::vector<std::uint8_t> base;
  std::vector<std::uint8_t> pred;
  std::vector<std::vector<std::uint8_t>> lists;
};

std::vector<std::uint8_t> rotationKey(const PositionalState& st, std::size_t k) {
  const std::size_t n = st.count;
  const auto map = [&](std::uint8_t x) -> std::uint8_t {
    return x == PositionalState::kNone ? x : static_cast<std::uint8_t>((x + k) % n);
  };
  std::vector<std::uint8_t> key;
  key.reserve(n * (3 + st.lists[0].size()));
  for (std::size_t q = 0; q < n; ++q) {
    const std::size_t p = (q + n - k) % n;
    key.push_back(st.live[p]);
    key.push_back(st.base[p]);
    key.push_back(map(st.pred[p]));
    for (std::uint8_t e : st.lists[p]) key.push_back(map(e));
  }
  return key;
}

bool isCanonical(const PositionalState& st) {
  const auto key = rotationKey(st, 0);
  for (std::size_t k = 1; k < st.count; ++k) {
    if (rotationKey(st, k) < key) return false;
  }
  return true;
}

Network toNetwork(const RingParams& params, const std::vector<Identifier>& ids,
                  const PositionalState& st) {
  std::vector<NodeState> nodes;
  std::vector<Identifier> base;
  nodes.reserve(st.count);
  for (std::size_t p = 0; p < st.count; ++p) {
    NodeState ns;
    ns.ident = ids[p];
    ns.live = st.live[p] != 0;
    if (st.pred[p] != PositionalState::kNone) ns.pred = ids[st.pred[p]];
    for (std::uint8_t e : st.lists[p]) ns.succList.push_back(ids[e]);
    nodes.push_back(std::move(ns));
    if (st.base[p]) base.push_back(ids[p]);
  }
  return Network(params, std::move(base), std::move(nodes));
}

// All r-tuples over 0..n-1.
std::vector<std::vector<std::uint8_t>> allTuples(std::size_t n, unsigned r) {
  std::vector<std::vector<std::uint8_t>> out;
  std::vector<std::uint8_t> cur(r, 0);
  while (true) {
    out.push_back(cur);
    std::size_t i = 0;
    while (i < r && ++cur[i] == n) cur[i++] = 0;
    if (i == r) break;
  }
  return out;
}

bool skipsBase(const std::vector<Identifier>& ids, std::uint8_t self,
               const std::vector<std::uint8_t>& list, const std::vector<std::uint8_t>& baseMask) {
  std::uint8_t prev = self;
  for (std::uint8_t e : list) {
    for (std::size_t b = 0; b < ids.size(); ++b) {
      if (baseMask[b] && between(ids[prev], ids[b], ids[e])) return true;
    }
    prev = e;
  }
  return false;
}

void enumerateUniverse(const RingParams& params, std::size_t count, const StateVisitor& visit,
                       const EnumerationOptions& options) {
  const auto ids = universeIds(params, count);
  const unsigned r = params.r;
  const auto tuples = allTuples(count, r);

  for (std::uint32_t liveMask = 0; liveMask < (1u << count); ++liveMask) {
    if (static_cast<std::size_t>(__builtin_popcount(liveMask)) < r + 1) continue;
    for (std::uint32_t baseMask = liveMask;; baseMask = (baseMask - 1) & liveMask) {
      if (static_cast<unsigned>(__builtin_popcount(baseMask)) == r + 1) {
        PositionalState st;
        st.count = count;
        st.live.resize(count);
        st.base.resize(count);
        st.pred.assign(count, PositionalState::kNone);
        st.lists.assign(count, {});
        std::vector<std::size_t> livePos;
        std::vector<std::size_t> deadPos;
        for (std::size_t p = 0; p < count; ++p) {
          st.live[p] = (liveMask >> p) & 1u;
          st.base[p] = (baseMask >> p) & 1u;
          (st.live[p] ? livePos : deadPos).push_back(p);
        }

        // Local filter: BaseNotSkipped is a per-list condition.
        std::vector<std::vector<std::size_t>> candidates(count);
        for (std::size_t p : livePos) {
          for (std::size_t t = 0; t < tuples.size(); ++t) {
            const auto& list = tuples[t];
            const bool anyLive = std::any_of(list.begin(), list.end(),
                                             [&](std::uint8_t e) { return st.live[e] != 0; });
            if (anyLive && !skipsBase(ids, static_cast<std::uint8_t>(p), list, st.base)) {
              candidates[p].push_back(t);
            }
          }
        }

        // Odometer over live lists, then dead lists, then live preds.
        std::vector<std::size_t> liveChoice(livePos.size(), 0);
        bool liveDone = livePos.empty();
        for (std::size_t p : livePos) liveDone = liveDone || candidates[p].empty();
        while (!liveDone) {
          for (std::size_t i = 0; i < livePos.size(); ++i) {
            st.lists[livePos[i]] = tuples[candidates[livePos[i]][liveChoice[i]]];
          }
          for (std::size_t p : deadPos) st.lists[p] = tuples[0];
          std::fill(st.pred.begin(), st.pred.end(), PositionalState::kNone);
          if (conjuncts(toNetwork(params, ids, st)).valid) {
            std::vector<std::size_t> deadChoice(deadPos.size(), 0);
            while (true) {
              for (std::size_t i = 0; i < deadPos.size(); ++i) st.lists[deadPos[i]] = tuples[deadChoice[i]];
              // pred choice index 0 is Null, 1..count-1 the other positions.
              std::vector<std::size_t> predChoice(livePos.size(), 0);
              while (true) {
                for (std::size_t i = 0; i < livePos.size(); ++i) {
                  const std::size_t p = livePos[i];
                  st.pred[p] = predChoice[i] == 0
                                   ? PositionalState::kNone
                                   : static_cast<std::uint8_t>((p + predChoice[i]) % count);
                }
                if (!options.symmetryReduction || isCanonical(st)) visit(toNetwork(params, ids, st));
                std::size_t i = 0;
                while (i < predChoice.size() && ++predChoice[i] == count) predChoice[i++] = 0;
                if (i == predChoice.size()) break;
              }
              std::size_t i = 0;
              while (i < deadChoice.size() && ++deadChoice[i] == tuples.size()) deadChoice[i++] = 0;
              if (i == deadChoice.size()) break;
            }
          }
          std::size_t i = 0;
          while (i < liveChoice.size() && ++liveChoice[i] == candidates[livePos[i]].size()) {
            liveChoice[i++] = 0;
          }
          liveDone = i == liveChoice.size();
        }
      }
      if (baseMask == 0) break;
    }
  }
}

}  // namespace

std::vector<Identifier> universeIds(const RingParams& params, std::size_t count) {
  if (count == 0 || count > params.spaceSize()) {
    throw std::invalid_argument("universe size does not fit the identifier space");
  }
  const std::uint64_t spacing = params.spaceSize() / count;
  std::vector<Identifier> ids;
  for (std::size_t k = 0; k < count; ++k) {
    ids.emplace_back(static_cast<std::uint32_t>(k * spacing + spacing / 2));
  }
  return ids;
}

void enumerateValidStates(const RingParams& params, std::size_t maxNodes, const StateVisitor& visit,
                          const EnumerationOptions& options) {
  params.validate();
  if (maxNodes > kExhaustionCeiling) {
    throw std::invalid_argument("exhaustive enumeration is limited to " +
                                std::to_string(kExhaustionCeiling) + " nodes");
  }
  const std::size_t from = std::max<std::size_t>(params.r + 1, options.minNodes);
  for (std::size_t count = from; count <= maxNodes; ++count) {
    enumerateUniverse(params, count, visit, options);
  }
}

StateSource exhaustiveSource(const RingParams& params, std::size_t maxNodes,
                             const EnumerationOptions& options) {
  StateSource src;
  src.bounds.maxNodes = maxNodes;
  src.bounds.rValues = {params.r};
  src.bounds.mode = "exhaustive";
  src.forEach = [params, maxNodes, options](const StateVisitor& visit) {
    enumerateValidStates(params, maxNodes, visit, options);
  };
  return src;
}

// --- constructive sampling ---------------------------------------------------

namespace {

template <typename T>
const T& pick(std::mt19937_64& rng, const std::vector<T>& v) {
  return v[std::uniform_int_distribution<std::size_t>(0, v.size() - 1)(rng)];
}

bool chance(std::mt19937_64& rng, double p) {
  return std::uniform_real_distribution<double>(0.0, 1.0)(rng) < p;
}

// Clockwise distance from a to b over the sorted universe positions.
std::size_t gap(std::size_t a, std::size_t b, std::size_t n) { return (b + n - a) % n; }

struct SampleLayout {
  std::size_t n = 0;
  std::vector<Identifier> ids;
  std::vector<bool> live;
  std::vector<bool> base;
  std::vector<bool> ring;
};

// Positions strictly after `cur` (clockwise from `self`) reachable without
// jumping over a base member.
std::vector<std::size_t> nextCandidates(const SampleLayout& lay, std::size_t self,
                                        std::size_t cur, bool enforceBase) {
  std::vector<std::size_t> out;
  const std::size_t n = lay.n;
  for (std::size_t step = 1; step < n; ++step) {
    const std::size_t c = (cur + step) % n;
    if (c == self) break;
    out.push_back(c);
    if (enforceBase && lay.base[c]) break;
  }
  return out;
}

std::optional<SuccList> buildList(std::mt19937_64& rng, const SampleLayout& lay, std::size_t self,
                                  std::size_t best, unsigned r, bool enforceBase,
                                  double freshProbability) {
  const std::size_t n = lay.n;
  std::vector<std::size_t> entries;
  // Optional dead prefix inside the arc (self, best).
  for (std::size_t step = 1; step < gap(self, best, n) && entries.size() + 1 < r; ++step) {
    const std::size_t c = (self + step) % n;
    if (!lay.live[c] && chance(rng, 0.3)) entries.push_back(c);
  }
  entries.push_back(best);
  while (entries.size() < r) {
    const auto cands = nextCandidates(lay, self, entries.back(), enforceBase);
    if (cands.empty()) return std::nullopt;
    std::size_t choice = cands.front();
    if (chance(rng, freshProbability)) {
      // Nearest live node, falling back to the base boundary.
      choice = cands.back();
      for (std::size_t c : cands) {
        if (lay.live[c]) {
          choice = c;
          break;
        }
      }
    } else {
      choice = pick(rng, cands);
    }
    entries.push_back(choice);
  }
  SuccList out;
  for (std::size_t e : entries) out.push_back(lay.ids[e]);
  return out;
}

std::optional<Network> trySample(std::mt19937_64& rng, const SamplingOptions& opt) {
  RingParams params;
  params.m = opt.m;
  params.r = pick(rng, opt.rValues);
  const unsigned r = params.r;
  if (opt.maxNodes < r + 1) throw std::invalid_argument("maxNodes must be at least r + 1");

  SampleLayout lay;
  lay.n = std::uniform_int_distribution<std::size_t>(r + 1, opt.maxNodes)(rng);
  const std::size_t n = lay.n;
  std::vector<std::uint32_t> pool(params.spaceSize());
  for (std::uint32_t i = 0; i < pool.size(); ++i) pool[i] = i;
  std::shuffle(pool.begin(), pool.end(), rng);
  pool.resize(n);
  std::sort(pool.begin(), pool.end());
  for (auto v : pool) lay.ids.emplace_back(v);

  const std::size_t liveCount = std::uniform_int_distribution<std::size_t>(r + 1, n)(rng);
  std::vector<std::size_t> order(n);
  for (std::size_t i = 0; i < n; ++i) order[i] = i;
  std::shuffle(order.begin(), order.end(), rng);
  lay.live.assign(n, false);
  lay.base.assign(n, false);
  lay.ring.assign(n, false);
  for (std::size_t i = 0; i < liveCount; ++i) lay.live[order[i]] = true;
  std::vector<std::size_t> livePos(order.begin(), order.begin() + static_cast<long>(liveCount));
  std::shuffle(livePos.begin(), livePos.end(), rng);
  if (opt.withBase) {
    for (std::size_t i = 0; i <= r; ++i) lay.base[livePos[i]] = true;
    for (std::size_t p : livePos) lay.ring[p] = lay.base[p] || chance(rng, opt.extraRingProbability);
  } else {
    lay.ring[livePos[0]] = true;
    for (std::size_t p : livePos) lay.ring[p] = lay.ring[p] || chance(rng, opt.extraRingProbability);
  }

  std::vector<std::size_t> best(n, n);
  const auto nextRing = [&](std::size_t p) {
    for (std::size_t step = 1; step <= n; ++step) {
      const std::size_t c = (p + step) % n;
      if (lay.ring[c]) return c;
    }
    return p;
  };
  for (std::size_t p = 0; p < n; ++p) {
    if (lay.live[p] && lay.ring[p]) best[p] = nextRing(p);
  }
  // Appendages hang off the ring or earlier appendages, forming a forest.
  std::vector<std::size_t> placed;
  for (std::size_t p = 0; p < n; ++p) {
    if (lay.ring[p]) placed.push_back(p);
  }
  std::vector<std::size_t> appendages;
  for (std::size_t p : livePos) {
    if (!lay.ring[p]) appendages.push_back(p);
  }
  for (std::size_t a : appendages) {
    std::vector<std::size_t> targets;
    for (std::size_t t : placed) {
      bool ok = t != a;
      if (opt.withBase) {
        for (std::size_t step = 1; ok && step < gap(a, t, n); ++step) {
          if (lay.base[(a + step) % n]) ok = false;
        }
      }
      if (ok) targets.push_back(t);
    }
    if (targets.empty()) return std::nullopt;
    best[a] = pick(rng, targets);
    placed.push_back(a);
  }

  std::vector<NodeState> nodes(n);
  std::vector<std::size_t> deadPos;
  for (std::size_t p = 0; p < n; ++p) {
    if (!lay.live[p]) deadPos.push_back(p);
  }
  for (std::size_t p = 0; p < n; ++p) {
    NodeState& ns = nodes[p];
    ns.ident = lay.ids[p];
    ns.live = lay.live[p];
    if (lay.live[p]) {
      auto list = buildList(rng, lay, p, best[p], r, opt.withBase, opt.freshEntryProbability);
      if (!list) return std::nullopt;
      ns.succList = std::move(*list);
      // Predecessor: correct, missing, obsolete, or some other live member.
      std::size_t correct = p;
      for (std::size_t step = 1; step < n; ++step) {
        const std::size_t c = (p + n - step) % n;
        if (lay.live[c]) {
          correct = c;
          break;
        }
      }
      const double u = std::uniform_real_distribution<double>(0.0, 1.0)(rng);
      if (u < opt.correctPredProbability) {
        ns.pred = lay.ids[correct];
      } else if (u < opt.correctPredProbability + 0.15) {
        ns.pred.reset();
      } else if (u < opt.correctPredProbability + 0.3 && !deadPos.empty()) {
        ns.pred = lay.ids[pick(rng, deadPos)];
      } else {
        std::size_t other = pick(rng, livePos);
        if (other != p) ns.pred = lay.ids[other];
      }
    } else {
      for (unsigned i = 0; i < r; ++i) {
        ns.succList.push_back(lay.ids[std::uniform_int_distribution<std::size_t>(0, n - 1)(rng)]);
      }
    }
  }
  std::vector<Identifier> base;
  for (std::size_t p = 0; p < n; ++p) {
    if (lay.base[p]) base.push_back(lay.ids[p]);
  }
  Network net(params, std::move(base), std::move(nodes));
  if (opt.withBase ? !isValid(net) : !holds(net, InvariantSet::TrialSix)) return std::nullopt;
  return net;
}

}  // namespace

Network sampleValidState(std::mt19937_64& rng, const SamplingOptions& options) {
  for (int attempt = 0; attempt < 100000; ++attempt) {
    if (auto net = trySample(rng, options)) return std::move(*net);
  }
  throw std::runtime_error("sampleValidState: no admissible state found");
}

void sampleValidStates(const SamplingOptions& options, std::size_t count, std::uint64_t seed,
                       const StateVisitor& visit) {
  std::mt19937_64 rng(seed);
  for (std::size_t i = 0; i < count; ++i) visit(sampleValidState(rng, options));
}

StateSource sampledSource(const SamplingOptions& options, std::size_t count, std::uint64_t seed) {
  StateSource src;
  src.bounds.maxNodes = options.maxNodes;
  src.bounds.rValues = options.rValues;
  src.bounds.mode = "random";
  src.bounds.seed = seed;
  src.bounds.samples = count;
  src.forEach = [options, count, seed](const StateVisitor& visit) {
    sampleValidStates(options, count, seed, visit);
  };
  return src;
}

StateSource fixedSource(std::vector<Network> states, std::string name) {
  StateSource src;
  src.bounds.mode = std::move(name);
  src.bounds.samples = states.size();
  src.forEach = [states = std::move(states)](const StateVisitor& visit) {
    for (const Network& net : states) visit(net);
  };
  return src;
}

}  // namespace chord
