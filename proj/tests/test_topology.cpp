#include "doctest.h"

#include <random>

#include "chord/checker.hpp"
#include "chord/events.hpp"
#include "chord/topology.hpp"
#include "support.hpp"

using namespace chord;
using namespace chord::testing;

TEST_SUITE("topology") {
  TEST_CASE("best successor skips dead entries") {
    const Network net = applyFail(fig4Initial(), id(3));
    CHECK(bestSuccessor(net, id(52)) == id(45));
    CHECK(bestSuccessor(net, id(20)) == id(31));
    CHECK_THROWS(bestSuccessor(net, id(3)));
  }

  TEST_CASE("ring and appendages of the valid example") {
    const Network net = validWithAppendages();
    const StructureReport rep = structure(net);
    CHECK(rep.ringMembers == ids({5, 20, 35, 48, 60}));
    CHECK(rep.appendageMembers == ids({9, 50, 53, 63}));
    CHECK(rep.orderedRing);
    CHECK(ringMembers(net) == rep.ringMembers);
  }

  TEST_CASE("fig4 structure before and after the stabilize") {
    Network net = fig4Initial();
    CHECK(ringMembers(net) == ids({3, 20, 31, 52}));
    CHECK(structure(net).appendageMembers == ids({45}));
    net = applyStabilizeFromOldSuccessor(applyFail(net, id(3)), id(52));
    const StructureReport rep = structure(net);
    CHECK(rep.ringMembers == ids({20, 31, 45, 52}));
    CHECK(rep.appendageMembers.empty());
    CHECK_FALSE(rep.orderedRing);
  }

  TEST_CASE("globally correct neighbours") {
    const Network net = validWithAppendages();
    CHECK(globallyCorrectSucc(net, id(48), 1) == id(50));
    CHECK(globallyCorrectSucc(net, id(48), 2) == id(53));
    CHECK(globallyCorrectSucc(net, id(63), 1) == id(5));
    CHECK(globallyCorrectPred(net, id(5)) == id(63));
    CHECK(globallyCorrectPred(net, id(20)) == id(9));
    CHECK_THROWS_AS(globallyCorrectSucc(net, id(48), 9), std::invalid_argument);
  }

  TEST_CASE("lookupSucc against a scan of the ring") {
    const Network net = validWithAppendages();
    const auto ring = ringMembers(net);
    for (std::uint32_t v = 0; v < 64; ++v) {
      if (net.isLive(id(v))) {
        CHECK_THROWS_AS(lookupSucc(net, id(v)), std::invalid_argument);
        continue;
      }
      // Walk upward to the first ring member.
      std::uint32_t w = (v + 1) % 64;
      while (std::find(ring.begin(), ring.end(), id(w)) == ring.end()) w = (w + 1) % 64;
      CHECK(lookupSucc(net, id(v)) == id(w));
    }
    CHECK(lookupSucc(net, id(40)) == id(48));
    CHECK(lookupSucc(net, id(55)) == id(60));
  }

  TEST_CASE("lookupSucc without a ring") {
    ProtocolRules unguarded;
    unguarded.failGuard = false;
    Network net(params(), {}, {member(48, std::nullopt, {48, 48}), member(62, std::nullopt, {48, 48})});
    net = applyFail(net, id(48), unguarded);
    CHECK_FALSE(lookupSucc(net, id(10)).has_value());
  }

  TEST_CASE("ideal networks") {
    CHECK(isIdeal(initNetwork(params(), ids({7, 19, 33}))));
    CHECK(isIdeal(initNetwork(params(6, 3), ids({1, 2, 40, 50}))));
    CHECK_FALSE(isIdeal(validWithAppendages()));
    CHECK_FALSE(isIdeal(fig2Stage1()));
    Network stale = initNetwork(params(), ids({7, 19, 33}));
    NodeState s = stale.node(id(19));
    s.pred.reset();
    CHECK_FALSE(isIdeal(stale.withNode(s)));
  }

  TEST_CASE("sampled networks have every live member on the ring or an appendage") {
    std::mt19937_64 rng(3);
    for (int i = 0; i < 500; ++i) {
      const Network net = sampleValidState(rng, SamplingOptions{});
      const StructureReport rep = structure(net);
      CHECK(rep.ringMembers.size() + rep.appendageMembers.size() == net.liveCount());
      CHECK(rep.orderedRing);
    }
  }
}
