#include "doctest.h"

#include <random>

#include "chord/checker.hpp"
#include "chord/events.hpp"
#include "chord/invariants.hpp"
#include "support.hpp"

using namespace chord;
using namespace chord::testing;

TEST_SUITE("invariants") {
  TEST_CASE("skips on extended lists") {
    const Network net = validWithAppendages();
    CHECK(skips(net, id(48), id(50)));
    CHECK(skips(net, id(5), id(9)));
    CHECK_FALSE(skips(net, id(5), id(35)));
    CHECK_FALSE(skips(net, id(5), id(48)));
    const Network f4 = fig4Initial();
    CHECK(skips(f4, id(52), id(20)));
    CHECK(skips(f4, id(52), id(31)));
    CHECK_FALSE(skips(f4, id(3), id(20)));
  }

  TEST_CASE("valid example satisfies every conjunct") {
    const ConjunctReport rep = conjuncts(validWithAppendages());
    CHECK(rep.atLeastOneRing);
    CHECK(rep.atMostOneRing);
    CHECK(rep.orderedRing);
    CHECK(rep.connectedAppendages);
    CHECK(rep.baseNotSkipped);
    CHECK(rep.valid);
    CHECK(isValid(fig2Stage1()));
  }

  TEST_CASE("a skipped base member breaks validity") {
    Network net = validWithAppendages();
    NodeState n = net.node(id(20));
    n.succList = ids({48, 60});
    net = net.withNode(n);
    const ConjunctReport rep = conjuncts(net);
    CHECK_FALSE(rep.baseNotSkipped);
    CHECK_FALSE(rep.valid);
    CHECK(brokenConjuncts(net, InvariantSet::Valid) == std::vector<std::string>{"baseNotSkipped"});
    CHECK(holds(net, InvariantSet::TrialSix));
  }

  TEST_CASE("losing the only ring member") {
    ProtocolRules unguarded;
    unguarded.failGuard = false;
    Network net(params(), {},
                {member(37, std::nullopt, {48, 48}), member(48, std::nullopt, {48, 48}),
                 member(62, std::nullopt, {48, 48})});
    CHECK(conjuncts(net).atLeastOneRing);
    net = applyFail(net, id(48), unguarded);
    const ConjunctReport rep = conjuncts(net);
    CHECK_FALSE(rep.atLeastOneRing);
    CHECK_FALSE(rep.connectedAppendages);
  }

  TEST_CASE("two disjoint rings") {
    const Network net(params(), {},
                      {member(10, 30, {30, 10}), member(30, 10, {10, 30}), member(40, 50, {50, 40}),
                       member(50, 40, {40, 50})});
    const ConjunctReport rep = conjuncts(net);
    CHECK(rep.atLeastOneRing);
    CHECK_FALSE(rep.atMostOneRing);
    CHECK_FALSE(rep.valid);
  }

  TEST_CASE("a ring that winds twice is not ordered") {
    const Network net(params(), {},
                      {member(10, 40, {30, 50}), member(20, 50, {40, 10}), member(30, 10, {50, 20}),
                       member(40, 20, {10, 30}), member(50, 30, {20, 40})});
    const ConjunctReport rep = conjuncts(net);
    CHECK(rep.atLeastOneRing);
    CHECK(rep.atMostOneRing);
    CHECK_FALSE(rep.orderedRing);
  }

  TEST_CASE("list properties") {
    const Network net = validWithAppendages();
    for (Identifier n : net.liveMembers()) {
      const ListProperties lp = listProperties(net, n);
      CHECK(lp.noDuplicates);
      CHECK(lp.orderedSuccessorLists);
    }
    NodeState dup = net.node(id(9));
    dup.succList = ids({20, 20});
    CHECK_FALSE(listProperties(net.withNode(dup), id(9)).noDuplicates);
    NodeState back = net.node(id(5));
    back.succList = ids({35, 20});
    const ListProperties lp = listProperties(net.withNode(back), id(5));
    CHECK(lp.noDuplicates);
    CHECK_FALSE(lp.orderedSuccessorLists);
  }

  TEST_CASE("trial predicates on the wraparound example") {
    const Network start = fig4Initial();
    CHECK(holds(start, InvariantSet::TrialSix));
    CHECK_FALSE(trialPredicates(start).noEjects);
    const Network after = applyStabilizeFromOldSuccessor(applyFail(start, id(3)), id(52));
    CHECK_FALSE(trialPredicates(after).noConflictingDates);
    CHECK(mustPreDate(after, id(45), id(52)));
    CHECK(mustPreDate(after, id(52), id(45)));
    const auto broken = brokenConjuncts(after, InvariantSet::TrialSix);
    CHECK(std::find(broken.begin(), broken.end(), "orderedRing") != broken.end());
  }

  TEST_CASE("invariant set names") {
    for (InvariantSet s : {InvariantSet::Valid, InvariantSet::TrialSix, InvariantSet::TrialEight}) {
      CHECK(invariantSetFromString(to_string(s)) == s);
    }
    CHECK_THROWS_AS(invariantSetFromString("nine"), std::invalid_argument);
  }

  TEST_CASE("evaluation is deterministic and implied by sampling") {
    std::mt19937_64 rng(17);
    for (int i = 0; i < 300; ++i) {
      const Network net = sampleValidState(rng, SamplingOptions{});
      CHECK(conjuncts(net) == conjuncts(net));
      CHECK(conjuncts(net).valid);
      for (Identifier n : net.liveMembers()) {
        const ListProperties lp = listProperties(net, n);
        CHECK(lp.noDuplicates);
        CHECK(lp.orderedSuccessorLists);
      }
    }
  }
}
