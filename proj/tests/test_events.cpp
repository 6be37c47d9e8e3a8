#include "doctest.h"

#include <random>

#include "chord/checker.hpp"
#include "chord/events.hpp"
#include "chord/topology.hpp"
#include "support.hpp"

using namespace chord;
using namespace chord::testing;

namespace {

Network ring3() { return initNetwork(params(), ids({7, 19, 33})); }

Network afterJoin10() {
  Network net = applyJoinLookup(ring3(), id(10), id(33));
  return applyJoin(net, id(10));
}

// True when `after` differs from `before` only in node `n`.
bool onlyNodeChanged(const Network& before, const Network& after, Identifier n) {
  for (const NodeState& ns : after.nodes()) {
    if (ns.ident == n) continue;
    const NodeState* old = before.find(ns.ident);
    if (!old || !(*old == ns)) return false;
  }
  for (const NodeState& ns : before.nodes()) {
    if (after.find(ns.ident) == nullptr) return false;
  }
  return before.base().size() == after.base().size() &&
         std::equal(before.base().begin(), before.base().end(), after.base().begin());
}

}  // namespace

TEST_SUITE("events") {
  TEST_CASE("kind names") {
    CHECK(eventKindFromString("SFOS") == EventKind::StabilizeFromOldSuccessor);
    CHECK(eventKindFromString("SFNS") == EventKind::StabilizeFromNewSuccessor);
    CHECK(eventKindFromString("Rectify") == EventKind::Rectify);
    CHECK(to_string(EventKind::JoinLookup) == "JoinLookup");
    CHECK_THROWS_AS(eventKindFromString("Leave"), std::invalid_argument);
    CHECK(isRepair(EventKind::Rectify));
    CHECK_FALSE(isRepair(EventKind::Join));
    CHECK(to_string(Event::rectify(id(19), id(10))) == "Rectify(19, 10)");
  }

  TEST_CASE("JoinLookup records the proper successor") {
    const Network net = applyJoinLookup(ring3(), id(10), id(33));
    const NodeState& j = net.node(id(10));
    CHECK_FALSE(j.live);
    CHECK(j.pendingNewSucc == id(19));
    CHECK(j.known == id(33));
    CHECK_FALSE(isEnabled(net, Event::joinLookup(id(19), id(7))));
    // A second lookup while one is pending is not allowed.
    CHECK_FALSE(isEnabled(net, Event::joinLookup(id(10), id(7))));
  }

  TEST_CASE("JoinLookup through a dead contact changes nothing") {
    Network net = initNetwork(params(), ids({7, 19, 33}));
    net = applyJoin(applyJoinLookup(net, id(50), id(7)), id(50));
    net = applyFail(net, id(50));
    CHECK_FALSE(isEnabled(net, Event::joinLookup(id(10), id(50))));
    CHECK(applyJoinLookup(net, id(10), id(50)) == net);
  }

  TEST_CASE("Join adopts the successor's list and clears pred") {
    const Network net = afterJoin10();
    const NodeState& j = net.node(id(10));
    CHECK(j.live);
    CHECK(j.succList == ids({19, 33}));
    CHECK_FALSE(j.pred.has_value());
    CHECK_FALSE(j.pendingNewSucc.has_value());
    CHECK(isEnabled(net, Event::rectify(id(19), id(10))));
  }

  TEST_CASE("Join with a dead successor only clears the intermediate") {
    Network net = initNetwork(params(), ids({7, 19, 33}));
    net = applyJoin(applyJoinLookup(net, id(30), id(7)), id(30));
    net = applyJoinLookup(net, id(28), id(7));
    CHECK(net.node(id(28)).pendingNewSucc == id(33));
    // A stale lookup that named 30, which has since failed.
    NodeState stale = net.node(id(28));
    stale.pendingNewSucc = id(30);
    net = applyFail(net.withNode(stale), id(30));
    CHECK(isEnabled(net, Event::join(id(28))));
    const Network after = applyJoin(net, id(28));
    CHECK_FALSE(after.node(id(28)).live);
    CHECK_FALSE(after.node(id(28)).pendingNewSucc.has_value());
  }

  TEST_CASE("Join is disabled when a base member lies before the successor") {
    Network net = ring3();
    NodeState j;
    j.ident = id(10);
    j.pendingNewSucc = id(33);
    net = net.withNode(j);
    CHECK_FALSE(joinPreconditionHolds(net, id(10), id(33)));
    CHECK_FALSE(isEnabled(net, Event::join(id(10))));
    CHECK_THROWS_AS(applyJoin(net, id(10)), EventNotEnabled);
  }

  TEST_CASE("join precondition survives interleaved events") {
    std::mt19937_64 rng(11);
    for (int trial = 0; trial < 200; ++trial) {
      Network net = sampleValidState(rng, SamplingOptions{});
      std::vector<Identifier> joiners;
      for (std::uint32_t v = 0; v < 64 && joiners.empty(); ++v) {
        if (net.find(id(v)) == nullptr) joiners.push_back(id(v));
      }
      REQUIRE_FALSE(joiners.empty());
      const Identifier j = joiners.front();
      net = applyJoinLookup(net, j, net.liveMembers().front());
      const Identifier target = *net.node(j).pendingNewSucc;
      REQUIRE(joinPreconditionHolds(net, j, target));
      for (int step = 0; step < 20; ++step) {
        auto events = enabledEvents(net);
        events.erase(std::remove_if(events.begin(), events.end(),
                                    [&](const Event& e) { return e.node == j; }),
                     events.end());
        if (events.empty()) break;
        net = applyEvent(net, events[std::uniform_int_distribution<std::size_t>(0, events.size() - 1)(rng)]);
        CHECK(joinPreconditionHolds(net, j, target));
      }
    }
  }

  TEST_CASE("stabilize steps while 10 joins") {
    Network net = afterJoin10();
    // 10 stabilizes: 7 is not a better successor than 19.
    CHECK(net.node(id(19)).pred == id(7));
    CHECK_FALSE(isEnabled(net, Event::stabilizeFromNewSuccessor(id(10))));
    CHECK(applyStabilizeFromOldSuccessor(net, id(10)).node(id(10)).succList == ids({19, 33}));
    net = applyRectify(net, id(19), id(10));
    CHECK(net.node(id(19)).pred == id(10));
    net = applyStabilizeFromOldSuccessor(net, id(7));
    CHECK(net.node(id(7)).succList.front() == id(19));
    CHECK(net.node(id(7)).pendingCandidate == id(10));
    REQUIRE(isEnabled(net, Event::stabilizeFromNewSuccessor(id(7))));
    net = applyStabilizeFromNewSuccessor(net, id(7));
    CHECK(net.node(id(7)).succList == ids({10, 19}));
    CHECK_FALSE(net.node(id(7)).pendingCandidate.has_value());
    net = applyRectify(net, id(10), id(7));
    CHECK(net.node(id(10)).pred == id(7));
  }

  TEST_CASE("SFOS skips a dead head") {
    Network net = applyFail(fig4Initial(), id(3));
    net = applyStabilizeFromOldSuccessor(net, id(52));
    CHECK(net.node(id(52)).succList == ids({45, 20}));
  }

  TEST_CASE("SFOS with every entry dead is an assumption breach") {
    ProtocolRules unguarded;
    unguarded.failGuard = false;
    Network net(params(), {}, {member(48, std::nullopt, {48, 48}), member(62, std::nullopt, {48, 48})});
    net = applyFail(net, id(48), unguarded);
    CHECK_FALSE(isEnabled(net, Event::stabilizeFromOldSuccessor(id(62))));
    CHECK_THROWS_AS(applyStabilizeFromOldSuccessor(net, id(62)), AssumptionBreach);
  }

  TEST_CASE("SFOS on an up-to-date member changes nothing") {
    const Network net = ring3();
    const Network after = applyStabilizeFromOldSuccessor(net, id(7));
    CHECK(after == net);
  }

  TEST_CASE("SFNS requires a live candidate unless the canary is on") {
    Network net = afterJoin10();
    net = applyRectify(net, id(19), id(10));
    net = applyFail(net.withBase({}), id(10));
    CHECK_FALSE(isEnabled(net, Event::stabilizeFromNewSuccessor(id(7))));
    ProtocolRules canary;
    canary.liveCheckBeforeAdoption = false;
    REQUIRE(isEnabled(net, Event::stabilizeFromNewSuccessor(id(7)), canary));
    const Network after = applyStabilizeFromNewSuccessor(net, id(7), canary);
    CHECK(after.node(id(7)).succList.front() == id(10));
  }

  TEST_CASE("SFNS is not enabled without a candidate") {
    CHECK_FALSE(isEnabled(ring3(), Event::stabilizeFromNewSuccessor(id(7))));
    const Network net = afterJoin10();
    CHECK_FALSE(net.node(id(10)).pred.has_value());
    CHECK_FALSE(isEnabled(net, Event::stabilizeFromNewSuccessor(id(33))));
  }

  TEST_CASE("Rectify cases") {
    Network net = afterJoin10();
    // No previous predecessor.
    CHECK_FALSE(net.node(id(10)).pred.has_value());
    NodeState seven = net.node(id(7));
    seven.succList = ids({10, 19});
    net = net.withNode(seven);
    CHECK(applyRectify(net, id(10), id(7)).node(id(10)).pred == id(7));
    // A better live predecessor replaces the old one.
    CHECK(applyRectify(net, id(19), id(10)).node(id(19)).pred == id(10));
    // A worse one does not.
    Network better = applyRectify(net, id(19), id(10));
    NodeState seven2 = better.node(id(7));
    seven2.succList = ids({19, 33});
    better = better.withNode(seven2);
    CHECK(applyRectify(better, id(19), id(7)).node(id(19)).pred == id(10));
    // A dead predecessor is replaced unconditionally.
    Network dead = applyFail(better.withBase({}), id(10));
    CHECK(applyRectify(dead, id(19), id(7)).node(id(19)).pred == id(7));
    // Only a node whose head is n may notify n.
    CHECK_FALSE(isEnabled(net, Event::rectify(id(33), id(7))));
    CHECK_FALSE(isEnabled(net, Event::rectify(id(7), id(7))));
  }

  TEST_CASE("Fail guard and base permanence") {
    const Network net = fig4Initial();
    CHECK(isEnabled(net, Event::fail(id(3))));
    CHECK_FALSE(isEnabled(ring3(), Event::fail(id(7))));
    // 45 would be left with (20, 31) both dead if 20 then 31 fail.
    Network cut = applyFail(net, id(20));
    CHECK_FALSE(isEnabled(cut, Event::fail(id(31))));
    ProtocolRules unguarded;
    unguarded.failGuard = false;
    CHECK(isEnabled(cut, Event::fail(id(31)), unguarded));
    const Network after = applyFail(net, id(3));
    CHECK_FALSE(after.isLive(id(3)));
    CHECK(after.node(id(3)).succList == ids({20, 31}));
  }

  TEST_CASE("enabledEvents on an ideal network") {
    const Network net = ring3();
    const auto events = enabledEvents(net);
    std::size_t sfos = 0;
    std::size_t rect = 0;
    for (const Event& e : events) {
      CHECK(e.kind != EventKind::StabilizeFromNewSuccessor);
      CHECK(e.kind != EventKind::Fail);
      if (e.kind == EventKind::StabilizeFromOldSuccessor) ++sfos;
      if (e.kind == EventKind::Rectify) ++rect;
    }
    CHECK(sfos == 3);
    CHECK(rect == 3);
    CHECK(enabledEvents(net) == events);
  }

  TEST_CASE("enabledEvents after 10 joins includes Rectify(19, 10)") {
    const auto events = enabledEvents(afterJoin10());
    CHECK(std::find(events.begin(), events.end(), Event::rectify(id(19), id(10))) != events.end());
    const std::vector<Identifier> extra{id(40)};
    const auto withJoiner = enabledEvents(ring3(), {}, extra);
    CHECK(std::find(withJoiner.begin(), withJoiner.end(), Event::joinLookup(id(40), id(7))) != withJoiner.end());
  }

  TEST_CASE("applyEvent rejects disabled events") {
    CHECK_THROWS_AS(applyEvent(ring3(), Event::fail(id(7))), EventNotEnabled);
    CHECK_THROWS_AS(applyEvent(ring3(), Event::join(id(8))), EventNotEnabled);
    Event bad = Event::rectify(id(19), id(7));
    bad.newPred.reset();
    CHECK_THROWS_AS(applyEvent(ring3(), bad), EventNotEnabled);
  }

  TEST_CASE("every event changes only its executor, over random states") {
    std::mt19937_64 rng(5);
    for (int i = 0; i < 300; ++i) {
      const Network net = sampleValidState(rng, SamplingOptions{});
      std::vector<Identifier> extra;
      for (std::uint32_t v = 0; v < 64 && extra.size() < 2; ++v) {
        if (net.find(id(v)) == nullptr) extra.push_back(id(v));
      }
      for (const Event& e : enabledEvents(net, {}, extra)) {
        const Network after = applyEvent(net, e);
        CHECK(onlyNodeChanged(net, after, e.node));
        for (Identifier n : after.liveMembers()) {
          CHECK(after.node(n).succList.size() == net.params().r);
          for (Identifier s : after.node(n).succList) CHECK(after.find(s) != nullptr);
        }
      }
    }
  }
}
