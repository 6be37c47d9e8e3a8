#pragma once

#include <algorithm>
#include <initializer_list>
#include <optional>
#include <vector>

#include "chord/network.hpp"

namespace chord::testing {

inline Identifier id(std::uint32_t v) { return Identifier(v); }

inline std::vector<Identifier> ids(std::initializer_list<std::uint32_t> vs) {
  return {vs.begin(), vs.end()};
}

inline NodeState member(std::uint32_t ident, std::optional<std::uint32_t> pred,
                        std::initializer_list<std::uint32_t> list, bool live = true) {
  NodeState ns;
  ns.ident = id(ident);
  ns.live = live;
  if (pred) ns.pred = id(*pred);
  ns.succList = ids(list);
  return ns;
}

inline RingParams params(unsigned m = 6, unsigned r = 2) {
  RingParams p;
  p.m = m;
  p.r = r;
  return p;
}

/// 3 -> 20 -> 31 -> 52 -> 3 with appendage 45 attached at 20; no base.
inline Network fig4Initial() {
  return Network(params(), {},
                 {member(3, 52, {20, 31}), member(20, 3, {31, 52}), member(31, 20, {52, 3}),
                  member(45, std::nullopt, {20, 31}), member(52, 31, {3, 45})});
}

/// Base {7,19,33} just after 10 joined with successor 19.
inline Network fig2Stage1() {
  return Network(params(), ids({7, 19, 33}),
                 {member(7, 33, {19, 33}), member(10, std::nullopt, {19, 33}), member(19, 7, {33, 7}),
                  member(33, 19, {7, 19})});
}

/// A valid network with appendages: the ring
/// 5, 20, 35, 48, 60 with appendages 50 and 53 hanging off 60, 63 off 5
/// and 9 off 20.
inline Network validWithAppendages() {
  return Network(params(), ids({5, 35, 60}),
                 {member(5, 60, {20, 35}), member(9, std::nullopt, {20, 35}), member(20, 5, {35, 48}),
                  member(35, 20, {48, 60}), member(48, 35, {60, 5}), member(50, 48, {53, 60}),
                  member(53, 50, {60, 5}), member(60, 48, {5, 20}), member(63, 60, {5, 20})});
}

/// Independent arc count: members strictly inside (from, to) going up
/// from `from` one identifier at a time.
inline std::size_t walkRank(std::uint32_t from, std::uint32_t to, std::uint32_t space,
                            const std::vector<Identifier>& members) {
  std::size_t count = 0;
  for (std::uint32_t v = (from + 1) % space; v != to; v = (v + 1) % space) {
    if (std::find(members.begin(), members.end(), Identifier(v)) != members.end()) ++count;
  }
  return count;
}

}  // namespace chord::testing
