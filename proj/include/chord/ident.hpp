#pragma once

#include <compare>
#include <cstdint>
#include <functional>
#include <span>
#include <string>

namespace chord {

/// A position on the m-bit identifier ring.
///
/// Ordering between identifiers is circular and must be judged with
/// `between`. The defaulted comparison operators give numeric storage
/// order only, used for deterministic container layout.
class Identifier {
 public:
  constexpr Identifier() = default;
  constexpr explicit Identifier(std::uint32_t value) : value_(value) {}

  constexpr std::uint32_t value() const { return value_; }

  friend constexpr auto operator<=>(Identifier, Identifier) = default;

 private:
  std::uint32_t value_ = 0;
};

std::string to_string(Identifier id);

struct RingParams {
  unsigned m = 6;  // bit width of the identifier space
  unsigned r = 2;  // successor-list length

  std::uint64_t spaceSize() const { return std::uint64_t{1} << m; }
  bool contains(Identifier id) const { return id.value() < spaceSize(); }

  /// Throws std::invalid_argument unless m >= 3, r >= 2 and r + 1 <= 2^m.
  void validate() const;

  friend bool operator==(const RingParams&, const RingParams&) = default;
};

/// True iff n2 lies strictly inside the clockwise arc from n1 to n3.
/// between(x, y, x) is true for y != x; between(x, x, y) and
/// between(y, x, x) are false.
constexpr bool between(Identifier n1, Identifier n2, Identifier n3) {
  const auto a = n1.value();
  const auto b = n2.value();
  const auto c = n3.value();
  if (a < c) return a < b && b < c;
  return a < b || b < c;
}

/// Number of members strictly inside the clockwise arc (from, to). When
/// to == from the arc is the full loop, giving |members| - 1.
/// Throws std::invalid_argument if from or to is not in members.
std::size_t clockwiseRank(Identifier from, Identifier to,
                          std::span<const Identifier> members);

}  // namespace chord

template <>
struct std::hash<chord::Identifier> {
  std::size_t operator()(chord::Identifier id) const noexcept {
    return std::hash<std::uint32_t>{}(id.value());
  }
};
