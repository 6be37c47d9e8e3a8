#include "chord/ident.hpp"

#include <algorithm>
#include <stdexcept>

namespace chord {

std::string to_string(Identifier id) { return std::to_string(id.value()); }

void RingParams::validate() const {
  if (m < 3 || m > 31) {
    throw std::invalid_argument("identifier width m must be in [3, 31], got " +
                                std::to_string(m));
  }
  if (r < 2) {
    throw std::invalid_argument("successor-list length r must be >= 2, got " +
                                std::to_string(r));
  }
  if (std::uint64_t{r} + 1 > spaceSize()) {
    throw std::invalid_argument("r + 1 exceeds the identifier space");
  }
}

std::size_t clockwiseRank(Identifier from, Identifier to,
                          std::span<const Identifier> members) {
  const auto has = [&](Identifier id) {
    return std::find(members.begin(), members.end(), id) != members.end();
  };
  if (!has(from) || !has(to)) {
    throw std::invalid_argument("clockwiseRank: endpoint is not a member");
  }
  std::size_t count = 0;
  for (Identifier m : members) {
    if (m == from || m == to) continue;
    if (between(from, m, to)) ++count;
  }
  return count;
}

}  // namespace chord
