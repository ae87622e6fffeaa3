#include "mahler/random.hpp"

#include <cmath>
#include <numbers>

namespace mahler {

double CounterRng::normal(std::uint64_t index, std::uint64_t lane) const {
  const std::uint64_t pair = lane / 2;
  const double u1 = 1.0 - uniform(index, 2 * pair + 0x10000);  // (0, 1]
  const double u2 = uniform(index, 2 * pair + 0x10001);
  const double r = std::sqrt(-2.0 * std::log(u1));
  const double a = 2.0 * std::numbers::pi * u2;
  return lane % 2 == 0 ? r * std::cos(a) : r * std::sin(a);
}

}  // namespace mahler
