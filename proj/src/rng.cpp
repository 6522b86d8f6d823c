#include "topo/rng.hpp"

#include <cmath>

namespace topo {

namespace {
constexpr double kTwoPi = 6.283185307179586476925286766559;
}

double Rng::uniform01() {
  return static_cast<double>(raw() >> 11) * 0x1.0p-53;
}

double Rng::uniform(double lo, double hi) {
  return lo + uniform01() * (hi - lo);
}

double Rng::normal() {
  if (has_spare_) {
    has_spare_ = false;
    return spare_;
  }
  // 1 - u keeps the log argument in (0, 1]; r = 0 when u = 0 is harmless.
  double u1 = 1.0 - uniform01();
  double u2 = uniform01();
  double r = std::sqrt(-2.0 * std::log(u1));
  double theta = kTwoPi * u2;
  spare_ = r * std::sin(theta);
  has_spare_ = true;
  return r * std::cos(theta);
}

uint64_t Rng::index(uint64_t n) {
  return static_cast<uint64_t>((static_cast<unsigned __int128>(raw()) * n) >> 64);
}

}  // namespace topo
