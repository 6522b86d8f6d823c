#pragma once

#include <cstdint>
#include <random>
#include <vector>

namespace topo {

// All randomness in the library flows through this wrapper. std::mt19937_64 is
// bit-exact across standard libraries, but the <random> distributions are not,
// so the value transforms are spelled out here and are part of the contract:
//   uniform01: (raw >> 11) * 2^-53, a 53-bit mantissa in [0, 1)
//   normal:    Box-Muller on two uniform01 draws, second value cached
//   index(n):  multiply-shift bound, high 64 bits of raw * n
// Parallel fan-out splits streams as Rng(seed + task_index).
class Rng {
 public:
  explicit Rng(uint64_t seed) : seed_(seed), gen_(seed) {}

  uint64_t seed() const { return seed_; }
  uint64_t raw() { return gen_(); }

  double uniform01();
  double uniform(double lo, double hi);
  double normal();
  uint64_t index(uint64_t n);  // uniform over {0, ..., n-1}; n must be > 0

  Rng split(uint64_t task) const { return Rng(seed_ + task); }

  // Fisher-Yates using index(); deterministic given the stream position.
  template <class T>
  void shuffle(std::vector<T>& v) {
    for (size_t i = v.size(); i > 1; --i) std::swap(v[i - 1], v[index(i)]);
  }

 private:
  uint64_t seed_;
  std::mt19937_64 gen_;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

}  // namespace topo
