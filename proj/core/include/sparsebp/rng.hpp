#pragma once

#include <cstdint>
#include <random>

namespace sparsebp {

// Seeded generator with hand-rolled distributions so that identical seeds
// produce identical streams on every platform (std::mt19937_64 output is
// fully specified by the standard; the distribution adaptors below avoid
// the implementation-defined std:: distributions).
class Rng {
 public:
  explicit Rng(std::uint64_t seed);

  // Per-trial generator: seed = root_seed XOR trial_index.
  static Rng for_trial(std::uint64_t root_seed, std::uint64_t trial_index);

  std::uint64_t seed() const { return seed_; }

  // uniform on [0, 1), 53-bit resolution
  double uniform01();

  // uniform on {0, 1, ..., bound-1}, unbiased; bound >= 1
  std::uint64_t uniform_below(std::uint64_t bound);

  // standard normal (Box-Muller, pair cached)
  double normal();

  // fair +1 / -1
  double sign();

 private:
  std::uint64_t seed_;
  std::mt19937_64 engine_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

}  // namespace sparsebp
