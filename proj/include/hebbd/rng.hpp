#pragma once

#include <cstdint>

namespace hebbd {

// One step of splitmix64. Advances `state` and returns the mixed output.
std::uint64_t splitmix64(std::uint64_t& state) noexcept;

// Seed for an independent stream `stream` derived from `base`. Used to give
// every trial, dataset and grid point its own generator regardless of the
// order in which they are scheduled.
std::uint64_t derive_seed(std::uint64_t base, std::uint64_t stream) noexcept;

/// xoshiro256** seeded by four splitmix64 outputs of the seed.
///
/// Every derived draw is defined in terms of next_u64 so that another
/// implementation can reproduce the sequence bit for bit:
///   uniform()  = (next_u64() >> 11) * 2^-53            in [0, 1)
///   normal()   = Box-Muller on u1 = 1 - uniform(), u2 = uniform(),
///                returning sqrt(-2 ln u1) cos(2 pi u2) and caching the sine
///   bernoulli  = uniform() < p
///   below(n)   = Lemire's multiply-shift with rejection
class Rng {
 public:
  explicit Rng(std::uint64_t seed = 0) noexcept;

  std::uint64_t next_u64() noexcept;
  double uniform() noexcept;
  double uniform(double lo, double hi) noexcept;
  double normal() noexcept;
  bool bernoulli(double p) noexcept;
  std::uint64_t below(std::uint64_t n) noexcept;

  std::uint64_t seed() const noexcept { return seed_; }

 private:
  std::uint64_t seed_;
  std::uint64_t s_[4];
  bool has_spare_ = false;
  double spare_ = 0.0;
};

}  // namespace hebbd
