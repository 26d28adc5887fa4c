// Deterministic pseudo-random stream, split per subsystem by label so that
// adding a feature does not shift the draws of an unrelated one.
#pragma once

#include <cstdint>
#include <string_view>

namespace cbpa::rng {

// splitmix64-based generator. Avoids std distributions so that sequences are
// bit-identical across standard library implementations.
class Stream {
public:
  explicit Stream(std::uint64_t seed) : state_(seed) {}
  Stream(std::uint64_t seed, std::string_view label);

  std::uint64_t next_u64();
  // Uniform in [0, 1).
  double next_double();
  // Uniform in [lo, hi).
  double uniform(double lo, double hi);
  // Uniform integer in [0, n).
  std::uint64_t next_below(std::uint64_t n);

private:
  std::uint64_t state_;
};

}  // namespace cbpa::rng
