#include "cbpa/rng.hpp"

namespace cbpa::rng {

namespace {

std::uint64_t fnv1a(std::string_view s) {
  std::uint64_t h = 1469598103934665603ull;
  for (char c : s) {
    h ^= static_cast<unsigned char>(c);
    h *= 1099511628211ull;
  }
  return h;
}

}  // namespace

Stream::Stream(std::uint64_t seed, std::string_view label)
    : state_(seed ^ fnv1a(label)) {}

std::uint64_t Stream::next_u64() {
  // splitmix64 (Steele, Lea, Flood 2014).
  state_ += 0x9E3779B97F4A7C15ull;
  std::uint64_t z = state_;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

double Stream::next_double() {
  return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

double Stream::uniform(double lo, double hi) {
  return lo + (hi - lo) * next_double();
}

std::uint64_t Stream::next_below(std::uint64_t n) {
  return n ? next_u64() % n : 0;
}

}  // namespace cbpa::rng
