#include "twinrank/core/rng.hpp"

namespace twinrank {

std::uint64_t splitmix64(std::uint64_t& state) noexcept {
  std::uint64_t z = (state += 0x9E3779B97F4A7C15ULL);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

Xorshift64Star::Xorshift64Star(std::uint64_t seed) noexcept {
  std::uint64_t s = seed;
  state_ = splitmix64(s);
  if (state_ == 0) state_ = 0x9E3779B97F4A7C15ULL;
}

std::uint64_t Xorshift64Star::next() noexcept {
  state_ ^= state_ >> 12;
  state_ ^= state_ << 25;
  state_ ^= state_ >> 27;
  return state_ * kXorshiftMultiplier;
}

double Xorshift64Star::uniform() noexcept {
  return static_cast<double>(next() >> 11) * 0x1.0p-53;
}

std::uint64_t Xorshift64Star::below(std::uint64_t bound) noexcept {
  // Rejection keeps the result unbiased.
  const std::uint64_t limit = max() - max() % bound;
  std::uint64_t r;
  do {
    r = next();
  } while (r >= limit);
  return r % bound;
}

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream) noexcept {
  std::uint64_t s = seed ^ (stream * 0xD1B54A32D192ED03ULL);
  return splitmix64(s);
}

}  // namespace twinrank
