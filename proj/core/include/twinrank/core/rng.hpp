#pragma once

#include <cstdint>

namespace twinrank {

inline constexpr std::uint64_t kXorshiftMultiplier = 0x2545F4914F6CDD1DULL;

/// splitmix64 finalizer, used to expand seeds.
std::uint64_t splitmix64(std::uint64_t& state) noexcept;

/// xorshift64* (shifts 12, 25, 27). The initial state is the first
/// splitmix64 output of the seed, so seed 0 is usable.
class Xorshift64Star {
 public:
  using result_type = std::uint64_t;

  explicit Xorshift64Star(std::uint64_t seed) noexcept;

  std::uint64_t next() noexcept;
  std::uint64_t operator()() noexcept { return next(); }

  /// Uniform double in [0, 1): top 53 bits scaled by 2^-53.
  double uniform() noexcept;

  /// Uniform integer in [0, bound). bound must be positive.
  std::uint64_t below(std::uint64_t bound) noexcept;

  static constexpr std::uint64_t min() noexcept { return 0; }
  static constexpr std::uint64_t max() noexcept { return ~std::uint64_t{0}; }

 private:
  std::uint64_t state_;
};

/// Derives an independent stream seed from a base seed and a stream tag.
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream) noexcept;

}  // namespace twinrank
