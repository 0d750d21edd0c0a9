#include "twinrank/core/digest.hpp"

namespace twinrank {

Digest64 hash64_continue(Digest64 seed, std::span<const std::uint8_t> bytes) noexcept {
  std::uint64_t h = seed.value;
  for (std::uint8_t b : bytes) {
    h ^= b;
    h *= kFnvPrime;
  }
  return Digest64{h};
}

Digest64 hash64(std::span<const std::uint8_t> bytes) noexcept {
  return hash64_continue(Digest64{kFnvOffsetBasis}, bytes);
}

}  // namespace twinrank
