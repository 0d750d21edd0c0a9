#pragma once

#include <cstdint>
#include <span>

#include "twinrank/core/types.hpp"

namespace twinrank {

/// FNV-1a, 64-bit. Fixed across versions: checkpoint images store it.
inline constexpr std::uint64_t kFnvOffsetBasis = 0xcbf29ce484222325ULL;
inline constexpr std::uint64_t kFnvPrime = 0x100000001b3ULL;

Digest64 hash64(std::span<const std::uint8_t> bytes) noexcept;

/// Continues a fold from a previous digest value.
Digest64 hash64_continue(Digest64 seed, std::span<const std::uint8_t> bytes) noexcept;

}  // namespace twinrank
