#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <vector>

#include "twinrank/core/types.hpp"

namespace twinrank::checkpoint {

enum class ImageKind : std::uint8_t { kSystem = 1, kApplication = 2 };

inline constexpr std::array<std::uint8_t, 4> kImageMagic{'S', 'E', 'D', 'R'};
inline constexpr std::uint16_t kImageVersion = 1;

struct RankImage {
  std::uint32_t stage_ordinal = 0;
  /// SYSTEM: one encoding per strand. APPLICATION: exactly one.
  std::vector<Bytes> payloads;
  /// APPLICATION only.
  Digest64 digest;

  friend bool operator==(const RankImage&, const RankImage&) = default;
};

struct CheckpointImage {
  ImageKind kind = ImageKind::kSystem;
  std::uint32_t seq = 0;
  std::vector<RankImage> ranks;

  friend bool operator==(const CheckpointImage&, const CheckpointImage&) = default;
};

// Layout, little-endian:
//   "SEDR" | version u16 | kind u8 | seq u32 | rank count u16
//   per rank, SYSTEM:      ordinal u32 | strand count u8 | length u64 per strand
//   per rank, APPLICATION: ordinal u32 | length u64 | digest u64
//   payloads, rank-major then strand order
// Reading an APPLICATION image checks every payload against its digest.
Bytes serialize(const CheckpointImage& image);
/// Throws FormatError on any layout violation.
CheckpointImage deserialize(std::span<const std::uint8_t> bytes);

}  // namespace twinrank::checkpoint
