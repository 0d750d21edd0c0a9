#pragma once

#include <compare>
#include <cstdint>
#include <string>
#include <vector>

namespace twinrank {

using Bytes = std::vector<std::uint8_t>;

/// Index of a logical process. Stable across restarts.
struct Rank {
  std::uint32_t id = 0;

  friend constexpr auto operator<=>(Rank, Rank) = default;
};

/// Position in an application's stage sequence plus its symbolic label.
struct StageId {
  std::uint32_t ordinal = 0;
  std::string label;

  friend bool operator==(const StageId&, const StageId&) = default;
};

struct Digest64 {
  std::uint64_t value = 0;

  friend constexpr bool operator==(Digest64, Digest64) = default;
};

/// Routed message. The payload is a canonical encoding of the sender's data.
struct MessageEnvelope {
  Rank src;
  Rank dst;
  int tag = 0;
  Bytes payload;
};

}  // namespace twinrank
