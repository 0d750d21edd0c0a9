#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "twinrank/core/state.hpp"
#include "twinrank/core/types.hpp"
#include "twinrank/runtime/mailbox.hpp"

namespace twinrank::runtime {

inline constexpr std::size_t kMaxStrands = 2;

/// The strands of one logical rank. A reference run has a single strand.
struct ReplicaPair {
  Rank rank;
  std::vector<State> strands;
  /// Steps executed per strand since the last rendezvous.
  std::array<std::uint64_t, kMaxStrands> steps{};
};

using PayloadBuilder = std::function<State(const State&)>;
using PayloadAcceptor = std::function<void(State&, const State&)>;

struct SendOutcome {
  bool sent = false;
  std::size_t mismatch_offset = 0;
  Digest64 digest;
};

/// Builds the payload in every strand and compares the encodings byte for
/// byte. Equal: one envelope goes to `dst`. Different: nothing is enqueued.
SendOutcome validated_send(const ReplicaPair& pair, const PayloadBuilder& build, Rank dst,
                           int tag, Mailbox& mailbox);

/// Dequeues one envelope from `src` and gives every strand its own decoded
/// copy. Throws std::logic_error when no matching envelope is pending.
void replicated_recv(ReplicaPair& pair, Rank src, int tag, const State& schema,
                     const PayloadAcceptor& accept, Mailbox& mailbox);

/// Returns the step deficit when the strands diverge by more than `budget`.
std::optional<std::uint64_t> rendezvous(const ReplicaPair& pair, std::uint64_t budget) noexcept;

/// First differing byte of the strands' encoded result fields, if any.
std::optional<std::size_t> validate_final(const ReplicaPair& pair,
                                          std::span<const std::string> fields);

}  // namespace twinrank::runtime
