#pragma once

#include <cstddef>
#include <cstdint>
#include <deque>
#include <optional>
#include <vector>

#include "twinrank/core/types.hpp"

namespace twinrank::runtime {

/// Per-destination FIFO queues of validated envelopes.
class Mailbox {
 public:
  explicit Mailbox(std::uint32_t nranks);

  void enqueue(MessageEnvelope envelope);
  /// Removes the oldest envelope for `dst` matching src and tag.
  std::optional<MessageEnvelope> dequeue(Rank dst, Rank src, int tag);

  const std::deque<MessageEnvelope>& queue(Rank dst) const { return queues_.at(dst.id); }
  std::size_t pending() const noexcept;
  /// Discards everything in flight; returns the number of envelopes dropped.
  std::size_t drain() noexcept;

 private:
  std::vector<std::deque<MessageEnvelope>> queues_;
};

/// Audit record of one envelope reaching a destination queue.
struct DeliveryRecord {
  std::uint32_t stage = 0;
  Rank src;
  Rank dst;
  int tag = 0;
  Digest64 digest;
};

}  // namespace twinrank::runtime
