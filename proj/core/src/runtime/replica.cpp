#include "twinrank/runtime/replica.hpp"

#include <algorithm>
#include <stdexcept>

#include "twinrank/core/digest.hpp"
#include "twinrank/core/encoding.hpp"

namespace twinrank::runtime {

SendOutcome validated_send(const ReplicaPair& pair, const PayloadBuilder& build, Rank dst,
                           int tag, Mailbox& mailbox) {
  Bytes first = canonical_encode(build(pair.strands.front()));
  for (std::size_t s = 1; s < pair.strands.size(); ++s) {
    Bytes other = canonical_encode(build(pair.strands[s]));
    if (auto off = first_difference(first, other)) {
      return SendOutcome{false, *off, {}};
    }
  }
  SendOutcome out{true, 0, hash64(first)};
  mailbox.enqueue(MessageEnvelope{pair.rank, dst, tag, std::move(first)});
  return out;
}

void replicated_recv(ReplicaPair& pair, Rank src, int tag, const State& schema,
                     const PayloadAcceptor& accept, Mailbox& mailbox) {
  auto env = mailbox.dequeue(pair.rank, src, tag);
  if (!env) {
    throw std::logic_error("no pending message for rank " + std::to_string(pair.rank.id) +
                           " from " + std::to_string(src.id));
  }
  // Each strand decodes its own copy so the strands never share a buffer.
  for (auto& strand : pair.strands) {
    State copy = canonical_decode(env->payload, schema);
    accept(strand, copy);
  }
}

std::optional<std::uint64_t> rendezvous(const ReplicaPair& pair, std::uint64_t budget) noexcept {
  if (pair.strands.size() < 2) return std::nullopt;
  auto [lo, hi] = std::minmax(pair.steps[0], pair.steps[1]);
  std::uint64_t divergence = hi - lo;
  if (divergence > budget) return divergence - budget;
  return std::nullopt;
}

std::optional<std::size_t> validate_final(const ReplicaPair& pair,
                                          std::span<const std::string> fields) {
  Bytes first = canonical_encode(pair.strands.front().select(fields));
  for (std::size_t s = 1; s < pair.strands.size(); ++s) {
    Bytes other = canonical_encode(pair.strands[s].select(fields));
    if (auto off = first_difference(first, other)) return off;
  }
  return std::nullopt;
}

}  // namespace twinrank::runtime
