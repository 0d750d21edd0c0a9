#include "twinrank/runtime/mailbox.hpp"

#include <algorithm>

namespace twinrank::runtime {

Mailbox::Mailbox(std::uint32_t nranks) : queues_(nranks) {}

void Mailbox::enqueue(MessageEnvelope envelope) {
  queues_.at(envelope.dst.id).push_back(std::move(envelope));
}

std::optional<MessageEnvelope> Mailbox::dequeue(Rank dst, Rank src, int tag) {
  auto& q = queues_.at(dst.id);
  auto it = std::find_if(q.begin(), q.end(), [&](const MessageEnvelope& e) {
    return e.src == src && e.tag == tag;
  });
  if (it == q.end()) return std::nullopt;
  MessageEnvelope out = std::move(*it);
  q.erase(it);
  return out;
}

std::size_t Mailbox::pending() const noexcept {
  std::size_t n = 0;
  for (const auto& q : queues_) n += q.size();
  return n;
}

std::size_t Mailbox::drain() noexcept {
  std::size_t n = pending();
  for (auto& q : queues_) q.clear();
  return n;
}

}  // namespace twinrank::runtime
