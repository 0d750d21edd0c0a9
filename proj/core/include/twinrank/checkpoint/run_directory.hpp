#pragma once

#include <cstdint>
#include <filesystem>
#include <mutex>
#include <optional>
#include <vector>

#include "twinrank/checkpoint/image.hpp"
#include "twinrank/core/errors.hpp"
#include "twinrank/runtime/events.hpp"

namespace twinrank::checkpoint {

/// Restart-surviving control data. Never stored inside an image.
struct RunLedger {
  bool injected = false;
  std::uint64_t failures = 0;
  std::uint64_t extern_counter = 0;

  friend bool operator==(const RunLedger&, const RunLedger&) = default;
};

class MissingCheckpoint : public StorageError {
 public:
  using StorageError::StorageError;
};

class LedgerStore {
 public:
  virtual ~LedgerStore() = default;
  /// A store that was never written reads as a default ledger.
  virtual RunLedger load_ledger() = 0;
  virtual void store_ledger(const RunLedger& ledger) = 0;
};

class MemoryLedgerStore final : public LedgerStore {
 public:
  RunLedger load_ledger() override;
  void store_ledger(const RunLedger& ledger) override;

 private:
  std::mutex mu_;
  RunLedger ledger_;
};

/// Files of one run: ckpt_sys_<seq>.bin, ckpt_app_current.bin, ledger.json,
/// events.jsonl.
class RunDirectory final : public LedgerStore {
 public:
  /// Creates the directory when missing.
  explicit RunDirectory(std::filesystem::path root);

  const std::filesystem::path& root() const noexcept { return root_; }

  /// Removes every artifact this class and the CLI write, nothing else.
  void reset();

  RunLedger load_ledger() override;
  void store_ledger(const RunLedger& ledger) override;

  std::filesystem::path system_image_path(std::uint32_t seq) const;
  void write_system_image(const CheckpointImage& image);
  /// Throws MissingCheckpoint when the slot is empty.
  CheckpointImage read_system_image(std::uint32_t seq) const;
  std::vector<std::uint32_t> system_seqs() const;
  std::uint32_t system_count() const { return static_cast<std::uint32_t>(system_seqs().size()); }

  std::filesystem::path app_image_path() const;
  /// Atomically replaces the current application image.
  void replace_app_image(const CheckpointImage& image);
  std::optional<CheckpointImage> read_app_image() const;
  /// Number of application image files present, including stray temporaries.
  std::size_t app_image_count() const;

  void append_event(const runtime::DetectionEvent& event);
  std::vector<runtime::DetectionEvent> read_events() const;

 private:
  void write_atomic(const std::filesystem::path& path, std::span<const std::uint8_t> bytes);

  std::filesystem::path root_;
  std::mutex mu_;
};

}  // namespace twinrank::checkpoint
