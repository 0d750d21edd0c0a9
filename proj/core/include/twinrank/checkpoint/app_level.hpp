#pragma once

#include <cstddef>
#include <memory>

#include "twinrank/checkpoint/image.hpp"
#include "twinrank/checkpoint/run_directory.hpp"
#include "twinrank/runtime/engine.hpp"

namespace twinrank::checkpoint {

enum class AppCheckpointResult { kValidStored, kCorruptedDiscarded };

struct AppCheckpointOutcome {
  AppCheckpointResult result = AppCheckpointResult::kValidStored;
  /// Set when discarded: first rank whose strand digests differ and the
  /// first differing byte of its significant-variable encodings.
  Rank rank;
  std::size_t offset = 0;
};

/// Snapshots the significant variables of every strand and compares their
/// digests per rank. Equal: the image (first strand plus digest) replaces
/// the previous one. Different: nothing is written.
AppCheckpointOutcome take_app_checkpoint(const runtime::Run& run, const runtime::Stage& stage,
                                         RunDirectory& dir);

/// Fresh initial state with the saved significant variables written over it.
runtime::Run restore_app_image(std::shared_ptr<const runtime::App> app,
                               const runtime::RunOptions& options, const CheckpointImage& image);

class AppCheckpointPolicy final : public runtime::CheckpointPolicy {
 public:
  explicit AppCheckpointPolicy(RunDirectory& dir) : dir_(dir) {}
  std::optional<runtime::DetectionEvent> on_checkpoint(runtime::Run& run,
                                                       const runtime::Stage& stage) override;

 private:
  RunDirectory& dir_;
};

}  // namespace twinrank::checkpoint
