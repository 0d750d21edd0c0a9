#pragma once

#include <cstdint>
#include <memory>

#include "twinrank/checkpoint/image.hpp"
#include "twinrank/checkpoint/run_directory.hpp"
#include "twinrank/runtime/engine.hpp"

namespace twinrank::checkpoint {

/// Snapshot of every strand of every rank, corruption included.
CheckpointImage capture_system_image(const runtime::Run& run, std::uint32_t seq);

/// Captures at the current stage boundary and writes slot `seq`,
/// overwriting a previous image in that slot.
CheckpointImage take_system_checkpoint(runtime::Run& run, RunDirectory& dir, std::uint32_t seq);

/// Rebuilds a run from an image; execution resumes after the checkpoint stage.
runtime::Run restore_system_image(std::shared_ptr<const runtime::App> app,
                                  const runtime::RunOptions& options,
                                  const CheckpointImage& image);

/// Throws MissingCheckpoint when slot `seq` is empty.
runtime::Run restore_system_checkpoint(std::shared_ptr<const runtime::App> app,
                                       const runtime::RunOptions& options,
                                       const RunDirectory& dir, std::uint32_t seq);

/// Checkpoint stages write system images numbered by checkpoint index.
class SystemCheckpointPolicy final : public runtime::CheckpointPolicy {
 public:
  explicit SystemCheckpointPolicy(RunDirectory& dir) : dir_(dir) {}
  std::optional<runtime::DetectionEvent> on_checkpoint(runtime::Run& run,
                                                       const runtime::Stage& stage) override;

 private:
  RunDirectory& dir_;
};

}  // namespace twinrank::checkpoint
