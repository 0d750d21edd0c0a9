#pragma once

#include <cstdint>
#include <functional>
#include <memory>

#include "twinrank/checkpoint/run_directory.hpp"
#include "twinrank/runtime/engine.hpp"

namespace twinrank::checkpoint {

struct DriverConfig {
  std::shared_ptr<const runtime::App> app;
  runtime::RunOptions options;
  runtime::FaultHook* fault = nullptr;
  /// Gives up with HALTED_ON_DETECTION after this many restarts.
  std::uint32_t max_restarts = 32;
  /// Called after every checkpoint stage and at the end of each segment.
  std::function<void()> on_quiescent;
};

/// Multiple system-level checkpoints: on each detection the external
/// counter grows and the run restarts from checkpoint
/// (chain length - counter), or from the beginning when that is negative.
runtime::RunReport multi_ckpt_recovery_driver(const DriverConfig& config, RunDirectory& dir);

/// Single validated application-level checkpoint: on detection, restart
/// from the current image, or from the beginning when there is none.
runtime::RunReport single_ckpt_recovery_driver(const DriverConfig& config, RunDirectory& dir);

}  // namespace twinrank::checkpoint
