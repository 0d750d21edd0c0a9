#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "twinrank/runtime/events.hpp"
#include "twinrank/runtime/mailbox.hpp"
#include "twinrank/runtime/program.hpp"
#include "twinrank/runtime/replica.hpp"

namespace twinrank::runtime {

enum class ScheduleMode {
  /// Single thread, strand steps ordered by a seeded shuffle per round.
  kInterleaved,
  /// One thread per strand during compute stages.
  kDualStrand,
};

/// Deliberate protocol defects, used to check that the conformance suite
/// notices them. Interleaved mode only.
struct Mutations {
  /// Strands share received buffers instead of copying them.
  bool skip_copy_on_receive = false;
  /// System checkpoints store the first strand's state for every strand.
  bool drop_dirty_state = false;
};

struct RunOptions {
  ScheduleMode mode = ScheduleMode::kInterleaved;
  std::uint64_t seed = 0;
  /// Tolerated step divergence between strands at a rendezvous.
  std::uint64_t toe_budget = 0;
  /// 2 for protected runs, 1 for the unreplicated reference.
  std::uint32_t replication = 2;
  Mutations mutations;
};

class Run;

/// Interception points for fault injection.
class FaultHook {
 public:
  virtual ~FaultHook() = default;
  /// Called before stage `stage` starts, between it and its predecessor.
  virtual void before_stage(Run& run, const Stage& stage) = 0;
  /// Called before each step attempt of a compute stage; `completed` counts
  /// the steps this strand has finished in the stage.
  virtual void at_step(Run& run, const Stage& stage, Rank rank, std::size_t strand,
                       std::uint64_t completed, State& state) = 0;
};

/// Decides what a checkpoint stage does. A returned event rejects the
/// checkpoint and stops the segment.
class CheckpointPolicy {
 public:
  virtual ~CheckpointPolicy() = default;
  virtual std::optional<DetectionEvent> on_checkpoint(Run& run, const Stage& stage) = 0;
};

enum class StageStatus { kContinue, kDetected, kCompleted };

struct StageResult {
  StageStatus status = StageStatus::kContinue;
  std::optional<DetectionEvent> detection;
};

/// One execution segment of an application under replication.
class Run {
 public:
  Run(std::shared_ptr<const App> app, RunOptions options);

  Run(Run&&) noexcept = default;
  Run& operator=(Run&&) noexcept = default;
  Run(const Run&) = delete;
  Run& operator=(const Run&) = delete;

  const App& app() const noexcept { return *app_; }
  const std::shared_ptr<const App>& app_ptr() const noexcept { return app_; }
  const RunOptions& options() const noexcept { return options_; }

  std::span<ReplicaPair> pairs() noexcept { return pairs_; }
  std::span<const ReplicaPair> pairs() const noexcept { return pairs_; }
  ReplicaPair& pair(Rank rank) { return pairs_.at(rank.id); }
  const ReplicaPair& pair(Rank rank) const { return pairs_.at(rank.id); }

  /// Ordinal of the next stage to execute.
  std::uint32_t cursor() const noexcept { return cursor_; }
  /// Resumes at `ordinal` (used by restore). Resets step counters.
  void seek(std::uint32_t ordinal);

  bool finished() const noexcept { return completed_; }
  bool halted() const noexcept { return halted_; }

  void set_fault_hook(FaultHook* hook) noexcept { fault_hook_ = hook; }
  void set_checkpoint_policy(CheckpointPolicy* policy) noexcept { policy_ = policy; }

  /// Executes the stage at the cursor. After a detection the run is halted
  /// and in-flight messages are discarded.
  StageResult step_stage();
  /// Steps until validation passes or a detection halts the run.
  StageResult run_to_end();

  Mailbox& mailbox() noexcept { return mailbox_; }
  const Mailbox& mailbox() const noexcept { return mailbox_; }
  const std::vector<DeliveryRecord>& deliveries() const noexcept { return deliveries_; }

  /// Total strand steps executed by this segment.
  std::uint64_t steps_executed() const noexcept { return steps_total_; }
  /// Fold of the interleaved strand schedule; 0 in dual-strand mode.
  std::uint64_t schedule_digest() const noexcept { return schedule_digest_; }

  /// Canonical encoding of the validated result fields from the first strand.
  Bytes result_bytes() const;

  /// True when `field` of `rank` was last written by a receive and
  /// copy-on-receive is mutated away (strands alias it).
  bool aliases_received(Rank rank, const std::string& field) const;

 private:
  StageResult run_compute(const Stage& stage);
  StageResult run_exchange(const Stage& stage);
  StageResult run_validate(const Stage& stage);
  std::optional<DetectionEvent> rendezvous_all(const Stage& stage);
  DetectionEvent make_event(DetectionKind kind, Rank rank, const Stage& stage,
                            std::uint64_t detail) const;
  StageResult halt(DetectionEvent event);
  void compute_interleaved(const Stage& stage);
  void compute_dual(const Stage& stage);

  std::shared_ptr<const App> app_;
  RunOptions options_;
  std::vector<ReplicaPair> pairs_;
  Mailbox mailbox_;
  std::vector<DeliveryRecord> deliveries_;
  std::set<std::pair<std::uint32_t, std::string>> aliased_;
  std::uint32_t cursor_ = 0;
  bool completed_ = false;
  bool halted_ = false;
  std::uint64_t steps_total_ = 0;
  std::uint64_t schedule_digest_ = 0;
  FaultHook* fault_hook_ = nullptr;
  CheckpointPolicy* policy_ = nullptr;
};

/// Outcome of a whole strategy execution, possibly spanning restarts.
struct RunReport {
  RunOutcome outcome;
  std::vector<DetectionEvent> events;
  /// Checkpoint label the final segment resumed from, "BEGIN" for a
  /// relaunch from scratch, "NONE" without restarts.
  std::string resumed_from = "NONE";
  /// Result bytes of the final segment; empty when halted.
  Bytes result;
  std::uint64_t steps = 0;
  std::vector<DeliveryRecord> deliveries;
};

/// Detection with safe-stop: runs once, halts at the first detection.
RunReport run_detect_only(std::shared_ptr<const App> app, const RunOptions& options,
                          FaultHook* fault = nullptr);

/// Unreplicated single-strand execution.
RunReport run_reference(std::shared_ptr<const App> app, const RunOptions& options);

}  // namespace twinrank::runtime
