#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "twinrank/core/state.hpp"
#include "twinrank/core/types.hpp"

namespace twinrank::runtime {

enum class StageKind { kCheckpoint, kCompute, kExchange, kValidate };

/// Resumable loop executed independently by every strand of `ranks`.
/// `step` performs one unit of work and returns false once nothing is left.
struct ComputeKernel {
  std::vector<Rank> ranks;
  std::function<void(Rank, State&)> begin;
  std::function<bool(Rank, State&)> step;
  std::function<void(Rank, State&)> finish;
  /// Fault-free number of steps for a rank; sizes the runaway guard.
  std::function<std::uint64_t(Rank)> step_bound;
};

/// Point-to-point message of an exchange stage. Payload field names match
/// the destination fields that `accept` writes.
struct Transfer {
  Rank src;
  Rank dst;
  int tag = 0;
  std::function<State(const State&)> build;
  std::function<void(State&, const State&)> accept;
  State schema;
};

struct ResultSpec {
  Rank rank;
  std::vector<std::string> fields;
};

struct Stage {
  StageId id;
  StageKind kind = StageKind::kCheckpoint;
  ComputeKernel compute;
  std::vector<Transfer> transfers;
  std::vector<ResultSpec> results;
};

/// A deterministic stage program over a fixed number of ranks.
class App {
 public:
  virtual ~App() = default;

  virtual std::string_view name() const = 0;
  virtual std::uint32_t rank_count() const = 0;
  virtual const std::vector<Stage>& stages() const = 0;
  virtual State initial_state(Rank rank) const = 0;
  /// Fields of `rank` saved by an application-level checkpoint at `ckpt`.
  virtual std::vector<std::string> significant_fields(Rank rank, const StageId& ckpt) const = 0;

  const Stage& stage(std::uint32_t ordinal) const { return stages().at(ordinal); }
  const Stage* find_stage(std::string_view label) const;
  std::vector<StageId> checkpoint_stages() const;
  /// Position of a checkpoint stage within the checkpoint sequence.
  std::optional<std::uint32_t> checkpoint_index(std::uint32_t ordinal) const;
  /// Result variables checked by the validation stage.
  std::vector<ResultSpec> result_schema() const;
};

}  // namespace twinrank::runtime
