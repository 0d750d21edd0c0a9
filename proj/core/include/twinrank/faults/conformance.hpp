#pragma once

#include <filesystem>
#include <memory>
#include <string>
#include <vector>

#include "twinrank/apps/app_config.hpp"
#include "twinrank/faults/fault_spec.hpp"
#include "twinrank/runtime/engine.hpp"

namespace twinrank::faults {

enum class Strategy { kDetect, kMultiCkpt, kSingleCkpt };

std::string_view to_string(Strategy s) noexcept;

/// What a scenario run actually did, in prediction terms.
struct ScenarioObservation {
  ScenarioPrediction observed;
  runtime::RunReport report;
  int injections = 0;
  /// Final result equals the fault-free reference (false when halted).
  bool result_matches_reference = false;
};

struct ScenarioHarness {
  /// Matmul configuration; the conformance default is N=64 over 5 ranks.
  apps::AppConfig app{.name = "matmul", .size = 64, .nranks = 5};
  runtime::RunOptions options;
  /// Scratch root; each run uses a fresh subdirectory.
  std::filesystem::path work_dir;
};

ScenarioPrediction observe(const runtime::RunReport& report);

/// Runs one scenario from a clean run directory.
ScenarioObservation run_scenario(const Scenario& scenario, Strategy strategy,
                                 const ScenarioHarness& harness, const Bytes& reference_result);

/// Whether an observation conforms: full tuple for the recovery strategies;
/// for detect-only, effect and detection stage, with a halt exactly when
/// something was detected.
bool conforms(const ScenarioPrediction& predicted, const ScenarioObservation& obs, Strategy strategy);

}  // namespace twinrank::faults
