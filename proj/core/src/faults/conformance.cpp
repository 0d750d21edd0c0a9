#include "twinrank/faults/conformance.hpp"

#include <string>

#include "twinrank/apps/matmul.hpp"
#include "twinrank/checkpoint/drivers.hpp"
#include "twinrank/faults/injector.hpp"

namespace twinrank::faults {

std::string_view to_string(Strategy s) noexcept {
  switch (s) {
    case Strategy::kDetect: return "detect";
    case Strategy::kMultiCkpt: return "multi-ckpt";
    case Strategy::kSingleCkpt: return "single-ckpt";
  }
  return "?";
}

ScenarioPrediction observe(const runtime::RunReport& report) {
  ScenarioPrediction p;
  if (!report.events.empty()) {
    const auto& first = report.events.front();
    switch (first.kind) {
      case runtime::DetectionKind::kSdcMismatch: p.effect = Effect::kTDC; break;
      case runtime::DetectionKind::kFinalMismatch: p.effect = Effect::kFSC; break;
      case runtime::DetectionKind::kToeTimeout: p.effect = Effect::kTOE; break;
    }
    p.p_det = first.stage.label;
  }
  p.p_rec = report.resumed_from;
  p.n_roll = report.outcome.restarts_used;
  return p;
}

ScenarioObservation run_scenario(const Scenario& scenario, Strategy strategy,
                                 const ScenarioHarness& harness, const Bytes& reference_result) {
  auto app = apps::make_app(harness.app);
  auto matmul = std::dynamic_pointer_cast<const apps::MatmulApp>(app);
  if (!matmul) throw ConfigError("scenarios target the matmul app");
  const InjectionPoint point = resolve(scenario.spec, *matmul);

  checkpoint::RunDirectory dir(harness.work_dir / ("scenario_" + std::to_string(scenario.spec.scenario_id) +
                                                   "_" + std::string(to_string(strategy))));
  dir.reset();
  FaultInjector injector(point, dir);

  ScenarioObservation obs;
  checkpoint::DriverConfig cfg{app, harness.options, &injector, 32, {}};
  switch (strategy) {
    case Strategy::kDetect:
      obs.report = runtime::run_detect_only(app, harness.options, &injector);
      for (const auto& e : obs.report.events) dir.append_event(e);
      break;
    case Strategy::kMultiCkpt:
      obs.report = checkpoint::multi_ckpt_recovery_driver(cfg, dir);
      break;
    case Strategy::kSingleCkpt:
      obs.report = checkpoint::single_ckpt_recovery_driver(cfg, dir);
      break;
  }
  obs.observed = observe(obs.report);
  obs.injections = injector.injected();
  obs.result_matches_reference = !obs.report.result.empty() && obs.report.result == reference_result;
  return obs;
}

bool conforms(const ScenarioPrediction& predicted, const ScenarioObservation& obs, Strategy strategy) {
  if (obs.injections != 1) return false;
  const bool halted = obs.report.outcome.status == runtime::RunStatus::kHaltedOnDetection;
  const bool latent = predicted.effect == Effect::kLE;
  switch (strategy) {
    case Strategy::kMultiCkpt:
      return obs.observed == predicted && !halted && obs.result_matches_reference;
    case Strategy::kDetect:
      if (obs.observed.effect != predicted.effect || obs.observed.p_det != predicted.p_det) return false;
      return latent ? (!halted && obs.result_matches_reference) : halted;
    case Strategy::kSingleCkpt:
      // Checkpoint digests may catch the fault earlier than predicted; what
      // matters is one rollback for a harmful fault and none otherwise.
      return !halted && obs.result_matches_reference &&
             obs.observed.n_roll == (latent ? 0u : 1u) && obs.report.events.empty() == latent;
  }
  return false;
}

}  // namespace twinrank::faults
