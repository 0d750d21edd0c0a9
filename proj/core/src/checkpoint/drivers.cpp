#include "twinrank/checkpoint/drivers.hpp"

#include <cstdint>
#include <optional>

#include "twinrank/checkpoint/app_level.hpp"
#include "twinrank/checkpoint/system_level.hpp"

namespace twinrank::checkpoint {

namespace {

/// Forwards to a real policy and reports the quiescent point afterwards.
class ObservedPolicy final : public runtime::CheckpointPolicy {
 public:
  ObservedPolicy(runtime::CheckpointPolicy& inner, const std::function<void()>& observer)
      : inner_(inner), observer_(observer) {}

  std::optional<runtime::DetectionEvent> on_checkpoint(runtime::Run& run,
                                                       const runtime::Stage& stage) override {
    auto r = inner_.on_checkpoint(run, stage);
    if (observer_) observer_();
    return r;
  }

 private:
  runtime::CheckpointPolicy& inner_;
  const std::function<void()>& observer_;
};

/// Shared restart loop. `restart` picks where the next segment starts and
/// returns its label.
template <typename Restart>
runtime::RunReport drive(const DriverConfig& cfg, RunDirectory& dir,
                         runtime::CheckpointPolicy& policy, Restart restart) {
  ObservedPolicy observed(policy, cfg.on_quiescent);
  runtime::RunReport report;
  std::optional<runtime::Run> run;
  run.emplace(cfg.app, cfg.options);
  std::uint32_t restarts = 0;

  while (true) {
    run->set_fault_hook(cfg.fault);
    run->set_checkpoint_policy(&observed);
    runtime::StageResult r = run->run_to_end();
    const std::uint64_t base = report.steps;
    report.steps += run->steps_executed();
    report.deliveries.insert(report.deliveries.end(), run->deliveries().begin(),
                             run->deliveries().end());
    if (cfg.on_quiescent) cfg.on_quiescent();

    if (r.status == runtime::StageStatus::kCompleted) {
      report.outcome.status =
          restarts > 0 ? runtime::RunStatus::kRecovered : runtime::RunStatus::kCompletedValid;
      report.outcome.restarts_used = restarts;
      report.result = run->result_bytes();
      return report;
    }

    runtime::DetectionEvent ev = *r.detection;
    ev.step += base;
    report.events.push_back(ev);
    dir.append_event(ev);
    if (!report.outcome.detection) report.outcome.detection = ev;

    RunLedger ledger = dir.load_ledger();
    ++ledger.failures;
    ++ledger.extern_counter;
    dir.store_ledger(ledger);

    if (restarts == cfg.max_restarts) {
      report.outcome.status = runtime::RunStatus::kHaltedOnDetection;
      report.outcome.restarts_used = restarts;
      return report;
    }
    ++restarts;
    report.resumed_from = restart(run, ledger);
  }
}

}  // namespace

runtime::RunReport multi_ckpt_recovery_driver(const DriverConfig& cfg, RunDirectory& dir) {
  SystemCheckpointPolicy policy(dir);
  return drive(cfg, dir, policy, [&](std::optional<runtime::Run>& run, const RunLedger& ledger) {
    const auto chain = static_cast<std::int64_t>(dir.system_count());
    const std::int64_t ckpt_no = chain - static_cast<std::int64_t>(ledger.extern_counter);
    if (ckpt_no < 0) {
      run.emplace(cfg.app, cfg.options);
      return std::string("BEGIN");
    }
    run.emplace(restore_system_checkpoint(cfg.app, cfg.options, dir,
                                          static_cast<std::uint32_t>(ckpt_no)));
    return cfg.app->checkpoint_stages().at(static_cast<std::size_t>(ckpt_no)).label;
  });
}

runtime::RunReport single_ckpt_recovery_driver(const DriverConfig& cfg, RunDirectory& dir) {
  AppCheckpointPolicy policy(dir);
  return drive(cfg, dir, policy, [&](std::optional<runtime::Run>& run, const RunLedger&) {
    auto image = dir.read_app_image();
    if (!image) {
      run.emplace(cfg.app, cfg.options);
      return std::string("BEGIN");
    }
    run.emplace(restore_app_image(cfg.app, cfg.options, *image));
    return cfg.app->stage(image->ranks.front().stage_ordinal).id.label;
  });
}

}  // namespace twinrank::checkpoint
