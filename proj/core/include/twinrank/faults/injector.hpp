#pragma once

#include <atomic>
#include <mutex>

#include "twinrank/checkpoint/run_directory.hpp"
#include "twinrank/faults/fault_spec.hpp"
#include "twinrank/runtime/engine.hpp"

namespace twinrank::faults {

enum class InjectResult { kInjected, kSkipped };

/// One-shot corruption of `target` guarded by the ledger: the first call in
/// a run directory flips and records it; every later call is skipped.
InjectResult inject(const InjectionPoint& point, State& target, checkpoint::LedgerStore& ledger);

/// Engine hook that fires `inject` at the point's window.
class FaultInjector final : public runtime::FaultHook {
 public:
  FaultInjector(InjectionPoint point, checkpoint::LedgerStore& ledger);

  void before_stage(runtime::Run& run, const runtime::Stage& stage) override;
  void at_step(runtime::Run& run, const runtime::Stage& stage, Rank rank, std::size_t strand,
               std::uint64_t completed, State& state) override;

  const InjectionPoint& point() const noexcept { return point_; }
  /// Times the window was reached, and times it actually corrupted data.
  int reached() const noexcept { return reached_.load(); }
  int injected() const noexcept { return injected_.load(); }

 private:
  void fire(runtime::Run& run);

  InjectionPoint point_;
  checkpoint::LedgerStore& ledger_;
  std::mutex mu_;
  std::atomic<int> reached_{0};
  std::atomic<int> injected_{0};
};

}  // namespace twinrank::faults
