#include "twinrank/faults/injector.hpp"

namespace twinrank::faults {

InjectResult inject(const InjectionPoint& point, State& target, checkpoint::LedgerStore& ledger) {
  checkpoint::RunLedger l = ledger.load_ledger();
  if (l.injected) return InjectResult::kSkipped;
  apply_mutation(target, point.field, point.index, point.mutation, point.bit);
  l.injected = true;
  ledger.store_ledger(l);
  return InjectResult::kInjected;
}

FaultInjector::FaultInjector(InjectionPoint point, checkpoint::LedgerStore& ledger)
    : point_(std::move(point)), ledger_(ledger) {}

void FaultInjector::fire(runtime::Run& run) {
  std::lock_guard lock(mu_);
  ++reached_;
  auto& pair = run.pair(point_.target_rank);
  State& target = pair.strands.at(point_.strand);
  if (inject(point_, target, ledger_) == InjectResult::kInjected) {
    ++injected_;
    // Without copy-on-receive the strands share received buffers, so the
    // corruption is visible to both.
    if (run.aliases_received(point_.target_rank, point_.field)) {
      for (std::size_t s = 0; s < pair.strands.size(); ++s) {
        if (s != point_.strand) {
          apply_mutation(pair.strands[s], point_.field, point_.index, point_.mutation, point_.bit);
        }
      }
    }
  }
}

void FaultInjector::before_stage(runtime::Run& run, const runtime::Stage& stage) {
  if (point_.at_step || stage.id.ordinal != point_.stage_ordinal) return;
  fire(run);
}

void FaultInjector::at_step(runtime::Run& run, const runtime::Stage& stage, Rank rank,
                            std::size_t strand, std::uint64_t completed, State&) {
  if (!point_.at_step || stage.id.ordinal != point_.stage_ordinal) return;
  if (rank != point_.trigger_rank || strand != point_.strand || completed != *point_.at_step) return;
  fire(run);
}

}  // namespace twinrank::faults
