#include "twinrank/runtime/engine.hpp"

#include <atomic>
#include <stdexcept>
#include <thread>

#include "twinrank/core/digest.hpp"
#include "twinrank/core/encoding.hpp"
#include "twinrank/core/rng.hpp"

namespace twinrank::runtime {

namespace {

struct Unit {
  Rank rank;
  std::size_t strand = 0;
  std::uint64_t done = 0;
  std::uint64_t cap = 0;
  bool active = true;
};

std::uint64_t runaway_cap(const ComputeKernel& k, Rank r, std::uint64_t budget) {
  std::uint64_t bound = k.step_bound ? k.step_bound(r) : 0;
  return 2 * bound + budget + 1;
}

}  // namespace

Run::Run(std::shared_ptr<const App> app, RunOptions options)
    : app_(std::move(app)), options_(options), mailbox_(app_->rank_count()) {
  if (options_.replication < 1 || options_.replication > kMaxStrands) {
    throw std::invalid_argument("replication must be 1 or 2");
  }
  pairs_.reserve(app_->rank_count());
  for (std::uint32_t r = 0; r < app_->rank_count(); ++r) {
    ReplicaPair p;
    p.rank = Rank{r};
    p.strands.assign(options_.replication, app_->initial_state(Rank{r}));
    pairs_.push_back(std::move(p));
  }
}

void Run::seek(std::uint32_t ordinal) {
  if (ordinal > app_->stages().size()) throw std::out_of_range("stage ordinal beyond program");
  cursor_ = ordinal;
  completed_ = false;
  halted_ = false;
  for (auto& p : pairs_) p.steps = {};
}

DetectionEvent Run::make_event(DetectionKind kind, Rank rank, const Stage& stage,
                               std::uint64_t detail) const {
  return DetectionEvent{kind, rank, stage.id, detail, steps_total_};
}

StageResult Run::halt(DetectionEvent event) {
  halted_ = true;
  mailbox_.drain();
  return StageResult{StageStatus::kDetected, std::move(event)};
}

std::optional<DetectionEvent> Run::rendezvous_all(const Stage& stage) {
  for (auto& p : pairs_) {
    if (auto deficit = rendezvous(p, options_.toe_budget)) {
      return make_event(DetectionKind::kToeTimeout, p.rank, stage, *deficit);
    }
  }
  for (auto& p : pairs_) p.steps = {};
  return std::nullopt;
}

StageResult Run::step_stage() {
  if (halted_) throw std::logic_error("run halted on detection");
  if (completed_ || cursor_ >= app_->stages().size()) {
    throw std::logic_error("run already completed");
  }
  const Stage& stage = app_->stage(cursor_);
  if (fault_hook_) fault_hook_->before_stage(*this, stage);

  StageResult result;
  switch (stage.kind) {
    case StageKind::kCompute:
      result = run_compute(stage);
      break;
    case StageKind::kExchange:
      result = run_exchange(stage);
      break;
    case StageKind::kCheckpoint:
      if (auto toe = rendezvous_all(stage)) return halt(*toe);
      if (policy_) {
        if (auto rejected = policy_->on_checkpoint(*this, stage)) return halt(*rejected);
      }
      break;
    case StageKind::kValidate:
      result = run_validate(stage);
      break;
  }
  if (result.status == StageStatus::kDetected) return result;
  ++cursor_;
  if (result.status == StageStatus::kCompleted || cursor_ == app_->stages().size()) {
    completed_ = true;
    result.status = StageStatus::kCompleted;
  }
  return result;
}

StageResult Run::run_to_end() {
  StageResult r;
  while (!completed_) {
    r = step_stage();
    if (r.status == StageStatus::kDetected) return r;
  }
  r.status = StageStatus::kCompleted;
  return r;
}

StageResult Run::run_compute(const Stage& stage) {
  if (options_.mode == ScheduleMode::kDualStrand && options_.replication > 1) {
    compute_dual(stage);
  } else {
    compute_interleaved(stage);
  }
  return {};
}

void Run::compute_interleaved(const Stage& stage) {
  const ComputeKernel& k = stage.compute;
  std::vector<Unit> units;
  for (Rank r : k.ranks) {
    for (std::size_t s = 0; s < pairs_[r.id].strands.size(); ++s) {
      units.push_back(Unit{r, s, 0, runaway_cap(k, r, options_.toe_budget), true});
      if (k.begin) k.begin(r, pairs_[r.id].strands[s]);
    }
  }
  Xorshift64Star rng(derive_seed(options_.seed, stage.id.ordinal));
  std::vector<std::size_t> order(units.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;

  std::size_t active = units.size();
  while (active > 0) {
    for (std::size_t i = order.size(); i > 1; --i) {
      std::swap(order[i - 1], order[rng.below(i)]);
    }
    for (std::size_t idx : order) {
      Unit& u = units[idx];
      if (!u.active) continue;
      ReplicaPair& p = pairs_[u.rank.id];
      State& st = p.strands[u.strand];
      if (fault_hook_) fault_hook_->at_step(*this, stage, u.rank, u.strand, u.done, st);
      if (!k.step(u.rank, st)) {
        if (k.finish) k.finish(u.rank, st);
        u.active = false;
        --active;
        continue;
      }
      ++u.done;
      ++p.steps[u.strand];
      ++steps_total_;
      const std::uint64_t tag = (std::uint64_t{u.rank.id} << 1) | u.strand;
      schedule_digest_ = hash64_continue(
          Digest64{schedule_digest_ ? schedule_digest_ : kFnvOffsetBasis},
          std::span(reinterpret_cast<const std::uint8_t*>(&tag), sizeof tag)).value;
      if (u.done > u.cap) {
        u.active = false;
        --active;
      }
    }
  }
}

void Run::compute_dual(const Stage& stage) {
  const ComputeKernel& k = stage.compute;
  std::vector<Unit> units;
  for (Rank r : k.ranks) {
    for (std::size_t s = 0; s < pairs_[r.id].strands.size(); ++s) {
      units.push_back(Unit{r, s, 0, runaway_cap(k, r, options_.toe_budget), true});
    }
  }
  {
    std::vector<std::jthread> threads;
    threads.reserve(units.size());
    for (Unit& u : units) {
      threads.emplace_back([this, &stage, &k, &u] {
        State& st = pairs_[u.rank.id].strands[u.strand];
        if (k.begin) k.begin(u.rank, st);
        while (true) {
          if (fault_hook_) fault_hook_->at_step(*this, stage, u.rank, u.strand, u.done, st);
          if (!k.step(u.rank, st)) {
            if (k.finish) k.finish(u.rank, st);
            break;
          }
          if (++u.done > u.cap) break;
        }
      });
    }
  }
  for (const Unit& u : units) {
    pairs_[u.rank.id].steps[u.strand] += u.done;
    steps_total_ += u.done;
  }
}

StageResult Run::run_exchange(const Stage& stage) {
  if (auto toe = rendezvous_all(stage)) return halt(*toe);
  // All sends are validated before any receive; a mismatch stops the stage
  // with nothing from the faulty pair in any queue.
  for (const Transfer& t : stage.transfers) {
    ReplicaPair& src = pairs_.at(t.src.id);
    SendOutcome out = validated_send(src, t.build, t.dst, t.tag, mailbox_);
    if (!out.sent) {
      return halt(make_event(DetectionKind::kSdcMismatch, t.src, stage, out.mismatch_offset));
    }
    deliveries_.push_back(DeliveryRecord{stage.id.ordinal, t.src, t.dst, t.tag, out.digest});
  }
  for (const Transfer& t : stage.transfers) {
    replicated_recv(pairs_.at(t.dst.id), t.src, t.tag, t.schema, t.accept, mailbox_);
    if (options_.mutations.skip_copy_on_receive) {
      for (const auto& f : t.schema.fields()) aliased_.emplace(t.dst.id, f.name);
    }
  }
  return {};
}

StageResult Run::run_validate(const Stage& stage) {
  if (auto toe = rendezvous_all(stage)) return halt(*toe);
  for (const ResultSpec& spec : stage.results) {
    if (auto off = validate_final(pairs_.at(spec.rank.id), spec.fields)) {
      return halt(make_event(DetectionKind::kFinalMismatch, spec.rank, stage, *off));
    }
  }
  return StageResult{StageStatus::kCompleted, std::nullopt};
}

Bytes Run::result_bytes() const {
  Bytes out;
  for (const ResultSpec& spec : app_->result_schema()) {
    canonical_encode_append(pairs_.at(spec.rank.id).strands.front().select(spec.fields), out);
  }
  return out;
}

bool Run::aliases_received(Rank rank, const std::string& field) const {
  return aliased_.count({rank.id, field}) > 0;
}

namespace {

RunReport single_segment(std::shared_ptr<const App> app, const RunOptions& options,
                         FaultHook* fault) {
  Run run(std::move(app), options);
  run.set_fault_hook(fault);
  StageResult r = run.run_to_end();
  RunReport report;
  report.steps = run.steps_executed();
  report.deliveries = run.deliveries();
  if (r.status == StageStatus::kDetected) {
    report.outcome = RunOutcome{RunStatus::kHaltedOnDetection, 0, r.detection};
    report.events.push_back(*r.detection);
  } else {
    report.outcome = RunOutcome{RunStatus::kCompletedValid, 0, std::nullopt};
    report.result = run.result_bytes();
  }
  return report;
}

}  // namespace

RunReport run_detect_only(std::shared_ptr<const App> app, const RunOptions& options,
                          FaultHook* fault) {
  return single_segment(std::move(app), options, fault);
}

RunReport run_reference(std::shared_ptr<const App> app, const RunOptions& options) {
  RunOptions ref = options;
  ref.replication = 1;
  return single_segment(std::move(app), ref, nullptr);
}

}  // namespace twinrank::runtime
