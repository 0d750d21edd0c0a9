#include "twinrank/faults/predict.hpp"

#include <optional>
#include <string>
#include <vector>

namespace twinrank::faults {

namespace {

// Stage ordinals of the matmul program.
enum Ord : int { kCk0 = 0, kScatter, kCk1, kBcast, kCk2, kMatmul, kGather, kCk3, kValidate };
const char* const kLabels[] = {"CK0", "SCATTER", "CK1", "BCAST", "CK2",
                               "MATMUL", "GATHER", "CK3", "VALIDATE"};
constexpr int kStages = 9;

enum class Action { kTransmit, kOverwrite, kValidate, kFeedsResult, kLoop };

struct Use {
  int stage;
  Action action;
};

// What the program does with each datum after initialization, in order.
std::vector<Use> uses(Role role, Datum d) {
  if (role == Role::kMaster) {
    switch (d) {
      case Datum::kA: return {{kScatter, Action::kTransmit}};
      case Datum::kB: return {{kBcast, Action::kTransmit}};
      case Datum::kC: return {{kGather, Action::kOverwrite}, {kValidate, Action::kValidate}};
      case Datum::kIndex: break;
    }
    throw Unsupported("the Master has no compute index");
  }
  switch (d) {
    case Datum::kA: return {{kScatter, Action::kOverwrite}, {kMatmul, Action::kFeedsResult}};
    case Datum::kB: return {{kBcast, Action::kOverwrite}, {kMatmul, Action::kFeedsResult}};
    case Datum::kC: return {{kMatmul, Action::kOverwrite}, {kGather, Action::kTransmit}};
    case Datum::kIndex: return {{kMatmul, Action::kLoop}};
  }
  throw Unsupported("unknown datum");
}

int stage_ordinal(const std::string& label) {
  for (int i = 0; i < kStages; ++i) {
    if (label == kLabels[i]) return i;
  }
  throw Unsupported("stage outside the matmul program: " + label);
}

bool is_checkpoint(int ord) { return ord == kCk0 || ord == kCk1 || ord == kCk2 || ord == kCk3; }

struct Detection {
  Effect effect;
  int stage;
};

// Positions: stage k sits at 2k, the gap before it at 2k-1. Follows the
// datum forward from the injection position.
std::optional<Detection> follow(Role role, Datum d, int pos, RowPick row) {
  for (const Use& u : uses(role, d)) {
    const int at = 2 * u.stage;
    if (at < pos) continue;
    if (at == pos) {
      // Injected in the middle of this stage (only MATMUL has a middle).
      switch (u.action) {
        case Action::kLoop: return Detection{Effect::kTOE, kGather};
        case Action::kFeedsResult:
          if (d == Datum::kA && row == RowPick::kFirst) return std::nullopt;  // row consumed
          return follow(Role::kWorker, Datum::kC, at + 1, row);
        case Action::kOverwrite:
          if (d == Datum::kC && row == RowPick::kFirst) continue;  // row already written
          return std::nullopt;
        default: continue;
      }
    }
    switch (u.action) {
      case Action::kTransmit: return Detection{Effect::kTDC, u.stage};
      case Action::kOverwrite: return std::nullopt;
      case Action::kValidate: return Detection{Effect::kFSC, u.stage};
      case Action::kFeedsResult: return follow(Role::kWorker, Datum::kC, at + 1, row);
      case Action::kLoop: return std::nullopt;  // the loop start resets the index
    }
  }
  return std::nullopt;
}

}  // namespace

ScenarioPrediction predict(const FaultSpec& spec) {
  const bool interior = spec.window.from == spec.window.to;
  const int to = stage_ordinal(spec.window.to);
  int pos;
  if (interior) {
    if (to != kMatmul) throw Unsupported("only MATMUL has an interior window");
    pos = 2 * to;
  } else {
    const int from = spec.window.from == "INIT" ? -1 : stage_ordinal(spec.window.from);
    if (from + 1 != to) throw Unsupported("window stages are not adjacent");
    pos = 2 * to - 1;
  }

  auto det = follow(spec.role, spec.datum, pos, spec.row);
  if (!det) return ScenarioPrediction{};

  ScenarioPrediction p;
  p.effect = det->effect;
  p.p_det = kLabels[det->stage];
  // Latest checkpoint taken before the injection.
  p.p_rec = "BEGIN";
  for (int s = 0; 2 * s < pos && s < kStages; ++s) {
    if (is_checkpoint(s)) p.p_rec = kLabels[s];
  }
  // One restart per checkpoint in (injection, detection], plus the good one.
  p.n_roll = 1;
  for (int s = 0; s <= det->stage; ++s) {
    if (is_checkpoint(s) && 2 * s > pos) ++p.n_roll;
  }
  return p;
}

}  // namespace twinrank::faults
