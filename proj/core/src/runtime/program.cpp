#include "twinrank/runtime/program.hpp"

namespace twinrank::runtime {

const Stage* App::find_stage(std::string_view label) const {
  for (const auto& s : stages()) {
    if (s.id.label == label) return &s;
  }
  return nullptr;
}

std::vector<StageId> App::checkpoint_stages() const {
  std::vector<StageId> out;
  for (const auto& s : stages()) {
    if (s.kind == StageKind::kCheckpoint) out.push_back(s.id);
  }
  return out;
}

std::optional<std::uint32_t> App::checkpoint_index(std::uint32_t ordinal) const {
  std::uint32_t idx = 0;
  for (const auto& s : stages()) {
    if (s.kind != StageKind::kCheckpoint) continue;
    if (s.id.ordinal == ordinal) return idx;
    ++idx;
  }
  return std::nullopt;
}

std::vector<ResultSpec> App::result_schema() const {
  std::vector<ResultSpec> out;
  for (const auto& s : stages()) {
    if (s.kind == StageKind::kValidate) out.insert(out.end(), s.results.begin(), s.results.end());
  }
  return out;
}

}  // namespace twinrank::runtime
