#include "twinrank/runtime/events.hpp"

#include <json.hpp>

#include "twinrank/core/errors.hpp"

namespace twinrank::runtime {

std::string_view to_string(DetectionKind kind) noexcept {
  switch (kind) {
    case DetectionKind::kSdcMismatch: return "SDC_MISMATCH";
    case DetectionKind::kToeTimeout: return "TOE_TIMEOUT";
    case DetectionKind::kFinalMismatch: return "FINAL_MISMATCH";
  }
  return "UNKNOWN";
}

DetectionKind parse_detection_kind(std::string_view name) {
  if (name == "SDC_MISMATCH") return DetectionKind::kSdcMismatch;
  if (name == "TOE_TIMEOUT") return DetectionKind::kToeTimeout;
  if (name == "FINAL_MISMATCH") return DetectionKind::kFinalMismatch;
  throw FormatError("unknown detection kind: " + std::string(name));
}

std::string_view to_string(RunStatus status) noexcept {
  switch (status) {
    case RunStatus::kCompletedValid: return "COMPLETED_VALID";
    case RunStatus::kHaltedOnDetection: return "HALTED_ON_DETECTION";
    case RunStatus::kRecovered: return "RECOVERED";
  }
  return "UNKNOWN";
}

std::string to_json_line(const DetectionEvent& event) {
  nlohmann::ordered_json j;
  j["kind"] = to_string(event.kind);
  j["rank"] = event.rank.id;
  j["stage"] = event.stage.label;
  j["detail"] = event.detail;
  j["step"] = event.step;
  return j.dump();
}

DetectionEvent parse_json_line(std::string_view line) {
  try {
    auto j = nlohmann::json::parse(line);
    DetectionEvent e;
    e.kind = parse_detection_kind(j.at("kind").get<std::string>());
    e.rank = Rank{j.at("rank").get<std::uint32_t>()};
    e.stage = StageId{0, j.at("stage").get<std::string>()};
    e.detail = j.at("detail").get<std::uint64_t>();
    e.step = j.at("step").get<std::uint64_t>();
    return e;
  } catch (const nlohmann::json::exception& ex) {
    throw FormatError(std::string("bad event line: ") + ex.what());
  }
}

}  // namespace twinrank::runtime
