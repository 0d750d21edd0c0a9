#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

#include "twinrank/core/types.hpp"

namespace twinrank::runtime {

enum class DetectionKind { kSdcMismatch, kToeTimeout, kFinalMismatch };

std::string_view to_string(DetectionKind kind) noexcept;
/// Throws FormatError for unknown names.
DetectionKind parse_detection_kind(std::string_view name);

/// `detail` is the first differing byte offset for mismatches and the step
/// deficit for timeouts. `step` is the monotonic scheduler step count of the
/// run at the time of detection.
struct DetectionEvent {
  DetectionKind kind = DetectionKind::kSdcMismatch;
  Rank rank;
  StageId stage;
  std::uint64_t detail = 0;
  std::uint64_t step = 0;

  friend bool operator==(const DetectionEvent&, const DetectionEvent&) = default;
};

/// One JSON object per line: {"kind","rank","stage","detail","step"}.
std::string to_json_line(const DetectionEvent& event);
/// The stage ordinal is not serialized and comes back as 0.
DetectionEvent parse_json_line(std::string_view line);

enum class RunStatus { kCompletedValid, kHaltedOnDetection, kRecovered };

std::string_view to_string(RunStatus status) noexcept;

struct RunOutcome {
  RunStatus status = RunStatus::kCompletedValid;
  std::uint32_t restarts_used = 0;
  std::optional<DetectionEvent> detection;
};

}  // namespace twinrank::runtime
