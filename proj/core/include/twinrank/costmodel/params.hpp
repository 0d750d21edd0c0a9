#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace twinrank::costmodel {

class ParameterError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

inline constexpr double kSecondsPerHour = 3600.0;

constexpr double hours_from_seconds(double s) noexcept { return s / kSecondsPerHour; }

/// Timing model inputs. All times in hours.
struct ExecParams {
  double T_prog = 0;   ///< fault-free run time of the application
  double T_comp = 0;   ///< result comparison time
  double T_rest = 0;   ///< restart time
  double f_d = 0;      ///< detection overhead, fraction of T_prog
  std::optional<double> X;  ///< fraction of the run elapsed at detection
  double n = 0;        ///< checkpoints taken in a fault-free run
  double t_cs = 0;     ///< time to store one system-level checkpoint
  double t_i = 0;      ///< checkpoint interval
  std::optional<double> k;  ///< checkpoints between fault and detection
  double t_ca = 0;     ///< time to store one application-level checkpoint
  double T_compA = 0;  ///< time to compare application-level checkpoints
  std::optional<double> MTBE;
};

/// Throws ParameterError on a negative time or count, f_d outside [0, 1),
/// X outside (0, 1) or a non-positive MTBE.
void validate(const ExecParams& p);

struct MtbeSweep {
  double min_hours = 1.0;
  double max_hours = 1000.0;
  int count = 64;
};

/// Contents of a cost-model parameter file.
struct ModelFile {
  std::vector<std::pair<std::string, ExecParams>> apps;
  std::vector<double> X;
  std::vector<double> k;
  std::optional<std::string> detection_app;
  int detection_k_max = 4;
  std::vector<double> breakeven_k;
  MtbeSweep mtbe;
};

/// Time fields are hours, or {"value": v, "unit": "s"|"min"|"h"}; fraction
/// fields (f_d, X) are fractions, or {"value": v, "unit": "%"}. Throws
/// ParameterError on schema violations.
ExecParams parse_params(std::string_view json_object);
ModelFile parse_model_file(std::string_view json_text);

}  // namespace twinrank::costmodel
