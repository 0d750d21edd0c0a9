#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "twinrank/costmodel/model.hpp"

namespace twinrank::costmodel {

struct TableRow {
  std::string label;
  std::vector<double> hours;  ///< one per application, in input order
};

/// Fault-free and faulty times of every strategy: baseline (2 rows),
/// detection-only (fault-free, then one per X), multi-checkpoint
/// (fault-free, then one per k) and single checkpoint (2 rows).
std::vector<TableRow> strategy_table(const std::vector<std::pair<std::string, ExecParams>>& apps,
                                     const std::vector<double>& X, const std::vector<double>& k);

struct DetectionTable {
  std::vector<double> X;
  std::vector<int> k;
  std::vector<double> detect_only;  ///< per X
  /// [x][k]; empty where k checkpoints cannot precede detection at X.
  std::vector<std::vector<std::optional<double>>> multi;
};

DetectionTable detection_table(const ExecParams& p, const std::vector<double>& X, int k_max);

struct AetSample {
  double mtbe;
  double alpha;
  std::vector<double> aet;  ///< per strategy: baseline, detect, multi, single
};

/// Log-spaced MTBE samples. X and k must be set in `p`.
std::vector<AetSample> aet_curve(const ExecParams& p, const MtbeSweep& sweep);

std::string to_csv(const std::vector<TableRow>& rows, const std::vector<std::string>& app_names);
std::string to_csv(const DetectionTable& table);
std::string to_csv(const std::vector<AetSample>& samples);

}  // namespace twinrank::costmodel
