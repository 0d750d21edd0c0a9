#pragma once

#include <string_view>

#include "twinrank/costmodel/params.hpp"

namespace twinrank::costmodel {

enum class Strategy { kBaseline, kDetectOnly, kMultiCkpt, kSingleCkpt };

std::string_view to_string(Strategy s) noexcept;

/// Manual method: run twice and compare; rerun on a mismatch.
double t_baseline(const ExecParams& p, bool faulty);
/// Detection with safe-stop and relaunch; faulty requires X.
double t_detect(const ExecParams& p, bool faulty);
/// Multiple system-level checkpoints; faulty requires k.
double t_multickpt(const ExecParams& p, bool faulty);
/// Same, with the rollback work written as the explicit sum over the k+1
/// restarts instead of the closed form.
double t_multickpt_summed(const ExecParams& p);
/// Single validated application-level checkpoint.
double t_singleckpt(const ExecParams& p, bool faulty);

double t_strategy(const ExecParams& p, Strategy s, bool faulty);

/// Probability that a run of T_prog meets at least one silent error.
double fault_probability(double T_prog, double mtbe);

/// Average execution time under exponential error arrivals.
double aet(const ExecParams& p, Strategy s, double mtbe);

struct FdEstimate {
  double f_d = 0;
  /// The raw estimate was negative (measurement noise) and was set to 0.
  bool clamped = false;
};

FdEstimate fd_from_measurements(double t_detect_fa, double t_prog, double t_comp);

/// Smallest X at which relaunching costs at least as much as rolling back
/// through k checkpoints.
double rollback_breakeven(const ExecParams& p, double k);

/// Whether k checkpoints can precede the detection at fraction X: at most
/// one less than the checkpoints stored by then, measured on the
/// fault-free detection-only run time.
bool admissible(const ExecParams& p, double X, double k);

}  // namespace twinrank::costmodel
