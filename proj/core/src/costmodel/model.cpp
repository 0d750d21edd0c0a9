#include "twinrank/costmodel/model.hpp"

#include <cmath>

namespace twinrank::costmodel {

namespace {

double need(const std::optional<double>& v, const char* name) {
  if (!v) throw ParameterError(std::string(name) + " is required for the faulty case");
  return *v;
}

double protected_prog(const ExecParams& p) { return p.T_prog * (1 + p.f_d); }

}  // namespace

std::string_view to_string(Strategy s) noexcept {
  switch (s) {
    case Strategy::kBaseline: return "baseline";
    case Strategy::kDetectOnly: return "detect";
    case Strategy::kMultiCkpt: return "multi-ckpt";
    case Strategy::kSingleCkpt: return "single-ckpt";
  }
  return "?";
}

double t_baseline(const ExecParams& p, bool faulty) {
  validate(p);
  const double once = p.T_prog + p.T_comp;
  return faulty ? 2 * once + p.T_rest : once;
}

double t_detect(const ExecParams& p, bool faulty) {
  validate(p);
  if (!faulty) return protected_prog(p) + p.T_comp;
  return protected_prog(p) * (need(p.X, "X") + 1) + p.T_rest + p.T_comp;
}

double t_multickpt(const ExecParams& p, bool faulty) {
  validate(p);
  const double base = protected_prog(p) + p.T_comp;
  if (!faulty) return base + p.n * p.t_cs;
  const double k = need(p.k, "k");
  return base + (p.n + k) * p.t_cs + (k + 1) * (k + 1) / 2 * p.t_i + (k + 1) * p.T_rest;
}

double t_multickpt_summed(const ExecParams& p) {
  validate(p);
  const double kd = need(p.k, "k");
  const long k = std::lround(kd);
  double rework = 0;
  for (long m = 0; m <= k; ++m) rework += (static_cast<double>(k - m) + 0.5) * p.t_i;
  return protected_prog(p) + p.T_comp + (p.n + kd) * p.t_cs + rework + (kd + 1) * p.T_rest;
}

double t_singleckpt(const ExecParams& p, bool faulty) {
  validate(p);
  const double fa = protected_prog(p) + p.T_comp + p.n * (p.t_ca + p.T_compA);
  return faulty ? fa + 0.5 * p.t_i + p.T_rest : fa;
}

double t_strategy(const ExecParams& p, Strategy s, bool faulty) {
  switch (s) {
    case Strategy::kBaseline: return t_baseline(p, faulty);
    case Strategy::kDetectOnly: return t_detect(p, faulty);
    case Strategy::kMultiCkpt: return t_multickpt(p, faulty);
    case Strategy::kSingleCkpt: return t_singleckpt(p, faulty);
  }
  throw ParameterError("unknown strategy");
}

double fault_probability(double T_prog, double mtbe) {
  if (!(mtbe > 0)) throw ParameterError("MTBE must be positive");
  return -std::expm1(-T_prog / mtbe);
}

double aet(const ExecParams& p, Strategy s, double mtbe) {
  const double alpha = fault_probability(p.T_prog, mtbe);
  return t_strategy(p, s, true) * alpha + t_strategy(p, s, false) * (1 - alpha);
}

FdEstimate fd_from_measurements(double t_detect_fa, double t_prog, double t_comp) {
  const double ref = t_prog + t_comp;
  if (!(ref > 0)) throw ParameterError("t_prog + t_comp must be positive");
  const double fd = (t_detect_fa - ref) / ref;
  if (fd < 0) return FdEstimate{0.0, true};
  return FdEstimate{fd, false};
}

double rollback_breakeven(const ExecParams& p, double k) {
  validate(p);
  const double denom = protected_prog(p);
  if (!(denom > 0)) throw ParameterError("T_prog must be positive");
  return ((p.n + k) * p.t_cs + (k + 1) * (k + 1) / 2 * p.t_i + k * p.T_rest) / denom;
}

bool admissible(const ExecParams& p, double X, double k) {
  if (!(p.t_i > 0)) throw ParameterError("t_i must be positive");
  const double stored = std::floor(X * t_detect(p, false) / p.t_i);
  return k <= stored - 1;
}

}  // namespace twinrank::costmodel
