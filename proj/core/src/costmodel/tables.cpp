#include "twinrank/costmodel/tables.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>

namespace twinrank::costmodel {

namespace {

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6f", v);
  return buf;
}

std::string pct(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%g%%", x * 100);
  return buf;
}

}  // namespace

std::vector<TableRow> strategy_table(const std::vector<std::pair<std::string, ExecParams>>& apps,
                                     const std::vector<double>& X, const std::vector<double>& k) {
  std::vector<TableRow> rows;
  auto row = [&](std::string label, auto fn) {
    TableRow r{std::move(label), {}};
    for (const auto& [_, p] : apps) r.hours.push_back(fn(p));
    rows.push_back(std::move(r));
  };
  row("baseline fault-free", [](const ExecParams& p) { return t_baseline(p, false); });
  row("baseline faulty", [](const ExecParams& p) { return t_baseline(p, true); });
  row("detect fault-free", [](const ExecParams& p) { return t_detect(p, false); });
  for (double x : X) {
    row("detect faulty X=" + pct(x), [x](ExecParams p) {
      p.X = x;
      return t_detect(p, true);
    });
  }
  row("multi-ckpt fault-free", [](const ExecParams& p) { return t_multickpt(p, false); });
  for (double kk : k) {
    char label[48];
    std::snprintf(label, sizeof label, "multi-ckpt faulty k=%g", kk);
    row(label, [kk](ExecParams p) {
      p.k = kk;
      return t_multickpt(p, true);
    });
  }
  row("single-ckpt fault-free", [](const ExecParams& p) { return t_singleckpt(p, false); });
  row("single-ckpt faulty", [](const ExecParams& p) { return t_singleckpt(p, true); });
  return rows;
}

DetectionTable detection_table(const ExecParams& p, const std::vector<double>& X, int k_max) {
  DetectionTable t;
  t.X = X;
  for (int k = 0; k <= k_max; ++k) t.k.push_back(k);
  for (double x : X) {
    ExecParams q = p;
    q.X = x;
    t.detect_only.push_back(t_detect(q, true));
    std::vector<std::optional<double>> cells;
    for (int k : t.k) {
      q.k = k;
      if (admissible(q, x, k)) {
        cells.push_back(t_multickpt(q, true));
      } else {
        cells.push_back(std::nullopt);
      }
    }
    t.multi.push_back(std::move(cells));
  }
  return t;
}

std::vector<AetSample> aet_curve(const ExecParams& p, const MtbeSweep& sweep) {
  std::vector<AetSample> out;
  const double lo = std::log(sweep.min_hours);
  const double hi = std::log(sweep.max_hours);
  for (int i = 0; i < sweep.count; ++i) {
    const double mtbe = std::exp(lo + (hi - lo) * i / (sweep.count - 1));
    AetSample s{mtbe, fault_probability(p.T_prog, mtbe), {}};
    for (Strategy st : {Strategy::kBaseline, Strategy::kDetectOnly, Strategy::kMultiCkpt,
                        Strategy::kSingleCkpt}) {
      s.aet.push_back(aet(p, st, mtbe));
    }
    out.push_back(std::move(s));
  }
  return out;
}

std::string to_csv(const std::vector<TableRow>& rows, const std::vector<std::string>& app_names) {
  std::ostringstream os;
  os << "row,strategy";
  for (const auto& n : app_names) os << ',' << n;
  os << '\n';
  int i = 1;
  for (const auto& r : rows) {
    os << i++ << ',' << r.label;
    for (double h : r.hours) os << ',' << fmt(h);
    os << '\n';
  }
  return os.str();
}

std::string to_csv(const DetectionTable& t) {
  std::ostringstream os;
  os << "X,detect";
  for (int k : t.k) os << ",k=" << k;
  os << '\n';
  for (std::size_t i = 0; i < t.X.size(); ++i) {
    os << fmt(t.X[i]) << ',' << fmt(t.detect_only[i]);
    for (const auto& c : t.multi[i]) os << ',' << (c ? fmt(*c) : std::string("NA"));
    os << '\n';
  }
  return os.str();
}

std::string to_csv(const std::vector<AetSample>& samples) {
  std::ostringstream os;
  os << "mtbe_h,alpha,baseline,detect,multi_ckpt,single_ckpt\n";
  for (const auto& s : samples) {
    os << fmt(s.mtbe) << ',' << fmt(s.alpha);
    for (double a : s.aet) os << ',' << fmt(a);
    os << '\n';
  }
  return os.str();
}

}  // namespace twinrank::costmodel
