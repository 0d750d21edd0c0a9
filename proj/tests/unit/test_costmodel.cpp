#include <gtest/gtest.h>

#include <cmath>
#include <fstream>
#include <sstream>

#include "twinrank/costmodel.hpp"

namespace twinrank::costmodel {
namespace {

constexpr double kS = 1.0 / 3600.0;

ExecParams matmul_params() {
  ExecParams p;
  p.T_prog = 10.21;
  p.T_comp = 42 * kS;
  p.T_rest = 14.10 * kS;
  p.f_d = 0.00005;
  p.n = 10;
  p.t_cs = 14.10 * kS;
  p.t_i = 1.0;
  p.t_ca = 10.58 * kS;
  p.T_compA = 42 * kS;
  return p;
}

ExecParams jacobi_params() {
  ExecParams p;
  p.T_prog = 8.92;
  p.T_comp = 1 * kS;
  p.T_rest = 9.62 * kS;
  p.f_d = 0.006;
  p.n = 8;
  p.t_cs = 9.62 * kS;
  p.t_i = 1.0;
  p.t_ca = 9.11 * kS;
  p.T_compA = 1 * kS;
  return p;
}

ModelFile load_reference_params() {
  std::ifstream in(std::string(TWINRANK_DATA_DIR) + "/reference_params.json");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_model_file(ss.str());
}

TEST(Baseline, PublishedMatmulValues) {
  auto p = matmul_params();
  EXPECT_NEAR(t_baseline(p, false), 10.22, 0.01);
  EXPECT_NEAR(t_baseline(p, true), 20.45, 0.01);
  EXPECT_EQ(t_baseline(ExecParams{}, false), 0.0);
  EXPECT_EQ(t_baseline(ExecParams{}, true), 0.0);
}

TEST(Detect, PublishedValuesAndLimit) {
  auto m = matmul_params();
  m.X = 0.30;
  EXPECT_NEAR(t_detect(m, true), 13.29, 0.01);
  auto j = jacobi_params();
  j.X = 0.50;
  EXPECT_NEAR(t_detect(j, true), 13.46, 0.01);
  ExecParams d;
  d.T_prog = 5.0;
  d.X = 1e-12;
  EXPECT_NEAR(t_detect(d, true), 5.0, 1e-9);
  ExecParams no_x = matmul_params();
  EXPECT_THROW(t_detect(no_x, true), ParameterError);
}

TEST(MultiCkpt, PublishedValuesAndSummationIdentity) {
  auto p = matmul_params();
  p.k = 0;
  EXPECT_NEAR(t_multickpt(p, true), 10.77, 0.01);
  p.k = 4;
  EXPECT_NEAR(t_multickpt(p, true), 22.79, 0.01);
  for (int k = 0; k <= 50; ++k) {
    p.k = k;
    EXPECT_NEAR(t_multickpt_summed(p), t_multickpt(p, true), 1e-12 * t_multickpt(p, true)) << k;
  }
}

TEST(MultiCkpt, IndependentEvaluation) {
  auto p = jacobi_params();
  p.k = 2;
  const double tp = p.T_prog * (1 + p.f_d);
  const double expected = tp + p.T_comp + (p.n + 2) * p.t_cs + 4.5 * p.t_i + 3 * p.T_rest;
  EXPECT_DOUBLE_EQ(t_multickpt(p, true), expected);
  EXPECT_DOUBLE_EQ(t_multickpt(p, false), tp + p.T_comp + p.n * p.t_cs);
}

TEST(SingleCkpt, PublishedValuesAndCollapse) {
  auto p = matmul_params();
  EXPECT_NEAR(t_singleckpt(p, false), 10.37, 0.01);
  EXPECT_NEAR(t_singleckpt(p, true), 10.87, 0.01);
  p.n = 0;
  p.t_i = 0;
  p.T_rest = 0;
  EXPECT_DOUBLE_EQ(t_singleckpt(p, true), t_detect(p, false));
}

TEST(Aet, LimitsAndIndependentValue) {
  auto p = jacobi_params();
  p.X = 0.5;
  const double fa = t_detect(p, false), fp = t_detect(p, true);
  EXPECT_NEAR(aet(p, Strategy::kDetectOnly, 1e12), fa, 1e-6);
  EXPECT_NEAR(aet(p, Strategy::kDetectOnly, 1e-6), fp, 1e-9);
  const double e1 = std::exp(-1.0);
  EXPECT_NEAR(aet(p, Strategy::kDetectOnly, p.T_prog), fp * (1 - e1) + fa * e1, 1e-12);
  EXPECT_THROW(aet(p, Strategy::kDetectOnly, 0.0), ParameterError);
  EXPECT_THROW(aet(p, Strategy::kDetectOnly, -1.0), ParameterError);
}

TEST(FdEstimate, Cases) {
  EXPECT_DOUBLE_EQ(fd_from_measurements(10.0, 9.0, 1.0).f_d, 0.0);
  EXPECT_DOUBLE_EQ(fd_from_measurements(20.0, 9.0, 1.0).f_d, 1.0);
  auto neg = fd_from_measurements(9.5, 9.0, 1.0);
  EXPECT_EQ(neg.f_d, 0.0);
  EXPECT_TRUE(neg.clamped);
  const double tp = 8.92, tc = 1 * kS;
  EXPECT_NEAR(fd_from_measurements((tp + tc) * 1.006, tp, tc).f_d, 0.006, 1e-12);
  EXPECT_THROW(fd_from_measurements(1.0, 0.0, 0.0), ParameterError);
}

TEST(Breakeven, JacobiThresholds) {
  auto p = jacobi_params();
  EXPECT_NEAR(rollback_breakeven(p, 0), 0.0588, 0.002);
  EXPECT_NEAR(rollback_breakeven(p, 1), 0.2267, 0.002);
  double prev = -1;
  for (int k = 0; k < 20; ++k) {
    double x = rollback_breakeven(p, k);
    EXPECT_GT(x, prev);
    prev = x;
    // At the threshold both strategies cost the same.
    ExecParams q = p;
    q.k = k;
    q.X = x;
    if (x < 1) EXPECT_NEAR(t_detect(q, true), t_multickpt(q, true), 1e-9);
  }
}

TEST(Admissibility, PublishedPattern) {
  auto p = jacobi_params();
  // Checkpoints stored by the time of detection, minus one.
  const bool expected[3][5] = {{true, true, false, false, false},
                               {true, true, true, true, false},
                               {true, true, true, true, true}};
  const double xs[3] = {0.3, 0.5, 0.8};
  for (int i = 0; i < 3; ++i) {
    for (int k = 0; k <= 4; ++k) EXPECT_EQ(admissible(p, xs[i], k), expected[i][k]) << xs[i] << " " << k;
  }
  auto t = detection_table(p, {0.3, 0.5, 0.8}, 4);
  EXPECT_FALSE(t.multi[0][2].has_value());
  EXPECT_TRUE(t.multi[2][4].has_value());
}

TEST(Monotonicity, KAndX) {
  auto p = jacobi_params();
  double prev = 0;
  for (int k = 0; k < 30; ++k) {
    p.k = k;
    double v = t_multickpt(p, true);
    EXPECT_GT(v, prev);
    prev = v;
  }
  prev = 0;
  for (double x = 0.05; x < 1.0; x += 0.05) {
    p.X = x;
    double v = t_detect(p, true);
    EXPECT_GT(v, prev);
    prev = v;
  }
}

TEST(Params, ValidationErrors) {
  ExecParams p;
  p.T_prog = -1;
  EXPECT_THROW(validate(p), ParameterError);
  p.T_prog = 1;
  p.f_d = 1.0;
  EXPECT_THROW(validate(p), ParameterError);
  p.f_d = 0;
  p.X = 1.0;
  EXPECT_THROW(validate(p), ParameterError);
  p.X = 0.5;
  p.MTBE = 0;
  EXPECT_THROW(validate(p), ParameterError);
}

TEST(Params, UnitsAndSchema) {
  auto p = parse_params(R"({"T_prog": 2, "T_comp": {"value": 90, "unit": "min"},
                            "t_cs": {"value": 36, "unit": "s"}, "f_d": {"value": 5, "unit": "%"},
                            "X": 0.25, "k": 3})");
  EXPECT_DOUBLE_EQ(p.T_prog, 2.0);
  EXPECT_DOUBLE_EQ(p.T_comp, 1.5);
  EXPECT_DOUBLE_EQ(p.t_cs, 0.01);
  EXPECT_DOUBLE_EQ(p.f_d, 0.05);
  EXPECT_DOUBLE_EQ(*p.X, 0.25);
  EXPECT_DOUBLE_EQ(*p.k, 3.0);
  EXPECT_THROW(parse_params(R"({"T_prog": 1, "bogus": 2})"), ParameterError);
  EXPECT_THROW(parse_params(R"({"T_comp": 1})"), ParameterError);
  EXPECT_THROW(parse_params(R"({"T_prog": {"value": 1, "unit": "parsec"}})"), ParameterError);
  EXPECT_THROW(parse_params("not json"), ParameterError);
  EXPECT_THROW(parse_model_file("{}"), ParameterError);
  EXPECT_THROW(parse_model_file(""), ParameterError);
}

TEST(Params, ReferenceParamsLoad) {
  ModelFile m = load_reference_params();
  ASSERT_EQ(m.apps.size(), 3u);
  EXPECT_EQ(m.apps[0].first, "MATMUL");
  EXPECT_EQ(m.apps[1].first, "JACOBI");
  EXPECT_EQ(m.apps[2].first, "SW");
  EXPECT_DOUBLE_EQ(m.apps[1].second.t_i, 1.0);
  EXPECT_NEAR(m.apps[1].second.f_d, 0.006, 1e-15);
  EXPECT_NEAR(m.apps[0].second.T_comp, 42 * kS, 1e-15);
  EXPECT_EQ(m.X, (std::vector<double>{0.3, 0.5, 0.8}));
  EXPECT_EQ(m.detection_app, "JACOBI");
}

TEST(Tables, StrategyTableShape) {
  ModelFile m = load_reference_params();
  auto rows = strategy_table(m.apps, m.X, m.k);
  ASSERT_EQ(rows.size(), 12u);
  for (const auto& r : rows) EXPECT_EQ(r.hours.size(), 3u);
  std::vector<std::string> names{"MATMUL", "JACOBI", "SW"};
  std::string csv = to_csv(rows, names);
  EXPECT_EQ(csv.substr(0, csv.find('\n')), "row,strategy,MATMUL,JACOBI,SW");
  EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), 13);
}

TEST(Tables, AetCurveBoundedAndDecreasing) {
  auto p = jacobi_params();
  p.X = 0.5;
  p.k = 1;
  auto curve = aet_curve(p, MtbeSweep{1.0, 1000.0, 32});
  ASSERT_EQ(curve.size(), 32u);
  for (std::size_t i = 0; i < curve.size(); ++i) {
    EXPECT_GT(curve[i].alpha, 0.0);
    EXPECT_LT(curve[i].alpha, 1.0);
    if (i > 0) {
      EXPECT_GT(curve[i].mtbe, curve[i - 1].mtbe);
      EXPECT_LT(curve[i].aet[1], curve[i - 1].aet[1]);
    }
  }
}

}  // namespace
}  // namespace twinrank::costmodel
