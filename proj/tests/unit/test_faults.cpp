#include <gtest/gtest.h>

#include <set>

#include "temp_dir.hpp"
#include "twinrank/apps.hpp"
#include "twinrank/core.hpp"
#include "twinrank/checkpoint.hpp"
#include "twinrank/faults.hpp"

namespace twinrank::faults {
namespace {

using testing::TempDir;

struct Row {
  int id;
  const char* from;
  const char* to;
  const char* role;
  const char* datum;
  const char* effect;
  const char* p_det;
  const char* p_rec;
  std::uint32_t n_roll;
};

// Expected tuple per scenario, worked out by hand from the program's data
// flow and checkpoint placement.
const Row kExpected[] = {
    {1, "INIT", "CK0", "Master", "A", "TDC", "SCATTER", "BEGIN", 2},
    {2, "CK0", "SCATTER", "Master", "A", "TDC", "SCATTER", "CK0", 1},
    {3, "CK0", "SCATTER", "Master", "B", "TDC", "BCAST", "CK0", 2},
    {4, "CK0", "SCATTER", "Master", "C", "LE", "NONE", "NONE", 0},
    {5, "CK0", "SCATTER", "Worker", "A", "LE", "NONE", "NONE", 0},
    {6, "CK0", "SCATTER", "Worker", "B", "LE", "NONE", "NONE", 0},
    {7, "CK0", "SCATTER", "Worker", "C", "LE", "NONE", "NONE", 0},
    {8, "SCATTER", "CK1", "Master", "A", "LE", "NONE", "NONE", 0},
    {9, "SCATTER", "CK1", "Master", "B", "TDC", "BCAST", "CK0", 2},
    {10, "SCATTER", "CK1", "Master", "C", "LE", "NONE", "NONE", 0},
    {11, "SCATTER", "CK1", "Worker", "A", "TDC", "GATHER", "CK0", 3},
    {12, "SCATTER", "CK1", "Worker", "B", "LE", "NONE", "NONE", 0},
    {13, "SCATTER", "CK1", "Worker", "C", "LE", "NONE", "NONE", 0},
    {14, "CK1", "BCAST", "Master", "A", "LE", "NONE", "NONE", 0},
    {15, "CK1", "BCAST", "Master", "B", "TDC", "BCAST", "CK1", 1},
    {16, "CK1", "BCAST", "Master", "C", "LE", "NONE", "NONE", 0},
    {17, "CK1", "BCAST", "Worker", "A", "TDC", "GATHER", "CK1", 2},
    {18, "CK1", "BCAST", "Worker", "B", "LE", "NONE", "NONE", 0},
    {19, "CK1", "BCAST", "Worker", "C", "LE", "NONE", "NONE", 0},
    {20, "INIT", "CK0", "Master", "B", "TDC", "BCAST", "BEGIN", 3},
    {21, "INIT", "CK0", "Master", "C", "LE", "NONE", "NONE", 0},
    {22, "INIT", "CK0", "Worker", "A", "LE", "NONE", "NONE", 0},
    {23, "INIT", "CK0", "Worker", "B", "LE", "NONE", "NONE", 0},
    {24, "BCAST", "CK2", "Master", "A", "LE", "NONE", "NONE", 0},
    {25, "BCAST", "CK2", "Master", "B", "LE", "NONE", "NONE", 0},
    {26, "BCAST", "CK2", "Master", "C", "LE", "NONE", "NONE", 0},
    {27, "BCAST", "CK2", "Worker", "A", "TDC", "GATHER", "CK1", 2},
    {28, "BCAST", "CK2", "Worker", "B", "TDC", "GATHER", "CK1", 2},
    {29, "BCAST", "CK2", "Worker", "C", "LE", "NONE", "NONE", 0},
    {30, "CK2", "MATMUL", "Master", "A", "LE", "NONE", "NONE", 0},
    {31, "CK2", "MATMUL", "Master", "B", "LE", "NONE", "NONE", 0},
    {32, "CK2", "MATMUL", "Master", "C", "LE", "NONE", "NONE", 0},
    {33, "CK2", "MATMUL", "Worker", "A", "TDC", "GATHER", "CK2", 1},
    {34, "CK2", "MATMUL", "Worker", "B", "TDC", "GATHER", "CK2", 1},
    {35, "CK2", "MATMUL", "Worker", "C", "LE", "NONE", "NONE", 0},
    {36, "MATMUL", "MATMUL", "Master", "A", "LE", "NONE", "NONE", 0},
    {37, "MATMUL", "MATMUL", "Master", "B", "LE", "NONE", "NONE", 0},
    {38, "MATMUL", "MATMUL", "Master", "C", "LE", "NONE", "NONE", 0},
    {39, "MATMUL", "MATMUL", "Worker", "A", "TDC", "GATHER", "CK2", 1},
    {40, "MATMUL", "MATMUL", "Worker", "B", "TDC", "GATHER", "CK2", 1},
    {41, "MATMUL", "MATMUL", "Worker", "C", "TDC", "GATHER", "CK2", 1},
    {42, "MATMUL", "GATHER", "Master", "A", "LE", "NONE", "NONE", 0},
    {43, "MATMUL", "GATHER", "Master", "B", "LE", "NONE", "NONE", 0},
    {44, "MATMUL", "GATHER", "Master", "C", "LE", "NONE", "NONE", 0},
    {45, "MATMUL", "GATHER", "Worker", "A", "LE", "NONE", "NONE", 0},
    {46, "MATMUL", "GATHER", "Worker", "B", "LE", "NONE", "NONE", 0},
    {47, "MATMUL", "GATHER", "Worker", "C", "TDC", "GATHER", "CK2", 1},
    {48, "GATHER", "CK3", "Master", "A", "LE", "NONE", "NONE", 0},
    {49, "GATHER", "CK3", "Master", "B", "LE", "NONE", "NONE", 0},
    {50, "GATHER", "CK3", "Master", "C", "FSC", "VALIDATE", "CK2", 2},
    {51, "GATHER", "CK3", "Worker", "A", "LE", "NONE", "NONE", 0},
    {52, "GATHER", "CK3", "Worker", "B", "LE", "NONE", "NONE", 0},
    {53, "GATHER", "CK3", "Worker", "C", "LE", "NONE", "NONE", 0},
    {54, "INIT", "CK0", "Worker", "C", "LE", "NONE", "NONE", 0},
    {55, "MATMUL", "MATMUL", "Worker", "A", "LE", "NONE", "NONE", 0},
    {56, "MATMUL", "MATMUL", "Worker", "C", "LE", "NONE", "NONE", 0},
    {57, "CK2", "MATMUL", "Worker", "i", "LE", "NONE", "NONE", 0},
    {58, "MATMUL", "GATHER", "Worker", "i", "LE", "NONE", "NONE", 0},
    {59, "MATMUL", "MATMUL", "Worker", "i", "TOE", "GATHER", "CK2", 1},
    {60, "CK3", "VALIDATE", "Master", "A", "LE", "NONE", "NONE", 0},
    {61, "CK3", "VALIDATE", "Master", "B", "LE", "NONE", "NONE", 0},
    {62, "CK3", "VALIDATE", "Master", "C", "FSC", "VALIDATE", "CK3", 1},
    {63, "CK3", "VALIDATE", "Worker", "A", "LE", "NONE", "NONE", 0},
    {64, "CK3", "VALIDATE", "Worker", "C", "LE", "NONE", "NONE", 0},
};

std::shared_ptr<const apps::MatmulApp> matmul(std::uint32_t n = 64, std::uint32_t ranks = 5) {
  return std::dynamic_pointer_cast<const apps::MatmulApp>(
      apps::make_app(apps::with_defaults({.name = "matmul", .size = n, .nranks = ranks})));
}

TEST(Catalog, MatchesExpectedTable) {
  auto cat = catalog();
  ASSERT_EQ(cat.size(), 64u);
  ASSERT_EQ(std::size(kExpected), 64u);
  for (std::size_t i = 0; i < 64; ++i) {
    const Row& e = kExpected[i];
    const Scenario& s = cat[i];
    SCOPED_TRACE("scenario " + std::to_string(e.id));
    EXPECT_EQ(s.spec.scenario_id, e.id);
    EXPECT_EQ(s.spec.window.from, e.from);
    EXPECT_EQ(s.spec.window.to, e.to);
    EXPECT_EQ(to_string(s.spec.role), e.role);
    EXPECT_EQ(to_string(s.spec.datum), e.datum);
    EXPECT_EQ(to_string(s.prediction.effect), e.effect);
    EXPECT_EQ(s.prediction.p_det, e.p_det);
    EXPECT_EQ(s.prediction.p_rec, e.p_rec);
    EXPECT_EQ(s.prediction.n_roll, e.n_roll);
  }
}

TEST(Catalog, PublishedRows) {
  auto s2 = scenario(2);
  EXPECT_EQ(s2.prediction, (ScenarioPrediction{Effect::kTDC, "SCATTER", "CK0", 1}));
  EXPECT_EQ(s2.spec.role, Role::kMaster);
  EXPECT_EQ(s2.spec.datum, Datum::kA);
  EXPECT_EQ(scenario(29).prediction, (ScenarioPrediction{Effect::kLE, "NONE", "NONE", 0}));
  EXPECT_EQ(scenario(29).spec.role, Role::kWorker);
  EXPECT_EQ(scenario(29).spec.datum, Datum::kC);
  EXPECT_EQ(scenario(50).prediction, (ScenarioPrediction{Effect::kFSC, "VALIDATE", "CK2", 2}));
  EXPECT_EQ(scenario(59).prediction, (ScenarioPrediction{Effect::kTOE, "GATHER", "CK2", 1}));
  EXPECT_EQ(scenario(59).spec.datum, Datum::kIndex);
}

TEST(Catalog, PredictionInvariantsAndDistinctClasses) {
  std::set<std::tuple<std::string, std::string, int, int, int>> classes;
  for (const auto& s : catalog()) {
    const auto& p = s.prediction;
    if (p.effect == Effect::kLE) {
      EXPECT_EQ(p.n_roll, 0u);
      EXPECT_EQ(p.p_det, "NONE");
      EXPECT_EQ(p.p_rec, "NONE");
    } else {
      EXPECT_GE(p.n_roll, 1u);
    }
    if (p.effect == Effect::kFSC) EXPECT_EQ(p.p_det, "VALIDATE");
    if (p.effect == Effect::kTDC || p.effect == Effect::kTOE) {
      EXPECT_TRUE(p.p_det == "SCATTER" || p.p_det == "BCAST" || p.p_det == "GATHER") << p.p_det;
    }
    EXPECT_EQ(predict(s.spec), p);
    classes.emplace(s.spec.window.from, s.spec.window.to, static_cast<int>(s.spec.role),
                    static_cast<int>(s.spec.datum), static_cast<int>(s.spec.row));
  }
  EXPECT_EQ(classes.size(), 64u);
  EXPECT_THROW(scenario(0), std::out_of_range);
  EXPECT_THROW(scenario(65), std::out_of_range);
}

TEST(Predict, WorkerBAfterBroadcast) {
  FaultSpec spec;
  spec.window = {"BCAST", "CK2"};
  spec.role = Role::kWorker;
  spec.datum = Datum::kB;
  EXPECT_EQ(predict(spec), (ScenarioPrediction{Effect::kTDC, "GATHER", "CK1", 2}));
  spec.window = {"CK2", "MATMUL"};
  EXPECT_EQ(predict(spec), (ScenarioPrediction{Effect::kTDC, "GATHER", "CK2", 1}));
}

TEST(Predict, OutsideModelUnsupported) {
  FaultSpec spec;
  spec.window = {"CK2", "BCAST"};  // backwards window
  EXPECT_THROW(predict(spec), Unsupported);
  spec.window = {"CK0", "NOWHERE"};
  EXPECT_THROW(predict(spec), Unsupported);
}

TEST(Resolve, WindowsMapToStages) {
  auto app = matmul();
  auto p2 = resolve(scenario(2).spec, *app);
  EXPECT_EQ(p2.stage_ordinal, apps::MatmulApp::kScatter);
  EXPECT_FALSE(p2.at_step.has_value());
  EXPECT_EQ(p2.target_rank.id, 0u);
  EXPECT_EQ(p2.field, "A");
  auto p59 = resolve(scenario(59).spec, *app);
  EXPECT_EQ(p59.stage_ordinal, apps::MatmulApp::kMatmul);
  ASSERT_TRUE(p59.at_step.has_value());
  EXPECT_EQ(p59.mutation, Mutation::kResetZero);
  EXPECT_EQ(p59.field, "i");
  EXPECT_EQ(resolve(scenario(1).spec, *app).stage_ordinal, 0u);
}

TEST(Resolve, ConfigurationErrors) {
  auto app = matmul();
  FaultSpec master_index = scenario(59).spec;
  master_index.role = Role::kMaster;
  EXPECT_THROW(resolve(master_index, *app), ConfigError);
  FaultSpec far_worker = scenario(5).spec;
  far_worker.worker = 9;
  EXPECT_THROW(resolve(far_worker, *app), ConfigError);
  // One row per worker leaves no middle of MATMUL.
  auto thin = matmul(4, 5);
  EXPECT_THROW(resolve(scenario(59).spec, *thin), ConfigError);
}

TEST(Inject, OneShotPerLedger) {
  checkpoint::MemoryLedgerStore ledger;
  State s;
  s.add("A", std::vector<double>{1.0, 2.0});
  InjectionPoint p;
  p.field = "A";
  p.index = 1;
  State before = s;
  EXPECT_EQ(inject(p, s, ledger), InjectResult::kInjected);
  EXPECT_TRUE(ledger.load_ledger().injected);
  Bytes a = canonical_encode(before), b = canonical_encode(s);
  int differing_bits = 0;
  for (std::size_t i = 0; i < a.size(); ++i) differing_bits += std::popcount(unsigned(a[i] ^ b[i]));
  EXPECT_EQ(differing_bits, 1);
  EXPECT_EQ(inject(p, s, ledger), InjectResult::kSkipped);
  EXPECT_EQ(s.f64s("A")[1], std::bit_cast<double>(std::bit_cast<std::uint64_t>(2.0) ^ (1ULL << 52)));
}

TEST(Inject, DoubleFlipIsHarmless) {
  auto app = matmul();
  InjectionPoint p = resolve(scenario(2).spec, *app);
  checkpoint::MemoryLedgerStore l1, l2;
  FaultInjector first(p, l1), second(p, l2);
  struct Both final : runtime::FaultHook {
    FaultInjector& a;
    FaultInjector& b;
    Both(FaultInjector& x, FaultInjector& y) : a(x), b(y) {}
    void before_stage(runtime::Run& r, const runtime::Stage& s) override {
      a.before_stage(r, s);
      b.before_stage(r, s);
    }
    void at_step(runtime::Run& r, const runtime::Stage& s, Rank k, std::size_t st, std::uint64_t c,
                 State& x) override {
      a.at_step(r, s, k, st, c, x);
      b.at_step(r, s, k, st, c, x);
    }
  } both(first, second);
  auto rep = runtime::run_detect_only(app, {}, &both);
  EXPECT_EQ(first.injected(), 1);
  EXPECT_EQ(second.injected(), 1);
  EXPECT_EQ(rep.outcome.status, runtime::RunStatus::kCompletedValid);
  EXPECT_EQ(rep.result, runtime::run_reference(app, {}).result);
}

TEST(Inject, NotRepeatedAfterRestart) {
  TempDir tmp("oneshot");
  checkpoint::RunDirectory dir(tmp.path());
  auto app = matmul();
  FaultInjector inj(resolve(scenario(50).spec, *app), dir);
  checkpoint::DriverConfig cfg;
  cfg.app = app;
  cfg.fault = &inj;
  auto rep = checkpoint::multi_ckpt_recovery_driver(cfg, dir);
  EXPECT_EQ(rep.outcome.restarts_used, 2u);
  EXPECT_EQ(inj.injected(), 1);
  EXPECT_GE(inj.reached(), 2);
}

TEST(Conformance, DetectOnlyHaltsAtPredictedStage) {
  TempDir tmp("conf");
  ScenarioHarness h;
  h.work_dir = tmp.path();
  auto ref = runtime::run_reference(apps::make_app(apps::with_defaults(h.app)), {}).result;
  for (int id : {2, 29, 50, 59}) {
    auto sc = scenario(id);
    auto obs = run_scenario(sc, Strategy::kDetect, h, ref);
    EXPECT_TRUE(conforms(sc.prediction, obs, Strategy::kDetect)) << id;
    EXPECT_EQ(obs.observed.effect, sc.prediction.effect) << id;
    EXPECT_EQ(obs.report.outcome.status == runtime::RunStatus::kHaltedOnDetection,
              sc.prediction.effect != Effect::kLE)
        << id;
  }
}

TEST(Conformance, MismatchIsReported) {
  TempDir tmp("conf2");
  ScenarioHarness h;
  h.work_dir = tmp.path();
  auto ref = runtime::run_reference(apps::make_app(apps::with_defaults(h.app)), {}).result;
  auto sc = scenario(2);
  auto obs = run_scenario(sc, Strategy::kMultiCkpt, h, ref);
  ScenarioPrediction wrong = sc.prediction;
  wrong.n_roll = 5;
  EXPECT_FALSE(conforms(wrong, obs, Strategy::kMultiCkpt));
  EXPECT_TRUE(conforms(sc.prediction, obs, Strategy::kMultiCkpt));
}

}  // namespace
}  // namespace twinrank::faults
