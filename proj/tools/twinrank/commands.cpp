#include "commands.hpp"

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "json.hpp"
#include "twinrank/apps.hpp"
#include "twinrank/checkpoint.hpp"
#include "twinrank/core.hpp"
#include "twinrank/costmodel.hpp"
#include "twinrank/faults.hpp"
#include "twinrank/runtime.hpp"

namespace twinrank::cli {
namespace {

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;
using Clock = std::chrono::steady_clock;

/// Bad contents in an input file (as opposed to a bad flag).
class DataError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::string hex64(std::uint64_t v) {
  char buf[19];
  std::snprintf(buf, sizeof buf, "0x%016llx", static_cast<unsigned long long>(v));
  return buf;
}

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw StorageError("cannot read " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const fs::path& path, const std::string& text) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw StorageError("cannot write " + path.string());
  out << text;
  if (!out) throw StorageError("write failed: " + path.string());
}

fs::path default_out_dir() {
  if (const char* env = std::getenv(kOutDirEnv); env != nullptr && *env != '\0') return env;
  return "twinrank-out";
}

// ---------------------------------------------------------------- run ---

struct RunConfig {
  std::string app = "matmul";
  std::string strategy = "detect";
  int scenario = 0;
  std::uint32_t size = 0;
  std::uint32_t ranks = 0;
  std::uint32_t iterations = 500;
  std::uint32_t repeats = 0;
  std::uint32_t ckpt_every = 0;
  std::uint32_t tile = 0;
  std::uint64_t budget = 0;
  std::uint64_t seed = 1;
  std::string mode = "interleaved";
  std::uint32_t bit = faults::kDefaultBit;
  std::uint32_t strand = 1;
  std::string out;
  std::string config;
};

template <typename T>
void override_from(const json& j, const char* key, T& field) {
  if (!j.contains(key)) return;
  try {
    field = j.at(key).get<T>();
  } catch (const json::exception& e) {
    throw DataError(std::string("config key '") + key + "': " + e.what());
  }
}

void apply_config_file(RunConfig& rc) {
  json j;
  try {
    j = json::parse(read_file(rc.config));
  } catch (const json::parse_error& e) {
    throw DataError(std::string("config file: ") + e.what());
  }
  if (!j.is_object()) throw DataError("config file must hold a JSON object");
  static const std::set<std::string> known = {
      "app",  "strategy", "scenario", "size",  "ranks", "iterations", "repeats", "ckpt_every",
      "tile", "budget",   "seed",     "mode",  "bit",   "strand",     "out"};
  for (const auto& [key, _] : j.items()) {
    if (!known.contains(key)) throw DataError("config file: unknown key '" + key + "'");
  }
  override_from(j, "app", rc.app);
  override_from(j, "strategy", rc.strategy);
  override_from(j, "scenario", rc.scenario);
  override_from(j, "size", rc.size);
  override_from(j, "ranks", rc.ranks);
  override_from(j, "iterations", rc.iterations);
  override_from(j, "repeats", rc.repeats);
  override_from(j, "ckpt_every", rc.ckpt_every);
  override_from(j, "tile", rc.tile);
  override_from(j, "budget", rc.budget);
  override_from(j, "seed", rc.seed);
  override_from(j, "mode", rc.mode);
  override_from(j, "bit", rc.bit);
  override_from(j, "strand", rc.strand);
  override_from(j, "out", rc.out);
}

runtime::ScheduleMode parse_mode(const std::string& m) {
  if (m == "interleaved") return runtime::ScheduleMode::kInterleaved;
  if (m == "dual") return runtime::ScheduleMode::kDualStrand;
  throw ConfigError("unknown mode '" + m + "' (interleaved|dual)");
}

json event_json(const runtime::DetectionEvent& e) {
  return json::parse(runtime::to_json_line(e));
}

/// Two unreplicated instances and a comparison of their results; a third
/// instance settles a mismatch by majority.
runtime::RunReport run_baseline(const std::shared_ptr<const runtime::App>& app,
                                runtime::RunOptions options,
                                std::optional<faults::InjectionPoint> point,
                                checkpoint::LedgerStore& ledger, json& timing) {
  options.replication = 1;
  auto instance = [&](bool faulty) {
    runtime::Run run(app, options);
    std::unique_ptr<faults::FaultInjector> injector;
    if (faulty && point) {
      injector = std::make_unique<faults::FaultInjector>(*point, ledger);
      run.set_fault_hook(injector.get());
    }
    run.run_to_end();
    return run.result_bytes();
  };

  runtime::RunReport report;
  auto t0 = Clock::now();
  Bytes first = instance(false);
  double t_first = seconds_since(t0);
  t0 = Clock::now();
  Bytes second = instance(true);
  double t_second = seconds_since(t0);
  t0 = Clock::now();
  bool equal = first == second;
  double t_comp = seconds_since(t0);
  timing["instance_seconds"] = json::array({t_first, t_second});
  timing["compare_seconds"] = t_comp;
  report.result = first;
  if (!equal) {
    t0 = Clock::now();
    Bytes third = instance(false);
    timing["rerun_seconds"] = seconds_since(t0);
    report.outcome.restarts_used = 1;
    report.resumed_from = "BEGIN";
    if (third == first || third == second) {
      report.outcome.status = runtime::RunStatus::kRecovered;
      report.result = third;
    } else {
      report.outcome.status = runtime::RunStatus::kHaltedOnDetection;
      report.result.clear();
    }
  }
  return report;
}

int cmd_run(RunConfig rc, std::ostream& out) {
  if (!rc.config.empty()) apply_config_file(rc);
  if (rc.out.empty()) rc.out = default_out_dir().string();
  static const std::set<std::string> strategies = {"baseline-dual", "detect", "multi-ckpt",
                                                   "single-ckpt"};
  if (!strategies.contains(rc.strategy)) throw ConfigError("unknown strategy '" + rc.strategy + "'");
  if (rc.scenario != 0 && rc.app != "matmul") {
    throw ConfigError("--scenario is only valid with --app matmul");
  }
  if (rc.scenario < 0 || rc.scenario > faults::kCatalogSize) {
    throw ConfigError("--scenario must be in 1.." + std::to_string(faults::kCatalogSize));
  }

  apps::AppConfig ac{.name = rc.app,
                     .size = rc.size,
                     .nranks = rc.ranks,
                     .iterations = rc.iterations,
                     .repeats = rc.repeats,
                     .ckpt_every = rc.ckpt_every,
                     .tile = rc.tile,
                     .seed = rc.seed};
  ac = apps::with_defaults(ac);
  auto app = apps::make_app(ac);

  runtime::RunOptions options;
  options.mode = parse_mode(rc.mode);
  options.seed = rc.seed;
  options.toe_budget = rc.budget;

  checkpoint::RunDirectory dir(rc.out);
  dir.reset();

  std::optional<faults::InjectionPoint> point;
  if (rc.scenario != 0) {
    faults::FaultSpec spec = faults::scenario(rc.scenario).spec;
    spec.bit = rc.bit;
    spec.strand = rc.strand;
    const auto& mm = dynamic_cast<const apps::MatmulApp&>(*app);
    point = faults::resolve(spec, mm);
  }

  json timing;
  runtime::RunReport report;
  auto t0 = Clock::now();
  if (rc.strategy == "baseline-dual") {
    if (point) point->strand = 0;
    report = run_baseline(app, options, point, dir, timing);
  } else {
    std::unique_ptr<faults::FaultInjector> injector;
    if (point) injector = std::make_unique<faults::FaultInjector>(*point, dir);
    if (rc.strategy == "detect") {
      report = runtime::run_detect_only(app, options, injector.get());
      for (const auto& e : report.events) dir.append_event(e);
    } else {
      checkpoint::DriverConfig dc;
      dc.app = app;
      dc.options = options;
      dc.fault = injector.get();
      report = rc.strategy == "multi-ckpt" ? checkpoint::multi_ckpt_recovery_driver(dc, dir)
                                           : checkpoint::single_ckpt_recovery_driver(dc, dir);
    }
  }
  timing["wall_seconds"] = seconds_since(t0);
  timing["steps"] = report.steps;

  const auto& outcome = report.outcome;
  json result;
  result["app"] = ac.name;
  result["size"] = ac.size;
  result["ranks"] = app->rank_count();
  result["strategy"] = rc.strategy;
  result["scenario"] = rc.scenario == 0 ? json(nullptr) : json(rc.scenario);
  result["seed"] = rc.seed;
  result["mode"] = rc.mode;
  result["budget"] = rc.budget;
  result["status"] = std::string(runtime::to_string(outcome.status));
  result["restarts_used"] = outcome.restarts_used;
  result["resumed_from"] = report.resumed_from;
  result["detection"] = outcome.detection ? event_json(*outcome.detection) : json(nullptr);
  result["events"] = report.events.size();
  result["result_bytes"] = report.result.size();
  result["result_digest"] = report.result.empty() ? json(nullptr) : json(hex64(hash64(report.result).value));

  write_file(dir.root() / "result.json", result.dump(2) + "\n");
  write_file(dir.root() / "timing.json", timing.dump(2) + "\n");
  if (!fs::exists(dir.root() / "events.jsonl")) write_file(dir.root() / "events.jsonl", "");

  out << runtime::to_string(outcome.status) << " restarts=" << outcome.restarts_used
      << " resumed_from=" << report.resumed_from;
  if (outcome.detection) {
    out << " detection=" << runtime::to_string(outcome.detection->kind) << "@"
        << outcome.detection->stage.label;
  }
  out << " out=" << dir.root().string() << "\n";
  return outcome.status == runtime::RunStatus::kHaltedOnDetection ? kExitHalted : kExitOk;
}

// -------------------------------------------------------- conformance ---

struct ConformanceConfig {
  std::uint32_t size = 64;
  std::uint32_t ranks = 5;
  std::vector<std::string> strategies{"detect", "multi-ckpt"};
  std::string mode = "interleaved";
  std::string mutation = "none";
  std::string out;
};

faults::Strategy parse_strategy(const std::string& s) {
  if (s == "detect") return faults::Strategy::kDetect;
  if (s == "multi-ckpt") return faults::Strategy::kMultiCkpt;
  if (s == "single-ckpt") return faults::Strategy::kSingleCkpt;
  throw ConfigError("conformance strategy must be detect, multi-ckpt or single-ckpt");
}

std::string prediction_csv(const faults::ScenarioPrediction& p) {
  return std::string(faults::to_string(p.effect)) + "," + p.p_det + "," + p.p_rec + "," +
         std::to_string(p.n_roll);
}

int cmd_conformance(ConformanceConfig cc, std::ostream& out) {
  if (cc.out.empty()) cc.out = default_out_dir().string();
  faults::ScenarioHarness harness;
  harness.app.size = cc.size;
  harness.app.nranks = cc.ranks;
  harness.options.mode = parse_mode(cc.mode);
  if (cc.mutation == "skip-copy") {
    harness.options.mutations.skip_copy_on_receive = true;
  } else if (cc.mutation == "drop-dirty") {
    harness.options.mutations.drop_dirty_state = true;
  } else if (cc.mutation != "none") {
    throw ConfigError("unknown mutation '" + cc.mutation + "'");
  }
  harness.work_dir = fs::path(cc.out) / "conformance-runs";

  std::vector<faults::Strategy> strategies;
  for (const auto& s : cc.strategies) strategies.push_back(parse_strategy(s));

  auto app = apps::make_app(apps::with_defaults(harness.app));
  Bytes reference = runtime::run_reference(app, harness.options).result;

  std::ostringstream csv;
  csv << "scenario,strategy,pred_effect,pred_p_det,pred_p_rec,pred_n_roll,"
         "obs_effect,obs_p_det,obs_p_rec,obs_n_roll,status,result_matches,pass\n";
  std::map<std::string, std::pair<int, int>> tally;
  for (const auto& sc : faults::catalog()) {
    for (auto strategy : strategies) {
      auto obs = faults::run_scenario(sc, strategy, harness, reference);
      bool pass = faults::conforms(sc.prediction, obs, strategy);
      auto& t = tally[std::string(faults::to_string(strategy))];
      ++t.second;
      if (pass) ++t.first;
      csv << sc.spec.scenario_id << "," << faults::to_string(strategy) << ","
          << prediction_csv(sc.prediction) << "," << prediction_csv(obs.observed) << ","
          << runtime::to_string(obs.report.outcome.status) << ","
          << (obs.result_matches_reference ? "true" : "false") << "," << (pass ? "PASS" : "FAIL")
          << "\n";
      if (!pass) {
        out << "FAIL scenario " << sc.spec.scenario_id << " " << faults::to_string(strategy)
            << ": predicted " << prediction_csv(sc.prediction) << " observed "
            << prediction_csv(obs.observed) << "\n";
      }
    }
  }
  fs::remove_all(harness.work_dir);
  fs::path csv_path = fs::path(cc.out) / "conformance.csv";
  write_file(csv_path, csv.str());

  bool all = true;
  for (const auto& [name, t] : tally) {
    out << name << ": " << t.first << "/" << t.second << " pass\n";
    all = all && t.first == t.second;
  }
  out << "csv: " << csv_path.string() << "\n";
  return all ? kExitOk : kExitConformanceFailures;
}

// -------------------------------------------------------------- model ---

struct ModelConfig {
  std::string params;
  std::string out;
  bool breakeven = false;
};

std::string fmt(double v, int precision) {
  std::ostringstream ss;
  ss << std::fixed << std::setprecision(precision) << v;
  return ss.str();
}

int cmd_model(ModelConfig mc, std::ostream& out) {
  if (mc.out.empty()) mc.out = default_out_dir().string();
  costmodel::ModelFile mf;
  try {
    mf = costmodel::parse_model_file(read_file(mc.params));
  } catch (const costmodel::ParameterError& e) {
    throw DataError(std::string("params file: ") + e.what());
  }
  if (mf.apps.empty()) throw DataError("params file: no applications");
  fs::path dir = mc.out;

  std::vector<std::string> names;
  for (const auto& [name, _] : mf.apps) names.push_back(name);
  auto rows = costmodel::strategy_table(mf.apps, mf.X, mf.k);
  write_file(dir / "strategy_times.csv", costmodel::to_csv(rows, names));
  out << "strategy times: " << (dir / "strategy_times.csv").string() << "\n";

  const costmodel::ExecParams* det_app = nullptr;
  if (mf.detection_app) {
    for (const auto& [name, p] : mf.apps) {
      if (name == *mf.detection_app) det_app = &p;
    }
    if (det_app == nullptr) throw DataError("params file: detection_table app '" + *mf.detection_app + "' not found");
    auto table = costmodel::detection_table(*det_app, mf.X, mf.detection_k_max);
    write_file(dir / "detection_points.csv", costmodel::to_csv(table));
    out << "detection points: " << (dir / "detection_points.csv").string() << "\n";
  }

  if (mc.breakeven) {
    if (det_app == nullptr) throw DataError("params file: breakeven needs a detection_table app");
    std::ostringstream csv;
    csv << "k,x_threshold\n";
    out << "breakeven (" << *mf.detection_app << "):";
    for (double k : mf.breakeven_k) {
      double x = costmodel::rollback_breakeven(*det_app, k);
      csv << fmt(k, 0) << "," << fmt(x, 6) << "\n";
      out << " k=" << fmt(k, 0) << ":" << fmt(100.0 * x, 2) << "%";
    }
    out << "\n";
    write_file(dir / "breakeven.csv", csv.str());
  }

  std::ostringstream curves;
  curves << "app,mtbe_h,alpha,baseline_h,detect_h,multi_ckpt_h,single_ckpt_h\n";
  for (auto [name, p] : mf.apps) {
    if (!p.X) p.X = mf.X.empty() ? 0.5 : mf.X[mf.X.size() / 2];
    if (!p.k) p.k = mf.k.empty() ? 1.0 : mf.k[mf.k.size() / 2];
    for (const auto& s : costmodel::aet_curve(p, mf.mtbe)) {
      curves << name << "," << s.mtbe << "," << s.alpha;
      for (double v : s.aet) curves << "," << v;
      curves << "\n";
    }
  }
  write_file(dir / "aet_curves.csv", curves.str());
  out << "aet: " << (dir / "aet_curves.csv").string() << "\n";
  return kExitOk;
}

// ------------------------------------------------------------- report ---

struct ReportConfig {
  std::string run_dir;
  std::string catalog;
};

json scenario_json(const faults::Scenario& s) {
  json j;
  j["id"] = s.spec.scenario_id;
  j["window"] = {{"from", s.spec.window.from}, {"to", s.spec.window.to}};
  j["role"] = std::string(faults::to_string(s.spec.role));
  j["worker"] = s.spec.worker;
  j["datum"] = std::string(faults::to_string(s.spec.datum));
  j["row"] = std::string(faults::to_string(s.spec.row));
  j["col"] = s.spec.col;
  j["strand"] = s.spec.strand;
  j["bit"] = s.spec.bit;
  j["effect"] = std::string(faults::to_string(s.prediction.effect));
  j["p_det"] = s.prediction.p_det;
  j["p_rec"] = s.prediction.p_rec;
  j["n_roll"] = s.prediction.n_roll;
  return j;
}

int cmd_report(const ReportConfig& rc, std::ostream& out) {
  if (rc.run_dir.empty() && rc.catalog.empty()) {
    throw ConfigError("report needs --run-dir and/or --catalog");
  }
  if (!rc.catalog.empty()) {
    json arr = json::array();
    for (const auto& s : faults::catalog()) arr.push_back(scenario_json(s));
    write_file(rc.catalog, arr.dump(2) + "\n");
    out << "catalog: " << arr.size() << " scenarios -> " << rc.catalog << "\n";
  }
  if (!rc.run_dir.empty()) {
    fs::path dir = rc.run_dir;
    json result;
    try {
      result = json::parse(read_file(dir / "result.json"));
    } catch (const json::parse_error& e) {
      throw DataError(std::string("result.json: ") + e.what());
    }
    out << "app=" << result.value("app", "?") << " strategy=" << result.value("strategy", "?")
        << " status=" << result.value("status", "?")
        << " restarts=" << result.value("restarts_used", 0) << "\n";
    checkpoint::RunDirectory rd(dir);
    std::vector<runtime::DetectionEvent> events;
    try {
      events = rd.read_events();
    } catch (const FormatError& e) {
      throw DataError(std::string("events.jsonl: ") + e.what());
    }
    for (const auto& e : events) {
      out << "  " << runtime::to_string(e.kind) << " rank=" << e.rank.id << " stage=" << e.stage.label
          << " detail=" << e.detail << " step=" << e.step << "\n";
    }
    out << "system checkpoints: " << rd.system_count() << ", application images: "
        << rd.app_image_count() << "\n";
    fs::path timing = dir / "timing.json";
    if (fs::exists(timing)) {
      json t = json::parse(read_file(timing), nullptr, false);
      if (!t.is_discarded() && t.contains("wall_seconds")) {
        out << "wall: " << fmt(t["wall_seconds"].get<double>(), 4) << " s\n";
      }
    }
  }
  return kExitOk;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App cli{"Replicated execution with silent-error detection and checkpoint recovery"};
  cli.require_subcommand(1);
  cli.set_version_flag("--version", "twinrank 0.1.0");

  RunConfig rc;
  auto* run = cli.add_subcommand("run", "Execute one application under a strategy");
  run->add_option("--app", rc.app, "matmul | jacobi | sw")->capture_default_str();
  run->add_option("--strategy", rc.strategy, "baseline-dual | detect | multi-ckpt | single-ckpt")
      ->capture_default_str();
  run->add_option("--scenario", rc.scenario, "Injected fault scenario 1..64 (matmul only)");
  run->add_option("--size", rc.size, "Problem size N (0 = app default)");
  run->add_option("--ranks", rc.ranks, "Rank count (0 = app default)");
  run->add_option("--iterations", rc.iterations, "Jacobi sweeps")->capture_default_str();
  run->add_option("--repeats", rc.repeats, "Matmul passes");
  run->add_option("--ckpt-every", rc.ckpt_every, "Sweeps/waves between checkpoints");
  run->add_option("--tile", rc.tile, "Smith-Waterman tile height");
  run->add_option("--budget", rc.budget, "TOE step budget")->capture_default_str();
  run->add_option("--seed", rc.seed, "Input and schedule seed")->capture_default_str();
  run->add_option("--mode", rc.mode, "interleaved | dual")->capture_default_str();
  run->add_option("--bit", rc.bit, "Bit flipped by the scenario")->capture_default_str();
  run->add_option("--strand", rc.strand, "Strand receiving the flip")->capture_default_str();
  run->add_option("--out", rc.out, std::string("Output directory (default $") + kOutDirEnv + ")");
  run->add_option("--config", rc.config, "JSON file whose keys override the flags");

  ConformanceConfig cc;
  auto* conf = cli.add_subcommand("conformance", "Check all scenarios against their predictions");
  conf->add_option("--size", cc.size)->capture_default_str();
  conf->add_option("--ranks", cc.ranks)->capture_default_str();
  conf->add_option("--strategies", cc.strategies, "detect, multi-ckpt, single-ckpt")
      ->delimiter(',')
      ->capture_default_str();
  conf->add_option("--mode", cc.mode)->capture_default_str();
  conf->add_option("--mutation", cc.mutation)->group("");
  conf->add_option("--out", cc.out, "Directory for conformance.csv");

  ModelConfig mc;
  auto* model = cli.add_subcommand("model", "Evaluate the timing model");
  model->add_option("--params", mc.params, "Parameter JSON file")->required();
  model->add_option("--out", mc.out, "Directory for the CSV outputs");
  model->add_flag("--breakeven", mc.breakeven, "Also compute rollback break-even points");

  ReportConfig pc;
  auto* report = cli.add_subcommand("report", "Summarize a run directory or export the catalog");
  report->add_option("--run-dir", pc.run_dir);
  report->add_option("--catalog", pc.catalog, "Write the scenario catalog JSON here");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    cli.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << cli.help();
    return kExitOk;
  } catch (const CLI::CallForVersion&) {
    out << cli.version() << "\n";
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  }

  try {
    if (run->parsed()) return cmd_run(rc, out);
    if (conf->parsed()) return cmd_conformance(cc, out);
    if (model->parsed()) return cmd_model(mc, out);
    return cmd_report(pc, out);
  } catch (const DataError& e) {
    err << "error: " << e.what() << "\n";
    return kExitDataError;
  } catch (const FormatError& e) {
    err << "error: " << e.what() << "\n";
    return kExitDataError;
  } catch (const costmodel::ParameterError& e) {
    err << "error: " << e.what() << "\n";
    return kExitDataError;
  } catch (const ConfigError& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::out_of_range& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const StorageError& e) {
    err << "error: " << e.what() << "\n";
    return kExitIoError;
  } catch (const fs::filesystem_error& e) {
    err << "error: " << e.what() << "\n";
    return kExitIoError;
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << "\n";
    return kExitInternal;
  }
}

}  // namespace twinrank::cli
