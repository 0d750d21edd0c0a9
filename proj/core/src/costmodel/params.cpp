#include "twinrank/costmodel/params.hpp"

#include <cmath>

#include <json.hpp>

namespace twinrank::costmodel {

namespace {

using json = nlohmann::ordered_json;

void require_nonnegative(double v, const char* name) {
  if (!(v >= 0) || !std::isfinite(v)) {
    throw ParameterError(std::string(name) + " must be a finite non-negative number");
  }
}

double quantity(const json& v, const char* name, bool fraction) {
  if (v.is_number()) return v.get<double>();
  if (!v.is_object() || !v.contains("value") || !v.at("value").is_number()) {
    throw ParameterError(std::string(name) + ": expected a number or {\"value\", \"unit\"}");
  }
  const double x = v.at("value").get<double>();
  const std::string unit = v.value("unit", fraction ? "" : "h");
  if (fraction) {
    if (unit == "%") return x / 100.0;
    if (unit.empty()) return x;
  } else {
    if (unit == "h") return x;
    if (unit == "min") return x / 60.0;
    if (unit == "s") return hours_from_seconds(x);
  }
  throw ParameterError(std::string(name) + ": unsupported unit '" + unit + "'");
}

ExecParams params_from(const json& j) {
  if (!j.is_object()) throw ParameterError("parameters must be a JSON object");
  static const char* const kKnown[] = {"T_prog", "T_comp", "T_rest", "f_d", "X", "n", "t_cs",
                                       "t_i", "k", "t_ca", "T_compA", "MTBE"};
  for (const auto& [key, _] : j.items()) {
    bool known = false;
    for (const char* k : kKnown) known = known || key == k;
    if (!known) throw ParameterError("unknown parameter: " + key);
  }
  if (!j.contains("T_prog")) throw ParameterError("T_prog is required");
  ExecParams p;
  auto time = [&](const char* name, double& out) {
    if (j.contains(name)) out = quantity(j.at(name), name, false);
  };
  time("T_prog", p.T_prog);
  time("T_comp", p.T_comp);
  time("T_rest", p.T_rest);
  time("t_cs", p.t_cs);
  time("t_i", p.t_i);
  time("t_ca", p.t_ca);
  time("T_compA", p.T_compA);
  if (j.contains("f_d")) p.f_d = quantity(j.at("f_d"), "f_d", true);
  if (j.contains("X")) p.X = quantity(j.at("X"), "X", true);
  if (j.contains("n")) p.n = quantity(j.at("n"), "n", true);
  if (j.contains("k")) p.k = quantity(j.at("k"), "k", true);
  if (j.contains("MTBE")) p.MTBE = quantity(j.at("MTBE"), "MTBE", false);
  validate(p);
  return p;
}

std::vector<double> number_list(const json& j, const char* key, bool fraction) {
  std::vector<double> out;
  if (!j.contains(key)) return out;
  if (!j.at(key).is_array()) throw ParameterError(std::string(key) + " must be an array");
  for (const auto& v : j.at(key)) out.push_back(quantity(v, key, fraction));
  return out;
}

}  // namespace

void validate(const ExecParams& p) {
  require_nonnegative(p.T_prog, "T_prog");
  require_nonnegative(p.T_comp, "T_comp");
  require_nonnegative(p.T_rest, "T_rest");
  require_nonnegative(p.n, "n");
  require_nonnegative(p.t_cs, "t_cs");
  require_nonnegative(p.t_i, "t_i");
  require_nonnegative(p.t_ca, "t_ca");
  require_nonnegative(p.T_compA, "T_compA");
  if (!(p.f_d >= 0 && p.f_d < 1)) throw ParameterError("f_d must be in [0, 1)");
  if (p.X && !(*p.X > 0 && *p.X < 1)) throw ParameterError("X must be in (0, 1)");
  if (p.k) require_nonnegative(*p.k, "k");
  if (p.MTBE && !(*p.MTBE > 0)) throw ParameterError("MTBE must be positive");
}

ExecParams parse_params(std::string_view text) {
  try {
    return params_from(json::parse(text));
  } catch (const json::exception& e) {
    throw ParameterError(std::string("parameter JSON: ") + e.what());
  }
}

ModelFile parse_model_file(std::string_view text) {
  try {
    const json j = json::parse(text);
    if (!j.is_object() || !j.contains("apps") || !j.at("apps").is_object() || j.at("apps").empty()) {
      throw ParameterError("model file needs a non-empty \"apps\" object");
    }
    ModelFile m;
    json shared = json::object();
    for (const char* key : {"t_i", "MTBE"}) {
      if (j.contains(key)) shared[key] = j.at(key);
    }
    for (const auto& [name, body] : j.at("apps").items()) {
      if (!body.is_object()) throw ParameterError("apps." + name + " must be an object");
      json merged = shared;
      merged.update(body);
      m.apps.emplace_back(name, params_from(merged));
    }
    m.X = number_list(j, "X", true);
    m.k = number_list(j, "k", true);
    m.breakeven_k = number_list(j, "breakeven_k", true);
    for (double x : m.X) {
      if (!(x > 0 && x < 1)) throw ParameterError("X values must be in (0, 1)");
    }
    if (j.contains("detection_table")) {
      const json& t = j.at("detection_table");
      m.detection_app = t.at("app").get<std::string>();
      m.detection_k_max = t.value("k_max", 4);
      bool found = false;
      for (const auto& [name, _] : m.apps) found = found || name == *m.detection_app;
      if (!found) throw ParameterError("detection_table.app names no entry of apps");
    }
    if (j.contains("mtbe_samples")) {
      const json& s = j.at("mtbe_samples");
      m.mtbe.min_hours = quantity(s.at("min"), "mtbe_samples.min", false);
      m.mtbe.max_hours = quantity(s.at("max"), "mtbe_samples.max", false);
      m.mtbe.count = s.value("count", 64);
      if (!(m.mtbe.min_hours > 0 && m.mtbe.max_hours > m.mtbe.min_hours && m.mtbe.count >= 2)) {
        throw ParameterError("mtbe_samples needs 0 < min < max and count >= 2");
      }
    }
    return m;
  } catch (const json::exception& e) {
    throw ParameterError(std::string("model file: ") + e.what());
  }
}

}  // namespace twinrank::costmodel
