#include "srgeo/cli/config.hpp"

#include <algorithm>
#include <fstream>
#include <initializer_list>

#include "srgeo/expression.hpp"

namespace srgeo::cli {

using nlohmann::json;

namespace {

void reject_unknown(const json& obj, std::initializer_list<const char*> known,
                    const std::string& where) {
  for (const auto& [key, value] : obj.items()) {
    const bool ok = std::any_of(known.begin(), known.end(),
                                [&](const char* k) { return key == k; });
    if (!ok) throw ConfigError("unknown key '" + key + "' in " + where);
  }
}

double number(const json& v, const std::string& what) {
  if (!v.is_number()) throw ConfigError(what + " must be a number");
  return v.get<double>();
}

std::vector<double> numbers(const json& v, std::size_t n, const std::string& what) {
  if (!v.is_array() || v.size() != n) {
    throw ConfigError(what + " must be an array of " + std::to_string(n) + " numbers");
  }
  std::vector<double> out;
  for (const auto& e : v) out.push_back(number(e, what));
  return out;
}

std::string text(const json& v, const std::string& what) {
  if (v.is_number()) return v.dump();
  if (!v.is_string()) throw ConfigError(what + " must be a string");
  return v.get<std::string>();
}

MetricSpec parse_metric(const json& v) {
  MetricSpec spec;
  if (v.is_string()) {
    spec.name = v.get<std::string>();
    if (spec.name != "flat" && spec.name != "sphere" && spec.name != "hyperbolic") {
      throw ConfigError("unknown metric '" + spec.name + "'");
    }
    return spec;
  }
  if (!v.is_object()) throw ConfigError("metric must be a name or an object");
  reject_unknown(v, {"g11", "g12", "g22", "domain", "geodesic_parallel"}, "metric");
  spec.name = "custom";
  if (v.contains("g11")) spec.g11 = text(v["g11"], "metric.g11");
  if (v.contains("g12")) spec.g12 = text(v["g12"], "metric.g12");
  if (v.contains("g22")) spec.g22 = text(v["g22"], "metric.g22");
  if (v.contains("geodesic_parallel")) {
    if (!v["geodesic_parallel"].is_boolean()) {
      throw ConfigError("metric.geodesic_parallel must be a boolean");
    }
    spec.geodesic_parallel = v["geodesic_parallel"].get<bool>();
  }
  if (v.contains("domain")) {
    const json& d = v["domain"];
    if (!d.is_object()) throw ConfigError("metric.domain must be an object");
    reject_unknown(d, {"x1", "x2"}, "metric.domain");
    if (d.contains("x1")) {
      const auto r = numbers(d["x1"], 2, "metric.domain.x1");
      spec.domain.x1_min = r[0];
      spec.domain.x1_max = r[1];
    }
    if (d.contains("x2")) {
      const auto r = numbers(d["x2"], 2, "metric.domain.x2");
      spec.domain.x2_min = r[0];
      spec.domain.x2_max = r[1];
    }
    if (!(spec.domain.x1_min < spec.domain.x1_max) || !(spec.domain.x2_min < spec.domain.x2_max)) {
      throw ConfigError("metric.domain ranges must be nonempty");
    }
  }
  return spec;
}

OutputKind parse_output(const json& v) {
  const std::string s = text(v, "outputs entry");
  for (OutputKind k : {OutputKind::TrajectoryCsv, OutputKind::EventsJson, OutputKind::FrontSvg,
                       OutputKind::ReportText}) {
    if (s == to_string(k)) return k;
  }
  throw ConfigError("unknown output '" + s + "'");
}

std::size_t count_value(const json& v, const std::string& what) {
  if (!v.is_number_integer() || v.get<long long>() < 0) {
    throw ConfigError(what + " must be a nonnegative integer");
  }
  return v.get<std::size_t>();
}

}  // namespace

const char* to_string(OutputKind kind) {
  switch (kind) {
    case OutputKind::TrajectoryCsv: return "trajectory-csv";
    case OutputKind::EventsJson: return "events-json";
    case OutputKind::FrontSvg: return "front-svg";
    case OutputKind::ReportText: return "report-text";
  }
  return "?";
}

bool RunConfig::wants(OutputKind kind) const {
  return std::find(outputs.begin(), outputs.end(), kind) != outputs.end();
}

RunConfig parse_config(const json& doc) {
  if (!doc.is_object()) throw ConfigError("config must be a JSON object");
  reject_unknown(doc, {"metric", "initial", "window", "tol", "outputs", "seed", "sweep", "render"},
                 "config");
  RunConfig cfg;
  if (doc.contains("metric")) cfg.metric = parse_metric(doc["metric"]);
  if (doc.contains("initial")) {
    const auto v = numbers(doc["initial"], 6, "initial");
    cfg.initial = ExtremalState{v[0], v[1], v[2], v[3], v[4], v[5]};
  }
  if (doc.contains("window")) {
    const auto v = numbers(doc["window"], 2, "window");
    cfg.window = {v[0], v[1]};
  }
  if (!(cfg.window.t1 != cfg.window.t0)) throw ConfigError("window must be nonempty");
  if (doc.contains("tol")) cfg.tol = number(doc["tol"], "tol");
  if (!(cfg.tol >= 1e-14 && cfg.tol <= 1e-3)) throw ConfigError("tol must lie in [1e-14, 1e-3]");
  if (doc.contains("outputs")) {
    if (!doc["outputs"].is_array()) throw ConfigError("outputs must be an array");
    cfg.outputs.clear();
    for (const auto& e : doc["outputs"]) cfg.outputs.push_back(parse_output(e));
  }
  if (doc.contains("seed")) {
    const json& seed = doc["seed"];
    if (!seed.is_number_integer() || seed.get<long long>() < 0) {
      throw ConfigError("seed must be a nonnegative integer");
    }
    cfg.seed = doc["seed"].get<std::uint64_t>();
  }
  if (doc.contains("sweep")) {
    const json& s = doc["sweep"];
    if (!s.is_object()) throw ConfigError("sweep must be an object");
    reject_unknown(s, {"count", "slice"}, "sweep");
    if (s.contains("count")) cfg.sweep.count = count_value(s["count"], "sweep.count");
    if (s.contains("slice")) {
      const std::string slice = text(s["slice"], "sweep.slice");
      if (slice == "all") {
        cfg.sweep.slice = SweepSlice::All;
      } else if (slice == "straight") {
        cfg.sweep.slice = SweepSlice::Straight;
      } else {
        throw ConfigError("unknown sweep.slice '" + slice + "'");
      }
    }
  }
  if (doc.contains("render")) {
    const json& r = doc["render"];
    if (!r.is_object()) throw ConfigError("render must be an object");
    reject_unknown(r, {"pi_prime", "samples"}, "render");
    if (r.contains("pi_prime")) {
      if (!r["pi_prime"].is_boolean()) throw ConfigError("render.pi_prime must be a boolean");
      cfg.render.pi_prime = r["pi_prime"].get<bool>();
    }
    if (r.contains("samples")) cfg.render.samples = count_value(r["samples"], "render.samples");
    if (cfg.render.samples < 2) throw ConfigError("render.samples must be at least 2");
  }
  return cfg;
}

RunConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config '" + path.string() + "'");
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("config parse error: ") + e.what());
  }
  return parse_config(doc);
}

Surface make_surface(const MetricSpec& spec) {
  try {
    if (spec.name != "custom") return Surface(builtin_chart(spec.name));
    return Surface(expression_chart(spec.g11, spec.g12, spec.g22, spec.domain,
                                    spec.geodesic_parallel));
  } catch (const ExpressionError& e) {
    throw ConfigError(std::string("metric expression: ") + e.what());
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
}

ExtremalState require_initial(const RunConfig& config, const Surface& surface) {
  if (!config.initial) throw ConfigError("initial state required");
  const ExtremalState& s = *config.initial;
  if (!surface.chart.contains(s.x1, s.x2)) {
    throw ConfigError("initial point outside the metric domain");
  }
  return s;
}

}  // namespace srgeo::cli
