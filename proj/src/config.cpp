#include "robdiff/config.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <optional>
#include <set>
#include <sstream>

#include "robdiff/adversaries.hpp"

namespace robdiff {

using nlohmann::json;

namespace {

std::string join_issues(const std::vector<ConfigIssue>& issues) {
  std::string s = "invalid config:";
  for (const auto& i : issues) s += "\n  " + (i.path.empty() ? "/" : i.path) + ": " + i.message;
  return s;
}

class Reader {
 public:
  std::vector<ConfigIssue> issues;

  void fail(const std::string& path, const std::string& msg) { issues.push_back({path, msg}); }

  const json* object(const json& parent, const std::string& path, const char* key, bool required) {
    if (!parent.contains(key)) {
      if (required) fail(path + "/" + key, "missing required key");
      return nullptr;
    }
    const json& v = parent.at(key);
    if (!v.is_object()) {
      fail(path + "/" + key, "must be an object");
      return nullptr;
    }
    return &v;
  }

  std::optional<double> number(const json& obj, const std::string& path, const char* key,
                               bool required) {
    if (!obj.contains(key)) {
      if (required) fail(path + "/" + key, "missing required key");
      return std::nullopt;
    }
    const json& v = obj.at(key);
    if (!v.is_number() || !std::isfinite(v.get<double>())) {
      fail(path + "/" + key, "must be a finite number");
      return std::nullopt;
    }
    return v.get<double>();
  }

  double number_or(const json& obj, const std::string& path, const char* key, double fallback) {
    return number(obj, path, key, false).value_or(fallback);
  }

  std::optional<std::uint64_t> unsigned_int(const json& obj, const std::string& path,
                                            const char* key) {
    if (!obj.contains(key)) return std::nullopt;
    const json& v = obj.at(key);
    if (!v.is_number_unsigned() && !(v.is_number_integer() && v.get<long long>() >= 0)) {
      fail(path + "/" + key, "must be a non-negative integer");
      return std::nullopt;
    }
    return v.get<std::uint64_t>();
  }

  std::optional<std::string> string(const json& obj, const std::string& path, const char* key,
                                    bool required) {
    if (!obj.contains(key)) {
      if (required) fail(path + "/" + key, "missing required key");
      return std::nullopt;
    }
    if (!obj.at(key).is_string()) {
      fail(path + "/" + key, "must be a string");
      return std::nullopt;
    }
    return obj.at(key).get<std::string>();
  }

  std::vector<double> number_list(const json& obj, const std::string& path, const char* key) {
    std::vector<double> out;
    if (!obj.contains(key)) {
      fail(path + "/" + key, "missing required key");
      return out;
    }
    const json& v = obj.at(key);
    if (!v.is_array()) {
      fail(path + "/" + key, "must be an array of numbers");
      return out;
    }
    for (std::size_t i = 0; i < v.size(); ++i) {
      if (!v[i].is_number()) {
        fail(path + "/" + key + "/" + std::to_string(i), "must be a number");
      } else {
        out.push_back(v[i].get<double>());
      }
    }
    return out;
  }

  void check_schema(const json& config) {
    if (!config.is_object()) {
      fail("", "config must be a JSON object");
      return;
    }
    if (!config.contains("schema_version")) {
      fail("/schema_version", "missing required key");
    } else if (!config["schema_version"].is_number_integer() ||
               config["schema_version"].get<int>() != kSchemaVersion) {
      fail("/schema_version", "unsupported schema version (expected " +
                                  std::to_string(kSchemaVersion) + ")");
    }
  }

  void finish() const {
    if (!issues.empty()) throw ConfigError(issues);
  }
};

std::optional<TestSignalSpec> parse_test_signal(Reader& rd, const json& sig, const std::string& kind) {
  const std::string p = "/signal";
  TestSignalSpec spec;
  spec.require_initial_bound = sig.value("require_initial_bound", false);
  if (kind == "ramp-parabola") {
    spec.kind = RampParabolaSignal{rd.number_or(sig, p, "f0", 0.0)};
  } else if (kind == "polynomial") {
    PolynomialSignal poly;
    poly.coefficients = rd.number_list(sig, p, "coefficients");
    spec.kind = poly;
  } else if (kind == "bang-bang") {
    BangBangSignal bb;
    bb.f0 = rd.number_or(sig, p, "f0", 0.0);
    bb.fdot0 = rd.number_or(sig, p, "fdot0", 0.0);
    if (sig.contains("switches")) {
      const auto& sw = sig.at("switches");
      if (!sw.is_array()) {
        rd.fail(p + "/switches", "must be an array");
      } else {
        for (std::size_t i = 0; i < sw.size(); ++i) {
          const std::string sp = p + "/switches/" + std::to_string(i);
          if (!sw[i].is_object()) {
            rd.fail(sp, "must be an object");
            continue;
          }
          const auto start = rd.number(sw[i], sp, "start", true);
          const auto accel = rd.number(sw[i], sp, "accel", true);
          if (start && accel) bb.switches.push_back({*start, *accel});
        }
      }
    }
    spec.kind = bb;
  } else {
    return std::nullopt;
  }
  return spec;
}

SampledTrace load_trace_file(Reader& rd, const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::ios_base::failure("cannot open trace file " + path.string());
  try {
    return read_signal_csv(in);
  } catch (const std::invalid_argument& e) {
    rd.fail("/signal/path", e.what());
    return {};
  }
}

std::optional<SampledTrace> build_adversary(Reader& rd, const json& sig, double L, double N,
                                            double dt) {
  const std::string p = "/signal";
  const auto which = rd.string(sig, p, "adversary", true);
  if (!which) return std::nullopt;
  const bool minus = sig.value("variant", std::string("+")) == "-";
  try {
    if (*which == "exact-trap") {
      const double tau = rd.number_or(sig, p, "tau", 0.0);
      const double horizon = rd.number_or(sig, p, "horizon", tau + 6.0 * std::sqrt(N / L));
      return exact_trap(L, N, tau, dt, horizon).trace;
    }
    if (*which == "causal") {
      const double tau = rd.number_or(sig, p, "tau", 0.0);
      const double horizon = rd.number_or(sig, p, "horizon", tau + 6.0 * std::sqrt(N / L));
      auto pair = causal_pair(L, N, tau, dt, horizon);
      return minus ? pair.second.trace : pair.first.trace;
    }
    if (*which == "quasi-exact") {
      return quasi_exact_trap(L, N, dt, rd.unsigned_int(sig, p, "r").value_or(1)).trace;
    }
    if (*which == "sampled-zero") {
      auto pair = sampled_zero_family(L, dt, rd.unsigned_int(sig, p, "n").value_or(20));
      return minus ? pair.second.trace : pair.first.trace;
    }
    rd.fail(p + "/adversary", "unknown adversary '" + *which + "'");
  } catch (const std::invalid_argument& e) {
    rd.fail(p, e.what());
  }
  return std::nullopt;
}

NoiseScheduleSpec parse_noise(Reader& rd, const json& noise, std::uint64_t run_seed) {
  NoiseScheduleSpec s;
  if (!noise.contains("segments")) return s;
  const auto& segs = noise.at("segments");
  if (!segs.is_array()) {
    rd.fail("/noise/segments", "must be an array");
    return s;
  }
  double cursor = 0.0;
  for (std::size_t i = 0; i < segs.size(); ++i) {
    const std::string p = "/noise/segments/" + std::to_string(i);
    const json& sj = segs[i];
    if (!sj.is_object()) {
      rd.fail(p, "must be an object");
      continue;
    }
    NoiseSegment seg;
    seg.start = rd.number_or(sj, p, "start", cursor);
    seg.duration = rd.number(sj, p, "duration", true).value_or(0.0);
    const auto kind = rd.string(sj, p, "kind", true);
    if (!kind) continue;
    if (*kind == "constant") {
      seg.kind = ConstantNoise{rd.number(sj, p, "level", true).value_or(0.0)};
    } else if (*kind == "arc") {
      seg.kind = ParabolaArcNoise{rd.number_or(sj, p, "factor", 1.0)};
    } else if (*kind == "step") {
      seg.kind = StepNoise{rd.number(sj, p, "from", true).value_or(0.0),
                           rd.number(sj, p, "to", true).value_or(0.0),
                           rd.number(sj, p, "at", true).value_or(0.0)};
    } else if (*kind == "white") {
      seg.kind = UniformWhiteNoise{rd.unsigned_int(sj, p, "seed").value_or(run_seed)};
    } else {
      rd.fail(p + "/kind", "unknown noise kind '" + *kind + "'");
      continue;
    }
    cursor = seg.end();
    s.segments.push_back(seg);
  }
  return s;
}

}  // namespace

ConfigError::ConfigError(std::vector<ConfigIssue> issues)
    : std::runtime_error(join_issues(issues)), issues_(std::move(issues)) {}

json ConfigError::to_json() const {
  json arr = json::array();
  for (const auto& i : issues_) arr.push_back({{"path", i.path}, {"message", i.message}});
  return {{"errors", arr}};
}

json load_json_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::ios_base::failure("cannot open " + path.string());
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw ConfigError({{"", std::string("not valid JSON: ") + e.what()}});
  }
}

Scenario parse_scenario(const json& config, const std::filesystem::path& base_dir) {
  Reader rd;
  rd.check_schema(config);
  rd.finish();

  Scenario sc;
  sc.name = config.value("name", std::string("scenario"));
  sc.config_hash = config_hash(config);

  const json* sig = rd.object(config, "", "signal", true);
  const json* run = rd.object(config, "", "run", true);
  const json* noise = rd.object(config, "", "noise", false);

  if (run) {
    sc.params.dt = rd.number(*run, "/run", "dt", true).value_or(0.01);
    sc.seed = rd.unsigned_int(*run, "/run", "seed").value_or(0);
    sc.t_start = rd.number_or(*run, "/run", "t_start", 0.0);
    if (!(sc.params.dt > 0.0)) rd.fail("/run/dt", "must be > 0");
    if (sc.t_start < 0.0) rd.fail("/run/t_start", "must be >= 0");
  }
  if (noise) {
    sc.params.N = rd.number(*noise, "/noise", "N", true).value_or(0.0);
    if (sc.params.N < 0.0) rd.fail("/noise/N", "must be >= 0");
  }

  std::string kind;
  if (sig) {
    sc.params.L = rd.number(*sig, "/signal", "L", true).value_or(1.0);
    sc.params.R = rd.number_or(*sig, "/signal", "R", 0.0);
    if (!(sc.params.L >= 0.0)) rd.fail("/signal/L", "must be >= 0");
    if (!(sc.params.R >= 0.0)) rd.fail("/signal/R", "must be >= 0");
    kind = rd.string(*sig, "/signal", "kind", true).value_or("");
  }
  const bool preloaded = kind == "trace-file" || kind == "adversary";
  if (run) {
    const auto d = rd.number(*run, "/run", "duration", !preloaded);
    if (d) {
      sc.duration = *d;
      if (!(sc.duration > 0.0)) rd.fail("/run/duration", "must be > 0");
    }
  }
  if (noise && !preloaded) sc.noise = parse_noise(rd, *noise, sc.seed);

  if (config.contains("engines")) {
    const auto& engines = config.at("engines");
    if (!engines.is_array() || engines.empty()) {
      rd.fail("/engines", "must be a non-empty array");
    } else {
      std::set<std::string> names;
      for (std::size_t i = 0; i < engines.size(); ++i) {
        const std::string p = "/engines/" + std::to_string(i);
        if (!engines[i].is_object()) {
          rd.fail(p, "must be an object");
          continue;
        }
        EngineSpec es;
        es.kind = rd.string(engines[i], p, "kind", true).value_or("");
        es.name = rd.string(engines[i], p, "name", false).value_or(es.kind);
        if (engines[i].contains("params")) es.params = engines[i].at("params");
        if (!names.insert(es.name).second) rd.fail(p + "/name", "duplicate engine name '" + es.name + "'");
        sc.engines.push_back(es);
      }
    }
  } else {
    rd.fail("/engines", "missing required key");
  }
  rd.finish();

  if (kind == "ramp-parabola" || kind == "polynomial" || kind == "bang-bang") {
    if (auto spec = parse_test_signal(rd, *sig, kind)) sc.signal = *spec;
  } else if (kind == "random") {
    RandomSignal r;
    r.seed = rd.unsigned_int(*sig, "/signal", "seed");
    if (sig->contains("mean_switch_interval")) {
      r.mean_switch_interval = rd.number(*sig, "/signal", "mean_switch_interval", true);
    }
    sc.signal = r;
  } else if (kind == "trace-file") {
    const auto path = rd.string(*sig, "/signal", "path", true);
    if (path) {
      std::filesystem::path fp(*path);
      if (fp.is_relative() && !base_dir.empty()) fp = base_dir / fp;
      auto tr = load_trace_file(rd, fp);
      if (rd.issues.empty()) {
        sc.params.dt = tr.dt;
        sc.duration = tr.time(tr.size() - 1);
        sc.signal = std::move(tr);
      }
    }
  } else if (kind == "adversary") {
    if (sc.params.N <= 0.0 && sig->value("adversary", std::string()) != "sampled-zero" &&
        sig->value("adversary", std::string()) != "quasi-exact") {
      rd.fail("/noise/N", "adversary needs N > 0");
    } else if (auto tr = build_adversary(rd, *sig, sc.params.L, sc.params.N, sc.params.dt)) {
      sc.duration = tr->time(tr->size() - 1);
      sc.signal = std::move(*tr);
    }
  } else {
    rd.fail("/signal/kind", "unknown signal kind '" + kind + "'");
  }
  rd.finish();

  // Generator and engine parameter checks, reported with their paths.
  if (!sc.noise.segments.empty()) {
    try {
      gen_noise(sc.noise, sc.params, sc.sample_count());
    } catch (const std::invalid_argument& e) {
      rd.fail("/noise/segments", e.what());
    }
  }
  const json defaults = {{"L", sc.params.L}, {"N", sc.params.N}, {"dt", sc.params.dt}};
  for (std::size_t i = 0; i < sc.engines.size(); ++i) {
    try {
      make_engine(sc.engines[i].kind, sc.engines[i].params, defaults);
    } catch (const std::exception& e) {
      rd.fail("/engines/" + std::to_string(i), e.what());
    }
  }
  if (std::holds_alternative<TestSignalSpec>(sc.signal)) {
    try {
      gen_test_signal(std::get<TestSignalSpec>(sc.signal), sc.params, 2);
    } catch (const std::invalid_argument& e) {
      rd.fail("/signal", e.what());
    }
  }
  rd.finish();
  return sc;
}

SweepSpec parse_sweep(const json& config) {
  Reader rd;
  rd.check_schema(config);
  rd.finish();
  SweepSpec s;
  const json* sw = rd.object(config, "", "sweep", true);
  rd.finish();
  const std::string p = "/sweep";
  s.L = rd.number_list(*sw, p, "L");
  s.N = rd.number_list(*sw, p, "N");
  s.dt = rd.number_list(*sw, p, "dt");
  for (const char* key : {"L", "N", "dt"}) {
    if (sw->contains(key) && sw->at(key).is_array() && sw->at(key).empty()) {
      rd.fail(p + "/" + key, "grid must not be empty");
    }
  }
  if (sw->contains("engine")) {
    if (!sw->at("engine").is_object()) {
      rd.fail(p + "/engine", "must be an object");
    } else {
      s.engine = sw->at("engine");
    }
  }
  s.N_bar = rd.number(*sw, p, "N_bar", false);
  s.random_draws = rd.unsigned_int(*sw, p, "random_draws").value_or(200);
  s.seed = rd.unsigned_int(*sw, p, "seed").value_or(1);
  s.R = rd.number_or(*sw, p, "R", 1.0);
  s.threads = rd.unsigned_int(*sw, p, "threads").value_or(0);
  rd.finish();
  try {
    s.validate();
  } catch (const std::invalid_argument& e) {
    rd.fail(p, e.what());
  }
  rd.finish();
  for (double L : s.L) {
    for (double dt : s.dt) {
      auto params = s.engine;
      params["L"] = L;
      params["dt"] = dt;
      if (!params.contains("k_bar")) params["N_bar"] = s.N_bar.value_or(*std::max_element(s.N.begin(), s.N.end()));
      try {
        make_engine("adaptive", params);
      } catch (const std::exception& e) {
        rd.fail(p + "/engine", e.what());
        rd.finish();
      }
    }
  }
  return s;
}

}  // namespace robdiff
