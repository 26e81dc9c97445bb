#include "robdiff/engines.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>
#include <stdexcept>

namespace robdiff {

std::string to_string(EngineKind kind) {
  switch (kind) {
    case EngineKind::adaptive: return "adaptive";
    case EngineKind::finite_difference: return "fd";
    case EngineKind::red_explicit: return "red-explicit";
    case EngineKind::red_implicit: return "red-implicit";
  }
  return "unknown";
}

EngineKind engine_kind_from_string(const std::string& name) {
  if (name == "adaptive") return EngineKind::adaptive;
  if (name == "fd") return EngineKind::finite_difference;
  if (name == "red-explicit") return EngineKind::red_explicit;
  if (name == "red-implicit") return EngineKind::red_implicit;
  throw std::invalid_argument("unknown engine kind '" + name + "'");
}

// --------------------------------------------------------------------------

AdaptiveEngine::AdaptiveEngine(const AdaptiveParams& params, GammaPolicy policy)
    : core_(params, policy) {
  diag_.adaptive = core_.last();
}

double AdaptiveEngine::step(double u) {
  const auto& d = core_.step(u);
  diag_.k = d.k;
  diag_.y = d.y;
  diag_.adaptive = d;
  return d.y;
}

void AdaptiveEngine::reset() {
  core_.reset();
  diag_ = EngineDiagnostics{};
  diag_.adaptive = core_.last();
}

std::unique_ptr<Differentiator> AdaptiveEngine::clone() const {
  return std::make_unique<AdaptiveEngine>(*this);
}

// --------------------------------------------------------------------------

void FiniteDifferenceParams::validate() const {
  if (!(L > 0.0) || !std::isfinite(L)) throw std::invalid_argument("fd: L must be > 0");
  if (!(N >= 0.0) || !std::isfinite(N)) throw std::invalid_argument("fd: N must be >= 0");
  if (!(dt > 0.0) || !std::isfinite(dt)) throw std::invalid_argument("fd: dt must be > 0");
}

std::size_t FiniteDifferenceParams::window() const {
  const double m = std::round(2.0 * std::sqrt(N / L) / dt);
  return m < 1.0 ? 1 : static_cast<std::size_t>(m);
}

FiniteDifferenceEngine::FiniteDifferenceEngine(const FiniteDifferenceParams& params)
    : params_(params) {
  params_.validate();
  m_ = params_.window();
  ring_.assign(m_ + 1, 0.0);
}

double FiniteDifferenceEngine::step(double u) {
  const std::size_t k = count_++;
  ring_[k % ring_.size()] = u;
  double y = 0.0;
  if (k >= m_) {
    y = (u - ring_[(k - m_) % ring_.size()]) / (static_cast<double>(m_) * params_.dt);
  }
  diag_.k = k;
  diag_.y = y;
  return y;
}

void FiniteDifferenceEngine::reset() {
  std::fill(ring_.begin(), ring_.end(), 0.0);
  count_ = 0;
  diag_ = EngineDiagnostics{};
}

std::unique_ptr<Differentiator> FiniteDifferenceEngine::clone() const {
  return std::make_unique<FiniteDifferenceEngine>(*this);
}

// --------------------------------------------------------------------------

void RedParams::validate() const {
  if (!(lambda1 > 0.0) || !std::isfinite(lambda1)) throw std::invalid_argument("red: lambda1 must be > 0");
  if (!(lambda2 > 1.0) || !std::isfinite(lambda2)) throw std::invalid_argument("red: lambda2 must be > 1");
  if (!(L > 0.0) || !std::isfinite(L)) throw std::invalid_argument("red: L must be > 0");
  if (!(dt > 0.0) || !std::isfinite(dt)) throw std::invalid_argument("red: dt must be > 0");
}

bool RedParams::meets_convergence_condition() const {
  return lambda1 >= std::sqrt(8.0 * lambda2);
}

RedEngine::RedEngine(const RedParams& params) : params_(params) {
  params_.validate();
  diag_.red = state_;
}

void RedEngine::step_explicit(double u) {
  const double h = params_.dt;
  const double e = u - state_.y1;
  const double s = (e > 0.0) - (e < 0.0);
  const double y1_rate = params_.lambda1 * std::sqrt(params_.L) * std::sqrt(std::abs(e)) * s + state_.y2;
  state_.y1 += h * y1_rate;
  state_.y2 += h * params_.lambda2 * params_.L * s;
  state_.sliding = false;
}

void RedEngine::step_implicit(double u) {
  const double h = params_.dt;
  const double a = h * params_.lambda1 * std::sqrt(params_.L);
  const double b = h * h * params_.lambda2 * params_.L;
  const double w = u - state_.y1 - h * state_.y2;
  double s;
  double e_next;
  if (std::abs(w) <= b) {
    s = w / b;
    e_next = 0.0;
    state_.sliding = true;
  } else {
    s = w > 0.0 ? 1.0 : -1.0;
    const double excess = std::abs(w) - b;
    const double x = 2.0 * excess / (a + std::sqrt(a * a + 4.0 * excess));
    e_next = s * x * x;
    state_.sliding = false;
  }
  state_.y1 = u - e_next;
  state_.y2 += h * params_.lambda2 * params_.L * s;
}

double RedEngine::step(double u) {
  if (!started_) {
    state_ = RedState{u, 0.0, false};
    started_ = true;
    diag_.k = 0;
  } else {
    ++diag_.k;
  }
  if (params_.scheme == RedScheme::explicit_euler) {
    step_explicit(u);
  } else {
    step_implicit(u);
  }
  diag_.y = state_.y2;
  diag_.red = state_;
  return state_.y2;
}

void RedEngine::reset() {
  state_ = RedState{};
  started_ = false;
  diag_ = EngineDiagnostics{};
  diag_.red = state_;
}

std::unique_ptr<Differentiator> RedEngine::clone() const {
  return std::make_unique<RedEngine>(*this);
}

// --------------------------------------------------------------------------

namespace {

using nlohmann::json;

double number_or(const json& params, const json& defaults, const char* key,
                 std::optional<double> fallback = {}) {
  if (params.contains(key)) {
    if (!params.at(key).is_number()) {
      throw std::invalid_argument(std::string("engine parameter '") + key + "' must be a number");
    }
    return params.at(key).get<double>();
  }
  if (defaults.contains(key) && defaults.at(key).is_number()) return defaults.at(key).get<double>();
  if (fallback) return *fallback;
  throw std::invalid_argument(std::string("engine parameter '") + key + "' is required");
}

std::unique_ptr<Differentiator> make_adaptive(const json& p, const json& d) {
  AdaptiveParams ap;
  ap.L = number_or(p, d, "L");
  ap.dt = number_or(p, d, "dt");
  ap.gamma_bar = number_or(p, d, "gamma_bar", 2.0);
  if (p.contains("k_bar")) {
    const auto& kb = p.at("k_bar");
    if (kb.is_string() && kb.get<std::string>() == "inf") {
      ap.k_bar.reset();
    } else if (kb.is_number_integer() && kb.get<long long>() >= 0) {
      ap.k_bar = kb.get<std::size_t>();
    } else {
      throw std::invalid_argument("engine parameter 'k_bar' must be an integer or \"inf\"");
    }
  } else if (p.contains("N_bar")) {
    const auto tuned = tuned_params(ap.L, ap.dt, number_or(p, d, "N_bar"));
    ap.k_bar = tuned.k_bar;
  }
  GammaPolicy policy = GammaPolicy::smallest;
  if (p.contains("gamma_policy")) {
    const auto name = p.at("gamma_policy").get<std::string>();
    if (name == "largest") {
      policy = GammaPolicy::largest;
    } else if (name != "smallest") {
      throw std::invalid_argument("gamma_policy must be 'smallest' or 'largest'");
    }
  }
  return std::make_unique<AdaptiveEngine>(ap, policy);
}

std::unique_ptr<Differentiator> make_fd(const json& p, const json& d) {
  FiniteDifferenceParams fp;
  fp.L = number_or(p, d, "L");
  fp.N = number_or(p, d, "N");
  fp.dt = number_or(p, d, "dt");
  return std::make_unique<FiniteDifferenceEngine>(fp);
}

std::unique_ptr<Differentiator> make_red(const json& p, const json& d, RedScheme scheme) {
  RedParams rp;
  rp.lambda1 = number_or(p, d, "lambda1", 1.5);
  rp.lambda2 = number_or(p, d, "lambda2", 1.1);
  rp.L = number_or(p, d, "L");
  rp.dt = number_or(p, d, "dt");
  rp.scheme = scheme;
  return std::make_unique<RedEngine>(rp);
}

using Factory = std::function<std::unique_ptr<Differentiator>(const json&, const json&)>;

const std::map<std::string, Factory>& registry() {
  static const std::map<std::string, Factory> r = {
      {"adaptive", make_adaptive},
      {"fd", make_fd},
      {"red-explicit", [](const json& p, const json& d) { return make_red(p, d, RedScheme::explicit_euler); }},
      {"red-implicit", [](const json& p, const json& d) { return make_red(p, d, RedScheme::implicit_euler); }},
  };
  return r;
}

}  // namespace

std::unique_ptr<Differentiator> make_engine(const std::string& kind, const json& params,
                                            const json& defaults) {
  const auto& r = registry();
  const auto it = r.find(kind);
  if (it == r.end()) throw std::invalid_argument("unknown engine kind '" + kind + "'");
  if (!params.is_object() && !params.is_null()) {
    throw std::invalid_argument("engine parameters must be an object");
  }
  return it->second(params.is_null() ? json::object() : params, defaults);
}

std::vector<std::string> engine_kinds() {
  std::vector<std::string> out;
  for (const auto& [name, _] : registry()) out.push_back(name);
  return out;
}

}  // namespace robdiff
