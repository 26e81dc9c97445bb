#include "robdiff/adaptive.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace robdiff {

namespace {

// Q for a contiguous oldest-first sample span; newest sample is s.back().
inline double q_from_span(std::span<const double> s, std::size_t ell, std::size_t j) {
  const std::size_t last = s.size() - 1;
  const double u0 = s[last];
  const double slope = (u0 - s[last - ell]) / static_cast<double>(ell);
  return s[last - j] - u0 + slope * static_cast<double>(j);
}

}  // namespace

void AdaptiveParams::validate() const {
  if (!(L > 0.0) || !std::isfinite(L)) throw std::invalid_argument("adaptive: L must be > 0");
  if (!(dt > 0.0) || !std::isfinite(dt)) throw std::invalid_argument("adaptive: dt must be > 0");
  if (k_bar && *k_bar < 2) throw std::invalid_argument("adaptive: k_bar must be >= 2");
  const double upper = 1.0 + std::sqrt(2.0);
  if (!(gamma_bar >= 2.0) || gamma_bar > upper + 1e-12) {
    throw std::invalid_argument("adaptive: gamma_bar must lie in [2, 1 + sqrt(2)], got " +
                                std::to_string(gamma_bar));
  }
}

double AdaptiveParams::max_noise_bound() const {
  if (!k_bar) return std::numeric_limits<double>::infinity();
  const double km1 = static_cast<double>(*k_bar - 1);
  return L * dt * dt * km1 * km1 / 2.0;
}

AdaptiveParams tuned_params(double L, double dt, double N_bar) {
  if (!(L > 0.0) || !(dt > 0.0) || !(N_bar >= 0.0)) {
    throw std::invalid_argument("tuned_params: need L > 0, dt > 0, N_bar >= 0");
  }
  const double span = std::sqrt(2.0 * N_bar / L) + dt;
  auto k = static_cast<std::size_t>(std::floor(span / dt));
  while (static_cast<double>(k) * dt <= span) ++k;
  while (k > 2 && static_cast<double>(k - 1) * dt > span) --k;
  AdaptiveParams p;
  p.L = L;
  p.dt = dt;
  p.k_bar = std::max<std::size_t>(k, 2);
  p.gamma_bar = 2.0;
  return p;
}

// --------------------------------------------------------------------------

SampleWindow::SampleWindow(std::optional<std::size_t> k_bar) : k_bar_(k_bar) {
  if (k_bar_) {
    if (*k_bar_ < 1) throw std::invalid_argument("window length must be >= 1");
    capacity_ = *k_bar_ + 1;
    buffer_.assign(2 * capacity_, 0.0);
  }
}

void SampleWindow::push(double u) {
  if (!k_bar_) {
    buffer_.push_back(u);
  } else {
    buffer_[head_] = u;
    buffer_[head_ + capacity_] = u;
    head_ = (head_ + 1) % capacity_;
  }
  ++pushed_;
}

void SampleWindow::clear() {
  if (k_bar_) {
    std::fill(buffer_.begin(), buffer_.end(), 0.0);
  } else {
    buffer_.clear();
  }
  head_ = 0;
  pushed_ = 0;
}

std::size_t SampleWindow::size() const {
  return k_bar_ ? std::min(pushed_, capacity_) : pushed_;
}

std::span<const double> SampleWindow::samples() const {
  if (!k_bar_) return {buffer_.data(), buffer_.size()};
  if (pushed_ < capacity_) return {buffer_.data(), pushed_};
  return {buffer_.data() + head_, capacity_};
}

double SampleWindow::lagged(std::size_t j) const {
  const auto s = samples();
  if (s.empty() || j >= s.size()) {
    throw std::out_of_range("lag " + std::to_string(j) + " exceeds stored history");
  }
  return s[s.size() - 1 - j];
}

double q_value(const SampleWindow& window, std::size_t ell, std::size_t j) {
  if (j < 1 || j > ell || ell > window.max_lag()) {
    throw std::out_of_range("q_value: need 1 <= j <= l <= min(k, k_bar), got l = " +
                            std::to_string(ell) + ", j = " + std::to_string(j));
  }
  return q_from_span(window.samples(), ell, j);
}

NoiseEstimate estimate_noise(const SampleWindow& window, double L, double dt) {
  if (!(L >= 0.0) || !(dt > 0.0)) throw std::invalid_argument("estimate_noise: need L >= 0, dt > 0");
  NoiseEstimate est;
  const auto s = window.samples();
  if (s.size() < 3) return est;

  const std::size_t last = s.size() - 1;
  const std::size_t max_lag = last;
  const double u0 = s[last];
  const double c = L * dt * dt / 2.0;
  double best = 0.0;
  for (std::size_t ell = 2; ell <= max_lag; ++ell) {
    const double slope = (u0 - s[last - ell]) / static_cast<double>(ell);
    for (std::size_t j = 1; j < ell; ++j) {
      const double jd = static_cast<double>(j);
      const double q = s[last - j] - u0 + slope * jd;
      const double v = std::abs(q) - c * jd * static_cast<double>(ell - j);
      if (v >= best) {
        best = v;
        est.ell = ell;
        est.j = j;
      }
    }
  }
  if (best <= 0.0) {
    est.ell = est.j = 0;
    best = 0.0;
  }
  est.N_hat = best / 2.0;
  return est;
}

NoiseEstimate estimate_noise(const SampleWindow& window, const AdaptiveParams& params) {
  return estimate_noise(window, params.L, params.dt);
}

WindowChoice select_window(double N_hat, const AdaptiveParams& params, std::size_t k,
                           GammaPolicy policy) {
  if (!(N_hat >= 0.0)) throw std::invalid_argument("select_window: N_hat must be >= 0");
  WindowChoice out;
  std::size_t j = 1;
  const double width = 2.0 * std::sqrt(N_hat / params.L);
  if (width > params.dt) {
    const double ratio = width / params.dt;
    const double jd = policy == GammaPolicy::smallest ? std::ceil(ratio)
                                                      : std::floor(params.gamma_bar * ratio);
    j = static_cast<std::size_t>(jd);
    out.gamma = jd / ratio;
  }
  std::size_t steps = std::min(k, j);
  if (params.k_bar) steps = std::min(steps, *params.k_bar);
  out.steps = steps;
  out.T_hat = static_cast<double>(steps) * params.dt;
  return out;
}

// --------------------------------------------------------------------------

AdaptiveDifferentiator::AdaptiveDifferentiator(const AdaptiveParams& params, GammaPolicy policy)
    : params_(params), policy_(policy), window_(params.k_bar) {
  params_.validate();
}

const AdaptiveDiagnostics& AdaptiveDifferentiator::step(double u) {
  window_.push(u);
  const std::size_t k = window_.step();
  const auto est = estimate_noise(window_, params_);
  const auto choice = select_window(est.N_hat, params_, k, policy_);

  last_.k = k;
  last_.N_hat = est.N_hat;
  last_.gamma = choice.gamma;
  last_.T_hat = choice.T_hat;
  last_.window_steps = choice.steps;
  last_.y = choice.steps == 0 ? 0.0 : (u - window_.lagged(choice.steps)) / choice.T_hat;
  return last_;
}

void AdaptiveDifferentiator::reset() {
  window_.clear();
  last_ = AdaptiveDiagnostics{};
}

}  // namespace robdiff
