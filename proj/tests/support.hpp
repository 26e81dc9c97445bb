#pragma once

// Test-side oracles and generators. The oracles deliberately avoid the
// library's own helpers: they index plain vectors and enumerate sets.

#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <optional>
#include <random>
#include <vector>

#include "robdiff/signal.hpp"

namespace oracle {

// N-hat at step k from the full history u[0..k], straight from the
// definition: 1/2 max over 2 <= l <= min(k, k_bar), 1 <= j <= l.
inline double noise_estimate(const std::vector<double>& u, std::size_t k, double L, double dt,
                             std::optional<std::size_t> k_bar = {}) {
  const std::size_t lmax = k_bar ? std::min(k, *k_bar) : k;
  double best = 0.0;
  for (std::size_t l = 2; l <= lmax; ++l) {
    for (std::size_t j = 1; j <= l; ++j) {
      const double q = u[k - j] - u[k] + (u[k] - u[k - l]) * double(j) / double(l);
      best = std::max(best, std::abs(q) - L * dt * dt * double(j) * double(l - j) / 2.0);
    }
  }
  return best / 2.0;
}

// Smallest element of {j dt / w : j in N} intersected with [1, gamma_bar],
// found by walking j upwards; w = 2 sqrt(N_hat / L).
inline double smallest_gamma(double N_hat, double L, double dt, double gamma_bar) {
  const double w = 2.0 * std::sqrt(N_hat / L);
  if (w <= dt) return 1.0;
  for (int j = 1;; ++j) {
    const double g = j * dt / w;
    if (g >= 1.0 - 1e-12 && g <= gamma_bar + 1e-12) return g;
    if (g > gamma_bar) return std::numeric_limits<double>::quiet_NaN();
  }
}

// Largest discrete second difference relative to dt^2.
inline double max_second_difference(const std::vector<double>& f, double dt) {
  double m = 0.0;
  for (std::size_t k = 1; k + 1 < f.size(); ++k) {
    m = std::max(m, std::abs(f[k + 1] - 2.0 * f[k] + f[k - 1]) / (dt * dt));
  }
  return m;
}

// Worst violation of |f(t - s) - f(t) + fdot(t) s| <= L s^2 / 2 over grid
// points t and grid lags s in [0, t]; <= 0 means the bound holds.
inline double growth_bound_violation(const robdiff::SampledTrace& tr, double L,
                                     std::size_t max_lag = 400) {
  double worst = -std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < tr.size(); ++k) {
    for (std::size_t j = 0; j <= std::min(k, max_lag); ++j) {
      const double s = double(j) * tr.dt;
      const double lhs = std::abs(tr.f[k - j] - tr.f[k] + tr.fdot[k] * s);
      const double slack = 1e-12 * (1.0 + std::abs(tr.f[k]) + std::abs(tr.f[k - j]));
      worst = std::max(worst, lhs - L * s * s / 2.0 - slack);
    }
  }
  return worst;
}

// Forward-Euler simulation of the sliding-mode differentiator on a
// continuous input, `refine` substeps per sample; returns y2 at each sample.
inline std::vector<double> red_reference(const std::function<double(double)>& u, double L,
                                         double l1, double l2, double dt, std::size_t n,
                                         int refine) {
  const double h = dt / refine;
  double y1 = u(0.0), y2 = 0.0;
  std::vector<double> out(n);
  for (std::size_t k = 0; k < n; ++k) {
    for (int i = 0; i < refine; ++i) {
      const double t = double(k) * dt + i * h;
      const double e = u(t) - y1;
      const double s = (e > 0) - (e < 0);
      const double d1 = l1 * std::sqrt(L) * std::sqrt(std::abs(e)) * s + y2;
      y1 += h * d1;
      y2 += h * l2 * L * s;
    }
    out[k] = y2;
  }
  return out;
}

}  // namespace oracle

namespace gen {

// Small hand-rolled generator for property tests; everything is a function
// of the seed.
class Source {
 public:
  explicit Source(std::uint64_t seed) : rng_(seed) {}

  double uniform(double lo, double hi) { return lo + (hi - lo) * robdiff::uniform_unit(rng_()); }
  std::size_t index(std::size_t lo, std::size_t hi) {  // inclusive
    return lo + static_cast<std::size_t>(robdiff::uniform_unit(rng_()) * double(hi - lo + 1));
  }
  bool coin(double p = 0.5) { return robdiff::uniform_unit(rng_()) < p; }
  std::uint64_t raw() { return rng_(); }
  template <class T>
  const T& pick(const std::vector<T>& v) {
    return v[index(0, v.size() - 1)];
  }

 private:
  std::mt19937_64 rng_;
};

// Random schedule covering [0, duration] with every segment kind.
inline robdiff::NoiseScheduleSpec schedule(Source& s, double N, double duration) {
  robdiff::NoiseScheduleSpec out;
  double t = 0.0;
  while (t <= duration) {
    robdiff::NoiseSegment seg;
    seg.start = t;
    seg.duration = s.uniform(0.05, 0.3) * duration + 1e-3;
    switch (s.index(0, 3)) {
      case 0: seg.kind = robdiff::ConstantNoise{s.uniform(-N, N)}; break;
      case 1: seg.kind = robdiff::ParabolaArcNoise{s.uniform(-1.0, 3.0)}; break;
      case 2: seg.kind = robdiff::StepNoise{s.uniform(-N, N), s.uniform(-N, N),
                                            t + s.uniform(0.0, seg.duration)}; break;
      default: seg.kind = robdiff::UniformWhiteNoise{s.raw()}; break;
    }
    out.segments.push_back(seg);
    t = seg.end();
  }
  return out;
}

}  // namespace gen
