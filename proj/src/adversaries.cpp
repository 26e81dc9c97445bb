#include "robdiff/adversaries.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace robdiff {

namespace {

constexpr double kSqrt2 = 1.4142135623730951;

std::size_t sample_count(double horizon, double dt) {
  return static_cast<std::size_t>(std::floor(horizon / dt + 1e-9)) + 1;
}

void require_positive(double L, double N, double dt) {
  if (!(L > 0.0) || !(N > 0.0)) throw std::invalid_argument("adversary needs L > 0 and N > 0");
  if (!(dt > 0.0)) throw std::invalid_argument("adversary needs dt > 0");
}

// Shared shape of both traps: g(t) = 0 before tau, -scale * h(t - tau) on
// [tau, tau + 2 kappa), then a rising parabola from -scale * L kappa^2.
struct Bump {
  double L, kappa, tau, scale;

  double value(double t) const {
    if (t < tau) return 0.0;
    const double s = t - tau;
    if (s < 2.0 * kappa) return -scale * h_arc(kappa, L, s);
    const double r = s - 2.0 * kappa;
    return -scale * L * kappa * kappa + L * r * r / 2.0;
  }
  double slope(double t) const {
    if (t < tau) return 0.0;
    const double s = t - tau;
    if (s < 2.0 * kappa) return -scale * h_arc_slope(kappa, L, s);
    return L * (s - 2.0 * kappa);
  }
};

// f = -g1, eta = 2 g1 up to T and N afterwards.
AdversaryScenario trap_scenario(double L, double N, double tau, double dt, std::size_t n,
                                std::size_t certified_step) {
  const double kappa = std::sqrt(N / L);
  const Bump g1{L, kappa, tau, 0.5};
  const double T = static_cast<double>(certified_step) * dt;

  AdversaryScenario sc;
  sc.L = L;
  sc.N = N;
  sc.certified_step = certified_step;
  sc.certified_time = T;
  auto& tr = sc.trace;
  tr.dt = dt;
  tr.u.resize(n);
  tr.f.resize(n);
  tr.fdot.resize(n);
  tr.eta.resize(n);
  for (std::size_t k = 0; k < n; ++k) {
    const double t = static_cast<double>(k) * dt;
    const double g = g1.value(t);
    tr.f[k] = -g;
    tr.fdot[k] = -g1.slope(t);
    tr.eta[k] = k <= certified_step ? std::clamp(2.0 * g, -N, N) : N;
    tr.u[k] = tr.f[k] + tr.eta[k];
  }
  return sc;
}

}  // namespace

double h_arc(double kappa, double L, double t) {
  if (!(t >= 0.0) || t > 2.0 * kappa) {
    throw std::domain_error("h_arc: t = " + std::to_string(t) + " outside [0, 2 kappa]");
  }
  if (t < kappa) return L * t * t / 2.0;
  const double r = t - 2.0 * kappa;
  return L * kappa * kappa - L * r * r / 2.0;
}

double h_arc_slope(double kappa, double L, double t) {
  if (!(t >= 0.0) || t > 2.0 * kappa) {
    throw std::domain_error("h_arc_slope: t outside [0, 2 kappa]");
  }
  return t < kappa ? L * t : -L * (t - 2.0 * kappa);
}

std::pair<AdversaryScenario, AdversaryScenario> causal_pair(double L, double N, double tau,
                                                            double dt, double horizon) {
  require_positive(L, N, dt);
  if (!(tau >= 0.0)) throw std::invalid_argument("causal_pair: tau must be >= 0");
  const double kappa = std::sqrt(N / L);
  const double T = tau + 4.0 * kappa;
  if (horizon < T) {
    throw std::invalid_argument("causal_pair: horizon " + std::to_string(horizon) +
                                " shorter than T = " + std::to_string(T));
  }
  const std::size_t n = sample_count(horizon, dt);
  const auto last_before_T = static_cast<std::size_t>(std::floor(T / dt + 1e-9));
  const Bump g1{L, kappa, tau, 1.0};

  auto build = [&](double sign, const char* name) {
    AdversaryScenario sc;
    sc.name = name;
    sc.L = L;
    sc.N = N;
    sc.certified_time = T;
    sc.certified_step = last_before_T;
    sc.certified_error = 2.0 * std::sqrt(N * L);
    auto& tr = sc.trace;
    tr.dt = dt;
    tr.u.resize(n);
    tr.f.resize(n);
    tr.fdot.resize(n);
    tr.eta.resize(n);
    for (std::size_t k = 0; k < n; ++k) {
      const double t = static_cast<double>(k) * dt;
      const double g = sign * g1.value(t);
      tr.f[k] = g;
      tr.fdot[k] = sign * g1.slope(t);
      tr.eta[k] = k <= last_before_T ? -g : -sign * N;
      tr.u[k] = tr.f[k] + tr.eta[k];
    }
    return sc;
  };
  return {build(1.0, "causal-indistinguishable/+"), build(-1.0, "causal-indistinguishable/-")};
}

AdversaryScenario exact_trap(double L, double N, double tau, double dt, double horizon) {
  require_positive(L, N, dt);
  if (!(tau >= 0.0)) throw std::invalid_argument("exact_trap: tau must be >= 0");
  const double kappa = std::sqrt(N / L);
  const double span = (2.0 + kSqrt2) * kappa;
  const auto step = static_cast<std::size_t>(std::ceil((tau + span) / dt - 1e-9));
  const double T = static_cast<double>(step) * dt;
  if (horizon < T) {
    throw std::invalid_argument("exact_trap: horizon " + std::to_string(horizon) +
                                " shorter than T = " + std::to_string(T));
  }
  auto sc = trap_scenario(L, N, T - span, dt, sample_count(horizon, dt), step);
  sc.name = "exact-differentiator-trap";
  sc.certified_error = 2.0 * std::sqrt(2.0 * N * L);
  return sc;
}

AdversaryScenario quasi_exact_trap(double L, double N, double dt, std::size_t r) {
  if (!(L > 0.0) || !(N >= 0.0) || !(dt > 0.0)) {
    throw std::invalid_argument("quasi_exact_trap needs L > 0, N >= 0, dt > 0");
  }
  const double kappa = std::sqrt(N / L);
  const double span = (2.0 + kSqrt2) * kappa;
  const auto needed = static_cast<std::size_t>(std::ceil(span / dt - 1e-9));
  const std::size_t ell = std::max({r, needed, std::size_t{1}});
  const double T = static_cast<double>(ell) * dt;
  auto sc = trap_scenario(L, N, T - span, dt, 2 * ell + 1, ell);
  sc.name = "quasi-exact-trap";
  sc.certified_error = 2.0 * std::sqrt(2.0 * N * L) - L * dt / 2.0;
  sc.nontrivial = dt <= 4.0 * (kSqrt2 - 1.0) * kappa;
  return sc;
}

std::vector<double> zero_family_coefficients(std::size_t count) {
  std::vector<double> a(count, 0.0);
  for (std::size_t j = 1; j < count; ++j) {
    const double d = 1.0 - a[j - 1];
    a[j] = 1.0 - d * d / 2.0;
  }
  return a;
}

std::pair<double, double> zero_family_eval(double L, double dt, double t) {
  if (!(t >= 0.0)) throw std::domain_error("zero_family_eval: t must be >= 0");
  const auto j = static_cast<std::size_t>(std::floor(t / dt));
  // a_j and a_{j+1}; the sequence reaches 1 in double precision after a few
  // terms, so iterating is cheap.
  double a = 0.0;
  for (std::size_t i = 0; i < j && a < 1.0; ++i) a = 1.0 - (1.0 - a) * (1.0 - a) / 2.0;
  const double b = 1.0 - (1.0 - a) * (1.0 - a) / 2.0;
  const double c = (1.0 - a) / 4.0;
  const double s = t - static_cast<double>(j) * dt;
  double g, gd;
  if (s < c * dt) {
    g = a * L * dt / 2.0 * s + L * s * s / 2.0;
    gd = a * L * dt / 2.0 + L * s;
  } else if (s < dt / 2.0) {
    const double r = s - dt / 2.0;
    g = b * L * dt * dt / 8.0 - L / 2.0 * r * r;
    gd = -L * r;
  } else {
    g = b * L / 2.0 * s * (dt - s);
    gd = b * L / 2.0 * (dt - 2.0 * s);
  }
  const double sign = (j % 2 == 0) ? 1.0 : -1.0;
  return {sign * g, sign * gd};
}

std::pair<AdversaryScenario, AdversaryScenario> sampled_zero_family(double L, double dt,
                                                                    std::size_t n) {
  if (n < 2) throw std::invalid_argument("sampled_zero_family: need n >= 2");
  if (!(L > 0.0) || !(dt > 0.0)) throw std::invalid_argument("sampled_zero_family: need L, dt > 0");
  const auto a = zero_family_coefficients(n);

  auto build = [&](double sign, const char* name) {
    AdversaryScenario sc;
    sc.name = name;
    sc.L = L;
    sc.N = 0.0;
    sc.certified_step = n - 1;
    sc.certified_time = static_cast<double>(n - 1) * dt;
    sc.certified_error = a[n - 1] * L * dt / 2.0;
    auto& tr = sc.trace;
    tr.dt = dt;
    tr.u.assign(n, 0.0);
    tr.f.assign(n, 0.0);
    tr.eta.assign(n, 0.0);
    tr.fdot.resize(n);
    for (std::size_t k = 0; k < n; ++k) {
      const double alt = (k % 2 == 0) ? 1.0 : -1.0;
      tr.fdot[k] = sign * alt * a[k] * L * dt / 2.0;
    }
    return sc;
  };
  return {build(1.0, "sampled-zero-measurements/+"), build(-1.0, "sampled-zero-measurements/-")};
}

bool verify_membership(const SampledTrace& trace, double L, double N, std::string* why) {
  constexpr double eps = std::numeric_limits<double>::epsilon();
  const double dt2 = trace.dt * trace.dt;
  const auto& f = trace.f;
  for (std::size_t k = 1; k + 1 < f.size(); ++k) {
    const double d2 = f[k + 1] - 2.0 * f[k] + f[k - 1];
    const double rounding = 16.0 * eps * (std::abs(f[k - 1]) + 2.0 * std::abs(f[k]) + std::abs(f[k + 1]));
    if (std::abs(d2) > L * dt2 * (1.0 + 1e-9) + rounding) {
      if (why) *why = "second difference " + std::to_string(d2) + " exceeds L dt^2 at k = " + std::to_string(k);
      return false;
    }
  }
  for (std::size_t k = 0; k < trace.eta.size(); ++k) {
    if (std::abs(trace.eta[k]) > N * (1.0 + 1e-12)) {
      if (why) *why = "noise sample " + std::to_string(trace.eta[k]) + " exceeds N at k = " + std::to_string(k);
      return false;
    }
  }
  return true;
}

}  // namespace robdiff
