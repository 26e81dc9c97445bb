#pragma once

#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include "robdiff/signal.hpp"

namespace robdiff {

/// A (signal, noise) pair together with the error level it certifies at a
/// given instant. `trace` carries u, f, fdot and eta.
struct AdversaryScenario {
  std::string name;
  SampledTrace trace;
  double L = 0.0;
  double N = 0.0;
  double certified_time = 0.0;
  std::size_t certified_step = 0;
  double certified_error = 0.0;
  // False when the certificate is weaker than a bound every causal
  // differentiator already obeys.
  bool nontrivial = true;
};

/// C^1 spline rising from 0 to L kappa^2 on [0, 2 kappa]:
/// L t^2 / 2 on [0, kappa), L kappa^2 - L (t - 2 kappa)^2 / 2 on [kappa, 2 kappa].
double h_arc(double kappa, double L, double t);
double h_arc_slope(double kappa, double L, double t);

/// Two inputs whose measurements vanish identically on [0, T], T = tau +
/// 4 sqrt(N/L), while the true slopes at T are +-2 sqrt(N L). Any causal
/// differentiator errs by at least 2 sqrt(N L) on one of them. The first
/// scenario uses +g1, the second -g1.
std::pair<AdversaryScenario, AdversaryScenario> causal_pair(double L, double N, double tau,
                                                            double dt, double horizon);

/// Input u = g1 that is itself a smooth class member, built from f = -g1
/// and noise 2 g1. An exact differentiator reports +sqrt(2 N L) at T while
/// the true slope is -sqrt(2 N L). tau is moved forward (by less than dt) so
/// that T = tau + (2 + sqrt 2) sqrt(N/L) is a sampling instant.
AdversaryScenario exact_trap(double L, double N, double tau, double dt, double horizon);

/// Grid-aligned variant of `exact_trap` ending at T = l dt with l >= r and
/// l dt >= (2 + sqrt 2) sqrt(N/L). Certifies 2 sqrt(2 N L) - L dt / 2 for
/// differentiators that are quasi-exact; the certificate is only
/// informative when dt <= 4 (sqrt 2 - 1) sqrt(N/L).
AdversaryScenario quasi_exact_trap(double L, double N, double dt, std::size_t r);

/// a_0 = 0, a_{j+1} = 1 - (1 - a_j)^2 / 2.
std::vector<double> zero_family_coefficients(std::size_t count);

/// Value and slope of the zero-measurement signal at an arbitrary t >= 0.
/// f(k dt) = 0 for every k and f'(k dt) = (-1)^k a_k L dt / 2.
std::pair<double, double> zero_family_eval(double L, double dt, double t);

/// +-f sampled at n points: every measurement is exactly zero; the
/// certificate at step k is a_k L dt / 2 (reported for k = n - 1).
std::pair<AdversaryScenario, AdversaryScenario> sampled_zero_family(double L, double dt,
                                                                    std::size_t n);

/// Numerical membership check used after every construction: discrete
/// second differences of f within L dt^2 (1 + 1e-9) and |eta| <= N (1 + 1e-12).
bool verify_membership(const SampledTrace& trace, double L, double N, std::string* why = nullptr);

}  // namespace robdiff
