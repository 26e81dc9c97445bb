#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "robdiff/adaptive.hpp"
#include "support.hpp"

using namespace robdiff;
using Catch::Approx;

namespace {

SampleWindow window_of(const std::vector<double>& u, std::optional<std::size_t> k_bar = {}) {
  SampleWindow w(k_bar);
  for (double v : u) w.push(v);
  return w;
}

}  // namespace

TEST_CASE("Q on a sampled parabola", "[adaptive]") {
  const auto w = window_of({0.0, 0.5, 2.0, 4.5});
  REQUIRE(q_value(w, 2, 1) == -0.5);
  // closed form -L s (T - s) / 2 with s = 1, T = 2
  REQUIRE(q_value(w, 2, 1) == -1.0 * 1.0 * (2.0 - 1.0) / 2.0);
  REQUIRE(q_value(w, 2, 2) == 0.0);
  REQUIRE(q_value(w, 3, 3) == 0.0);
}

TEST_CASE("Q rejects lags outside the stored history", "[adaptive]") {
  const auto w = window_of({0.0, 1.0, 2.0});
  REQUIRE_THROWS_AS(q_value(w, 3, 1), std::out_of_range);
  REQUIRE_THROWS_AS(q_value(w, 2, 0), std::out_of_range);
  REQUIRE_THROWS_AS(q_value(w, 1, 2), std::out_of_range);
  const auto bounded = window_of({0, 1, 2, 3, 4, 5}, 3);
  REQUIRE(bounded.max_lag() == 3);
  REQUIRE_THROWS_AS(q_value(bounded, 4, 1), std::out_of_range);
}

TEST_CASE("sample window keeps the newest k_bar + 1 samples in order", "[adaptive]") {
  SampleWindow w(3);
  for (int i = 0; i < 10; ++i) {
    w.push(i);
    const auto s = w.samples();
    REQUIRE(s.size() == std::min<std::size_t>(i + 1, 4));
    for (std::size_t j = 0; j < s.size(); ++j) REQUIRE(s[j] == double(i) - double(s.size() - 1 - j));
    REQUIRE(w.lagged(0) == i);
    REQUIRE(w.step() == std::size_t(i));
  }
  REQUIRE_THROWS_AS(w.lagged(4), std::out_of_range);
  w.clear();
  REQUIRE(w.empty());
}

TEST_CASE("noise estimate: first two steps are zero", "[adaptive]") {
  REQUIRE(estimate_noise(window_of({5.0}), 1.0, 0.1).N_hat == 0.0);
  REQUIRE(estimate_noise(window_of({5.0, -3.0}), 1.0, 0.1).N_hat == 0.0);
}

TEST_CASE("noise estimate: a parabola of curvature L costs nothing", "[adaptive]") {
  SECTION("dyadic grid, exact") {
    std::vector<double> u;
    for (int k = 0; k < 40; ++k) u.push_back(0.5 * (k * 0.25) * (k * 0.25));
    REQUIRE(estimate_noise(window_of(u), 1.0, 0.25).N_hat == 0.0);
  }
  SECTION("arbitrary L, dt up to rounding") {
    for (double L : {0.3, 1.0, 7.0}) {
      std::vector<double> u;
      for (int k = 0; k < 60; ++k) u.push_back(L * (k * 0.013) * (k * 0.013) / 2.0);
      REQUIRE(estimate_noise(window_of(u), L, 0.013).N_hat <= 1e-14);
    }
  }
}

TEST_CASE("noise estimate: unit step seen with L = 0", "[adaptive]") {
  std::vector<double> u(15, 0.0);
  for (std::size_t k = 5; k < u.size(); ++k) u[k] = 1.0;
  const auto est = estimate_noise(window_of(u), 0.0, 1.0);
  REQUIRE(est.N_hat == Approx(0.45).margin(1e-15));
  REQUIRE(est.ell == 10);
  REQUIRE(est.j == 9);
  REQUIRE(est.N_hat == Approx(oracle::noise_estimate(u, 14, 0.0, 1.0)).margin(1e-15));
}

TEST_CASE("window selection", "[adaptive]") {
  AdaptiveParams p;
  p.L = 1.0;
  p.dt = 1.0;
  p.k_bar = 200;

  SECTION("no noise: one step") {
    for (std::size_t k = 1; k < 5; ++k) {
      const auto c = select_window(0.0, p, k);
      REQUIRE(c.gamma == 1.0);
      REQUIRE(c.steps == 1);
      REQUIRE(c.T_hat == 1.0);
    }
  }
  SECTION("2 sqrt(N_hat / L) = 2.5 dt") {
    const auto c = select_window(1.5625, p, 100);
    REQUIRE(c.gamma == Approx(1.2));
    REQUIRE(c.steps == 3);
    REQUIRE(c.T_hat == 3.0);
    REQUIRE(c.gamma == Approx(oracle::smallest_gamma(1.5625, 1.0, 1.0, 2.0)));
    const auto hi = select_window(1.5625, p, 100, GammaPolicy::largest);
    REQUIRE(hi.gamma == Approx(2.0));
    REQUIRE(hi.steps == 5);
  }
  SECTION("k = 0 gives an empty window") {
    const auto c = select_window(0.7, p, 0);
    REQUIRE(c.steps == 0);
    REQUIRE(c.T_hat == 0.0);
  }
  SECTION("window capped by t_k and k_bar") {
    REQUIRE(select_window(100.0, p, 7).steps == 7);
    p.k_bar = 4;
    REQUIRE(select_window(100.0, p, 50).steps == 4);
  }
}

TEST_CASE("parameter validation and tuning", "[adaptive]") {
  AdaptiveParams p;
  p.k_bar = 1;
  REQUIRE_THROWS_AS(p.validate(), std::invalid_argument);
  p.k_bar = 2;
  REQUIRE_NOTHROW(p.validate());
  p.gamma_bar = 3.0;
  REQUIRE_THROWS_AS(p.validate(), std::invalid_argument);
  p.gamma_bar = 1.9;
  REQUIRE_THROWS_AS(p.validate(), std::invalid_argument);
  p.gamma_bar = 1.0 + std::sqrt(2.0);
  REQUIRE_NOTHROW(p.validate());
  p.L = 0.0;
  REQUIRE_THROWS_AS(p.validate(), std::invalid_argument);

  const auto t = tuned_params(1.0, 0.01, 1.98);
  REQUIRE(*t.k_bar == 200);
  REQUIRE(t.gamma_bar == 2.0);
  REQUIRE(t.max_noise_bound() == Approx(1.98005));
  // smallest k with k dt > sqrt(2 N_bar / L) + dt
  for (double nb : {0.0, 0.01, 0.08, 0.5}) {
    const auto q = tuned_params(2.0, 0.02, nb);
    const double span = std::sqrt(2.0 * nb / 2.0) + 0.02;
    REQUIRE(double(*q.k_bar) * 0.02 > span);
    if (*q.k_bar > 2) REQUIRE(double(*q.k_bar - 1) * 0.02 <= span);
  }
}

TEST_CASE("adaptive step on noise-free signals", "[adaptive]") {
  AdaptiveParams p;
  p.L = 1.0;
  p.dt = 0.01;
  p.k_bar = 50;

  SECTION("first output is zero") {
    AdaptiveDifferentiator d(p);
    REQUIRE(d.step(3.0).y == 0.0);
  }
  SECTION("ramp is differentiated exactly") {
    AdaptiveDifferentiator d(p);
    d.step(0.0);
    for (int k = 1; k < 200; ++k) REQUIRE(d.step(k * 0.01).y == Approx(1.0).epsilon(1e-12));
  }
  SECTION("parabola error is L dt / 2") {
    AdaptiveDifferentiator d(p);
    d.step(0.0);
    for (int k = 1; k < 300; ++k) {
      const double t = k * 0.01;
      const auto& diag = d.step(t * t / 2.0);
      REQUIRE(diag.T_hat == Approx(0.01));
      REQUIRE(std::abs(diag.y - t) == Approx(0.005).margin(1e-11));
    }
  }
}

TEST_CASE("reset reproduces the first run bit for bit", "[adaptive]") {
  AdaptiveParams p;
  p.k_bar = 30;
  AdaptiveDifferentiator d(p);
  gen::Source s(3);
  std::vector<double> u(200);
  for (auto& v : u) v = s.uniform(-1, 1);
  std::vector<double> first;
  for (double v : u) first.push_back(d.step(v).y);
  d.reset();
  for (std::size_t k = 0; k < u.size(); ++k) REQUIRE(d.step(u[k]).y == first[k]);
}

// ---------------------------------------------------------------------------
// Properties

TEST_CASE("property: Q annihilates affine signals", "[adaptive][property]") {
  gen::Source s(11);
  for (int trial = 0; trial < 500; ++trial) {
    const double a = s.uniform(-5, 5), b = s.uniform(-5, 5), dt = s.uniform(0.001, 0.5);
    std::vector<double> u;
    const std::size_t n = s.index(3, 40);
    for (std::size_t k = 0; k < n; ++k) u.push_back(a * double(k) * dt + b);
    const auto w = window_of(u);
    const std::size_t ell = s.index(1, n - 1);
    const std::size_t j = s.index(1, ell);
    const double scale = std::abs(a) * dt * double(n) + std::abs(b) + 1.0;
    REQUIRE(std::abs(q_value(w, ell, j)) <= 1e-13 * scale);
  }
}

TEST_CASE("property: noise estimate matches the exhaustive oracle", "[adaptive][property]") {
  gen::Source s(12);
  for (int trial = 0; trial < 300; ++trial) {
    const double L = s.uniform(0.0, 3.0), dt = s.uniform(0.01, 0.3);
    const std::size_t n = s.index(1, 40);
    std::optional<std::size_t> k_bar;
    if (s.coin()) k_bar = s.index(2, 20);
    std::vector<double> u(n);
    for (auto& v : u) v = s.uniform(-1, 1);
    SampleWindow w(k_bar);
    for (std::size_t k = 0; k < n; ++k) {
      w.push(u[k]);
      const double got = estimate_noise(w, L, dt).N_hat;
      REQUIRE(got >= 0.0);
      REQUIRE(got == Approx(oracle::noise_estimate(u, k, L, dt, k_bar)).margin(1e-12));
    }
  }
}

TEST_CASE("property: window choice invariants", "[adaptive][property]") {
  gen::Source s(13);
  for (int trial = 0; trial < 2000; ++trial) {
    AdaptiveParams p;
    p.L = s.uniform(0.1, 5.0);
    p.dt = s.uniform(0.001, 0.1);
    p.k_bar = s.index(2, 300);
    p.gamma_bar = s.uniform(2.0, 1.0 + std::sqrt(2.0));
    const double N_hat = s.coin(0.2) ? 0.0 : s.uniform(0.0, 0.5);
    const std::size_t k = s.index(1, 400);
    const auto c = select_window(N_hat, p, k);
    REQUIRE(c.gamma >= 1.0);
    REQUIRE(c.gamma <= p.gamma_bar + 1e-12);
    REQUIRE(c.steps >= 1);
    REQUIRE(c.T_hat == double(c.steps) * p.dt);
    const bool first_branch = 2.0 * std::sqrt(N_hat / p.L) <= p.dt;
    if (first_branch) REQUIRE(c.steps == 1);
    const double ref = oracle::smallest_gamma(N_hat, p.L, p.dt, p.gamma_bar);
    REQUIRE(c.gamma == Approx(ref).epsilon(1e-12));
    // uncapped window length is gamma * 2 sqrt(N_hat / L), at least dt
    const double uncapped = first_branch ? p.dt : c.gamma * 2.0 * std::sqrt(N_hat / p.L);
    const double expect = std::min({double(k) * p.dt, double(*p.k_bar) * p.dt, uncapped});
    REQUIRE(c.T_hat == Approx(expect).epsilon(1e-9));
  }
}

TEST_CASE("property: noise estimate never exceeds the true bound", "[adaptive][property]") {
  gen::Source s(14);
  for (int trial = 0; trial < 300; ++trial) {
    const double L = s.uniform(0.1, 3.0), N = s.uniform(0.0, 0.2), dt = s.pick(std::vector<double>{0.005, 0.01, 0.05});
    const std::size_t n = 150;
    const auto f = random_member_FL(L, 1.0, s.raw(), dt, n, s.uniform(0.02, 1.0));
    const auto eta = gen_noise(gen::schedule(s, N, dt * n), {L, N, 1.0, dt}, n);
    const auto tr = compose(f, eta);
    AdaptiveParams p;
    p.L = L;
    p.dt = dt;
    p.k_bar = s.index(2, 80);
    AdaptiveDifferentiator d(p);
    double umax = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
      umax = std::max(umax, std::abs(tr.u[k]));
      REQUIRE(d.step(tr.u[k]).N_hat <= N + 64 * 2.2e-16 * (umax + 1.0));
    }
  }
}

TEST_CASE("property: per-step bound 2N/T + L T / 2", "[adaptive][property]") {
  gen::Source s(15);
  for (int trial = 0; trial < 200; ++trial) {
    const double L = s.uniform(0.1, 3.0), N = s.uniform(0.0, 0.2), dt = s.pick(std::vector<double>{0.005, 0.01, 0.05});
    const std::size_t n = 150;
    const auto f = random_member_FL(L, 1.0, s.raw(), dt, n, s.uniform(0.02, 1.0));
    const auto eta = gen_noise(gen::schedule(s, N, dt * n), {L, N, 1.0, dt}, n);
    const auto tr = compose(f, eta);
    AdaptiveParams p;
    p.L = L;
    p.dt = dt;
    p.k_bar = s.index(2, 80);
    AdaptiveDifferentiator d(p);
    for (std::size_t k = 0; k < n; ++k) {
      const auto& diag = d.step(tr.u[k]);
      if (k >= 1) {
        REQUIRE(std::abs(diag.y - tr.fdot[k]) <= 2.0 * N / diag.T_hat + L * diag.T_hat / 2.0 + 1e-9);
      }
    }
  }
}

TEST_CASE("property: quasi-exact without noise", "[adaptive][property]") {
  gen::Source s(16);
  for (int trial = 0; trial < 100; ++trial) {
    const double L = s.uniform(0.1, 3.0), dt = s.pick(std::vector<double>{0.01, 0.1});
    const auto tr = random_member_FL(L, 1.0, s.raw(), dt, 200, s.uniform(0.02, 1.0));
    AdaptiveParams p;
    p.L = L;
    p.dt = dt;
    p.k_bar = s.index(2, 100);
    AdaptiveDifferentiator d(p);
    d.step(tr.u[0]);
    for (std::size_t k = 1; k < tr.size(); ++k) {
      REQUIRE(std::abs(d.step(tr.u[k]).y - tr.fdot[k]) <= L * dt / 2.0 + 1e-9);
    }
  }
}
