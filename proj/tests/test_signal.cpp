#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <cstring>

#include "robdiff/signal.hpp"
#include "support.hpp"

using namespace robdiff;
using Catch::Approx;

TEST_CASE("ramp-parabola samples f = L t^2/2 + R t exactly", "[signal]") {
  SignalClassParams p{1.0, 0.0, 1.0, 0.01};
  const auto tr = gen_test_signal({RampParabolaSignal{}, true}, p, 501);
  for (std::size_t k = 0; k < tr.size(); ++k) {
    const double t = tr.time(k);
    REQUIRE(tr.f[k] == Approx(t * t / 2.0 + t).margin(1e-12));
    REQUIRE(tr.fdot[k] == Approx(t + 1.0).margin(1e-12));
    REQUIRE(tr.u[k] == tr.f[k]);
  }
}

TEST_CASE("zero polynomial gives all-zero samples", "[signal]") {
  SignalClassParams p{3.0, 0.1, 2.0, 0.2};
  const auto tr = gen_test_signal({PolynomialSignal{{0.0}}}, p, 17);
  for (std::size_t k = 0; k < tr.size(); ++k) {
    REQUIRE(tr.f[k] == 0.0);
    REQUIRE(tr.fdot[k] == 0.0);
  }
}

TEST_CASE("bang-bang slope integrates the acceleration profile", "[signal]") {
  SignalClassParams p{2.0, 0.0, 0.0, 0.5};
  BangBangSignal bb;
  bb.switches = {{0.0, 2.0}, {1.0, -2.0}};
  const auto tr = gen_test_signal({bb}, p, 5);
  const std::vector<double> expected{0.0, 1.0, 2.0, 1.0, 0.0};
  for (std::size_t k = 0; k < 5; ++k) REQUIRE(tr.fdot[k] == Approx(expected[k]).margin(1e-12));
  // f from the trapezoid rule is exact for piecewise-linear slopes.
  double f = 0.0;
  for (std::size_t k = 1; k < 5; ++k) {
    f += 0.5 * (expected[k - 1] + expected[k]) * 0.5;
    REQUIRE(tr.f[k] == Approx(f).margin(1e-12));
  }
}

TEST_CASE("test signal rejects out-of-class parameters", "[signal]") {
  SignalClassParams p{1.0, 0.0, 0.5, 0.1};
  BangBangSignal bb;
  bb.switches = {{0.0, 1.5}};
  REQUIRE_THROWS_AS(gen_test_signal({bb}, p, 10), std::invalid_argument);
  REQUIRE_THROWS_AS(gen_test_signal({PolynomialSignal{{0.0, 0.0, 0.6}}}, p, 10), std::invalid_argument);
  // |f'(0)| = 1 > R with the bound requested
  REQUIRE_THROWS_AS(gen_test_signal({PolynomialSignal{{0.0, 1.0}}, true}, p, 10), std::invalid_argument);
  REQUIRE_NOTHROW(gen_test_signal({PolynomialSignal{{0.0, 1.0}}, false}, p, 10));
  REQUIRE_THROWS_AS(gen_test_signal({RampParabolaSignal{}}, p, 0), std::invalid_argument);
}

TEST_CASE("noise segments produce their documented shapes", "[signal]") {
  const double N = 0.08;
  SignalClassParams p{1.0, N, 0.0, 0.01};

  SECTION("constant") {
    const auto eta = gen_noise({{{0.0, 1.0, ConstantNoise{N}}}}, p, 100);
    for (double e : eta) REQUIRE(e == N);
  }
  SECTION("step") {
    const auto eta = gen_noise({{{0.0, 1.0, StepNoise{-N, N, 0.37}}}}, p, 100);
    for (std::size_t k = 0; k < eta.size(); ++k) REQUIRE(eta[k] == (k < 37 ? -N : N));
  }
  SECTION("parabola arc reaches the clamp at sqrt(2N / ((1 + factor) L / 2))") {
    const double factor = 1.1;
    const auto eta = gen_noise({{{0.0, 1.0, ParabolaArcNoise{factor}}}}, p, 100);
    const double t_clamp = std::sqrt(2.0 * N / ((1.0 + factor) / 2.0));
    REQUIRE(t_clamp == Approx(0.3904).epsilon(1e-3));
    for (std::size_t k = 0; k < eta.size(); ++k) {
      const double t = 0.01 * k;
      if (t < t_clamp - 1e-9) {
        REQUIRE(eta[k] == Approx(N - 1.05 * t * t).margin(1e-15));
        REQUIRE(eta[k] > -N);
      } else {
        REQUIRE(eta[k] == -N);
      }
    }
  }
  SECTION("white noise is seeded and bounded") {
    const NoiseScheduleSpec s{{{0.0, 1.0, UniformWhiteNoise{42}}}};
    const auto a = gen_noise(s, p, 100);
    const auto b = gen_noise(s, p, 100);
    REQUIRE(a == b);
    const auto c = gen_noise({{{0.0, 1.0, UniformWhiteNoise{43}}}}, p, 100);
    REQUIRE(a != c);
    for (double e : a) REQUIRE(std::abs(e) <= N);
  }
}

TEST_CASE("noise schedule validation", "[signal]") {
  SignalClassParams p{1.0, 0.08, 0.0, 0.01};
  REQUIRE_THROWS_AS(gen_noise({}, p, 10), std::invalid_argument);
  // gap
  REQUIRE_THROWS_AS(gen_noise({{{0.0, 0.05, ConstantNoise{0}}, {0.06, 1.0, ConstantNoise{0}}}}, p, 50),
                    std::invalid_argument);
  // overlap
  REQUIRE_THROWS_AS(gen_noise({{{0.0, 0.05, ConstantNoise{0}}, {0.04, 1.0, ConstantNoise{0}}}}, p, 50),
                    std::invalid_argument);
  // too short
  REQUIRE_THROWS_AS(gen_noise({{{0.0, 0.1, ConstantNoise{0}}}}, p, 50), std::invalid_argument);
  // level outside the band
  REQUIRE_THROWS_AS(gen_noise({{{0.0, 1.0, ConstantNoise{0.1}}}}, p, 50), std::invalid_argument);
  REQUIRE_THROWS_AS(gen_noise({{{0.0, 1.0, ParabolaArcNoise{-2.0}}}}, p, 50), std::invalid_argument);
}

TEST_CASE("compose adds noise sample by sample", "[signal]") {
  SignalClassParams p{1.0, 0.08, 1.0, 0.01};
  const auto f = gen_test_signal({RampParabolaSignal{}}, p, 200);
  const auto zero = compose(f, std::vector<double>(200, 0.0));
  REQUIRE(zero.u == f.f);

  const auto flat = gen_test_signal({PolynomialSignal{{0.0}}}, p, 200);
  const auto step = gen_noise({{{0.0, 3.0, StepNoise{-0.08, 0.08, 1.0}}}}, p, 200);
  REQUIRE(compose(flat, step).u == step);

  REQUIRE_THROWS_AS(compose(f, std::vector<double>(3, 0.0)), std::invalid_argument);
}

TEST_CASE("random class members: determinism, affine case, second differences", "[signal]") {
  const auto a = random_member_FL(1.0, 1.0, 9, 0.01, 300);
  const auto b = random_member_FL(1.0, 1.0, 9, 0.01, 300);
  REQUIRE(a.u == b.u);
  REQUIRE(a.fdot == b.fdot);

  const auto affine = random_member_FL(0.0, 1.0, 3, 0.01, 300);
  for (double v : affine.fdot) REQUIRE(v == affine.fdot.front());

  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    const auto tr = random_member_FL(2.0, 1.0, seed, 0.01, 400);
    REQUIRE(oracle::max_second_difference(tr.f, 0.01) <= 2.0 * (1.0 + 1e-9) + 1e-9);
    REQUIRE(std::abs(tr.f[0]) <= 1.0);
    REQUIRE(std::abs(tr.fdot[0]) <= 1.0);
  }
}

TEST_CASE("uniform_unit maps the top 53 bits onto [0, 1)", "[signal]") {
  REQUIRE(uniform_unit(0) == 0.0);
  REQUIRE(uniform_unit(~std::uint64_t{0}) == 1.0 - std::ldexp(1.0, -53));
  REQUIRE(uniform_unit(std::uint64_t{1} << 63) == 0.5);
}

// ---------------------------------------------------------------------------
// Properties

TEST_CASE("property: every noise sample lies in [-N, N]", "[signal][property]") {
  gen::Source s(2024);
  for (int trial = 0; trial < 10000; ++trial) {
    const double N = s.uniform(0.0, 2.0);
    const double dt = s.pick(std::vector<double>{0.001, 0.01, 0.05});
    SignalClassParams p{s.uniform(0.1, 5.0), N, 0.0, dt};
    const std::size_t n = s.index(2, 60);
    const auto sched = gen::schedule(s, N, dt * double(n));
    const auto eta = gen_noise(sched, p, n);
    for (double e : eta) REQUIRE(std::abs(e) <= N);
  }
}

TEST_CASE("property: generated signals obey the grid growth bound", "[signal][property]") {
  gen::Source s(77);
  for (int trial = 0; trial < 60; ++trial) {
    const double L = s.uniform(0.0, 3.0);
    const double dt = s.pick(std::vector<double>{0.005, 0.02, 0.1});
    SampledTrace tr;
    if (s.coin()) {
      tr = random_member_FL(L, 1.0, s.raw(), dt, 300, s.uniform(0.01, 1.0));
    } else {
      BangBangSignal bb;
      bb.f0 = s.uniform(-1, 1);
      bb.fdot0 = s.uniform(-1, 1);
      double t = 0.0;
      for (int i = 0; i < 6; ++i) {
        bb.switches.push_back({t, s.uniform(-L, L)});
        t += s.uniform(0.0, 1.0);
      }
      tr = gen_test_signal({bb}, {L, 0.0, 1.0, dt}, 300);
    }
    REQUIRE(oracle::growth_bound_violation(tr, L) <= 0.0);
  }
}

TEST_CASE("property: compose is exact addition", "[signal][property]") {
  gen::Source s(5);
  for (int trial = 0; trial < 200; ++trial) {
    const double N = s.uniform(0.0, 1.0);
    const double dt = 0.01;
    const auto f = random_member_FL(1.0, 1.0, s.raw(), dt, 120);
    const auto eta = gen_noise(gen::schedule(s, N, 1.2), {1.0, N, 1.0, dt}, 120);
    const auto tr = compose(f, eta);
    for (std::size_t k = 0; k < tr.size(); ++k) {
      const double sum = f.f[k] + eta[k];
      REQUIRE(std::memcmp(&tr.u[k], &sum, sizeof sum) == 0);
      REQUIRE(tr.eta[k] == eta[k]);
      REQUIRE(tr.f[k] == f.f[k]);
    }
  }
}
