#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <variant>
#include <vector>

namespace robdiff {

/// Bounds defining a problem instance: |f''| <= L, |eta| <= N,
/// |f(0)|, |f'(0)| <= R, sampled every dt seconds.
struct SignalClassParams {
  double L = 1.0;
  double N = 0.0;
  double R = 0.0;
  double dt = 0.01;

  void validate() const;
};

/// Time-aligned samples at t_k = k * dt.
///
/// `u` is always present. `f`, `fdot` and `eta` are either empty or have the
/// same length as `u`.
struct SampledTrace {
  double dt = 0.01;
  std::vector<double> u;
  std::vector<double> f;
  std::vector<double> fdot;
  std::vector<double> eta;

  std::size_t size() const { return u.size(); }
  bool has_truth() const { return !f.empty() && !fdot.empty(); }
  bool has_noise() const { return !eta.empty(); }
  double time(std::size_t k) const { return static_cast<double>(k) * dt; }

  void validate() const;
};

// --------------------------------------------------------------------------
// Test signals

struct PolynomialSignal {
  // c0 + c1 t + c2 t^2 + ...
  std::vector<double> coefficients;
};

/// Piecewise-constant acceleration. Each entry switches the acceleration to
/// `accel` at time `start`; before the first entry the acceleration is zero.
struct BangBangSignal {
  struct Switch {
    double start = 0.0;
    double accel = 0.0;
  };
  std::vector<Switch> switches;
  double f0 = 0.0;
  double fdot0 = 0.0;
};

/// f(t) = f0 + R t + L t^2 / 2 using the instance's L and R.
struct RampParabolaSignal {
  double f0 = 0.0;
};

struct TestSignalSpec {
  std::variant<PolynomialSignal, BangBangSignal, RampParabolaSignal> kind;
  // Reject the signal unless |f(0)| <= R and |f'(0)| <= R.
  bool require_initial_bound = false;
};

/// Samples the signal at n points; u = f and eta = 0.
SampledTrace gen_test_signal(const TestSignalSpec& spec,
                             const SignalClassParams& params, std::size_t n);

// --------------------------------------------------------------------------
// Noise schedules

struct ConstantNoise {
  double level = 0.0;
};

/// N - (1 + factor) L tau^2 / 2 with tau measured from the segment start,
/// held at -N once it reaches the bottom of the band.
struct ParabolaArcNoise {
  double factor = 1.0;
};

/// `from` before absolute time `at`, `to` from `at` on.
struct StepNoise {
  double from = 0.0;
  double to = 0.0;
  double at = 0.0;
};

/// Uniform on [-N, N]; see `uniform_unit` for the exact generator.
struct UniformWhiteNoise {
  std::uint64_t seed = 0;
};

struct NoiseSegment {
  double start = 0.0;
  double duration = 0.0;
  std::variant<ConstantNoise, ParabolaArcNoise, StepNoise, UniformWhiteNoise> kind;

  double end() const { return start + duration; }
};

struct NoiseScheduleSpec {
  std::vector<NoiseSegment> segments;
};

std::vector<double> gen_noise(const NoiseScheduleSpec& schedule,
                              const SignalClassParams& params, std::size_t n);

/// u = f + eta sample by sample; f, fdot are carried through and eta is
/// stored alongside.
SampledTrace compose(const SampledTrace& f_trace, std::span<const double> noise);

/// Random bang-bang member of the signal class: accelerations +-L with
/// exponentially distributed switch intervals, initial value and slope
/// uniform in [-R, R]. Deterministic per seed.
SampledTrace random_member_FL(double L, double R, std::uint64_t seed, double dt,
                              std::size_t n,
                              std::optional<double> mean_switch_interval = {});

/// 53-bit uniform draw in [0, 1) from a raw mt19937_64 output:
/// (x >> 11) * 2^-53. Used for every random number in the library so that
/// outputs do not depend on the standard library's distribution classes.
double uniform_unit(std::uint64_t raw);

}  // namespace robdiff
