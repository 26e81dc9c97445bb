#include "robdiff/signal.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>
#include <string>

namespace robdiff {

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

// First sample index at or after time t (tolerant to representation error
// in t / dt).
std::size_t first_index_at(double t, double dt) {
  const double x = t / dt;
  const double r = std::round(x);
  if (std::abs(x - r) <= 1e-9 * std::max(1.0, std::abs(x))) {
    return static_cast<std::size_t>(std::max(0.0, r));
  }
  return static_cast<std::size_t>(std::max(0.0, std::ceil(x)));
}

// Exact piecewise-quadratic evaluation of a bang-bang signal.
struct BangBangEvaluator {
  struct Piece {
    double start, f, v, a;
  };
  std::vector<Piece> pieces;

  explicit BangBangEvaluator(const BangBangSignal& s) {
    pieces.push_back({0.0, s.f0, s.fdot0, 0.0});
    for (const auto& sw : s.switches) {
      auto& last = pieces.back();
      if (sw.start <= last.start) {
        last.a = sw.accel;
        continue;
      }
      const double d = sw.start - last.start;
      pieces.push_back({sw.start, last.f + last.v * d + 0.5 * last.a * d * d,
                        last.v + last.a * d, sw.accel});
    }
  }

  // Returns (f, fdot) at t using the piece with start <= t.
  std::pair<double, double> operator()(double t, std::size_t& hint) const {
    while (hint + 1 < pieces.size() && pieces[hint + 1].start <= t) ++hint;
    const auto& p = pieces[hint];
    const double d = t - p.start;
    return {p.f + p.v * d + 0.5 * p.a * d * d, p.v + p.a * d};
  }
};

void check_initial(const TestSignalSpec& spec, const SignalClassParams& params,
                   double f0, double fdot0) {
  if (!spec.require_initial_bound) return;
  if (std::abs(f0) > params.R || std::abs(fdot0) > params.R) {
    throw std::invalid_argument(
        "initial value/slope exceed R (|f(0)| = " + std::to_string(std::abs(f0)) +
        ", |f'(0)| = " + std::to_string(std::abs(fdot0)) +
        ", R = " + std::to_string(params.R) + ")");
  }
}

}  // namespace

void SignalClassParams::validate() const {
  if (!(L >= 0.0) || !std::isfinite(L)) throw std::invalid_argument("L must be finite and >= 0");
  if (!(N >= 0.0) || !std::isfinite(N)) throw std::invalid_argument("N must be finite and >= 0");
  if (!(R >= 0.0) || !std::isfinite(R)) throw std::invalid_argument("R must be finite and >= 0");
  if (!(dt > 0.0) || !std::isfinite(dt)) throw std::invalid_argument("dt must be finite and > 0");
}

void SampledTrace::validate() const {
  if (!(dt > 0.0)) throw std::invalid_argument("trace dt must be > 0");
  const auto n = u.size();
  auto check = [n](const std::vector<double>& v, const char* name) {
    if (!v.empty() && v.size() != n) {
      throw std::invalid_argument(std::string("trace sequence '") + name +
                                  "' length differs from u");
    }
  };
  check(f, "f");
  check(fdot, "fdot");
  check(eta, "eta");
}

double uniform_unit(std::uint64_t raw) {
  return static_cast<double>(raw >> 11) * 0x1.0p-53;
}

SampledTrace gen_test_signal(const TestSignalSpec& spec,
                             const SignalClassParams& params, std::size_t n) {
  params.validate();
  if (n < 1) throw std::invalid_argument("sample count must be >= 1");

  SampledTrace out;
  out.dt = params.dt;
  out.f.resize(n);
  out.fdot.resize(n);

  std::visit(
      overloaded{
          [&](const PolynomialSignal& p) {
            const auto& c = p.coefficients;
            if (c.empty()) throw std::invalid_argument("polynomial needs at least one coefficient");
            check_initial(spec, params, c[0], c.size() > 1 ? c[1] : 0.0);
            for (std::size_t k = 0; k < n; ++k) {
              const double t = out.time(k);
              double f = 0.0, fd = 0.0, fdd = 0.0;
              // Horner for value and first two derivatives.
              for (std::size_t i = c.size(); i-- > 0;) {
                fdd = fdd * t + 2.0 * fd;
                fd = fd * t + f;
                f = f * t + c[i];
              }
              if (std::abs(fdd) > params.L * (1.0 + 1e-12)) {
                throw std::invalid_argument(
                    "polynomial second derivative exceeds L at t = " + std::to_string(t));
              }
              out.f[k] = f;
              out.fdot[k] = fd;
            }
          },
          [&](const BangBangSignal& b) {
            double prev = -INFINITY;
            for (const auto& sw : b.switches) {
              if (std::abs(sw.accel) > params.L) {
                throw std::invalid_argument("bang-bang acceleration " + std::to_string(sw.accel) +
                                            " exceeds L = " + std::to_string(params.L));
              }
              if (sw.start < prev) throw std::invalid_argument("bang-bang switch times must be ordered");
              prev = sw.start;
            }
            check_initial(spec, params, b.f0, b.fdot0);
            const BangBangEvaluator eval(b);
            std::size_t hint = 0;
            for (std::size_t k = 0; k < n; ++k) {
              auto [f, fd] = eval(out.time(k), hint);
              out.f[k] = f;
              out.fdot[k] = fd;
            }
          },
          [&](const RampParabolaSignal& r) {
            check_initial(spec, params, r.f0, params.R);
            for (std::size_t k = 0; k < n; ++k) {
              const double t = out.time(k);
              out.f[k] = r.f0 + params.R * t + 0.5 * params.L * t * t;
              out.fdot[k] = params.R + params.L * t;
            }
          },
      },
      spec.kind);

  out.u = out.f;
  out.eta.assign(n, 0.0);
  return out;
}

std::vector<double> gen_noise(const NoiseScheduleSpec& schedule,
                              const SignalClassParams& params, std::size_t n) {
  params.validate();
  const double N = params.N;
  const double dt = params.dt;
  const auto& segs = schedule.segments;
  if (segs.empty()) throw std::invalid_argument("noise schedule has no segments");

  const double tol = 1e-9 * dt;
  if (std::abs(segs.front().start) > tol) {
    throw std::invalid_argument("noise schedule must start at t = 0 (uncovered gap)");
  }
  for (std::size_t i = 0; i < segs.size(); ++i) {
    const auto& s = segs[i];
    if (!(s.duration > 0.0) || !std::isfinite(s.duration)) {
      throw std::invalid_argument("segment " + std::to_string(i) + ": duration must be > 0");
    }
    if (i > 0 && std::abs(s.start - segs[i - 1].end()) > tol) {
      throw std::invalid_argument(
          "segment " + std::to_string(i) +
          (s.start > segs[i - 1].end() ? ": uncovered gap before segment"
                                       : ": overlaps previous segment"));
    }
    std::visit(overloaded{
                   [&](const ConstantNoise& c) {
                     if (std::abs(c.level) > N) {
                       throw std::invalid_argument("segment " + std::to_string(i) +
                                                   ": constant level outside [-N, N]");
                     }
                   },
                   [&](const ParabolaArcNoise& p) {
                     if (!std::isfinite(p.factor) || p.factor < -1.0) {
                       throw std::invalid_argument("segment " + std::to_string(i) +
                                                   ": arc factor must be >= -1");
                     }
                   },
                   [&](const StepNoise& s2) {
                     if (std::abs(s2.from) > N || std::abs(s2.to) > N) {
                       throw std::invalid_argument("segment " + std::to_string(i) +
                                                   ": step levels outside [-N, N]");
                     }
                   },
                   [](const UniformWhiteNoise&) {},
               },
               s.kind);
  }
  const double t_last = static_cast<double>(n - 1) * dt;
  if (n > 0 && segs.back().end() <= t_last - tol) {
    throw std::invalid_argument("noise schedule ends before the last sample (uncovered gap)");
  }

  std::vector<double> eta(n, 0.0);
  for (std::size_t i = 0; i < segs.size(); ++i) {
    const auto& s = segs[i];
    const std::size_t k0 = std::min(n, first_index_at(s.start, dt));
    const std::size_t k1 =
        (i + 1 == segs.size()) ? n : std::min(n, first_index_at(s.end(), dt));
    std::visit(overloaded{
                   [&](const ConstantNoise& c) {
                     for (std::size_t k = k0; k < k1; ++k) eta[k] = c.level;
                   },
                   [&](const ParabolaArcNoise& p) {
                     const double curv = (1.0 + p.factor) * params.L / 2.0;
                     for (std::size_t k = k0; k < k1; ++k) {
                       const double tau = static_cast<double>(k) * dt - s.start;
                       eta[k] = std::max(-N, N - curv * tau * tau);
                     }
                   },
                   [&](const StepNoise& st) {
                     const std::size_t ka = first_index_at(st.at, dt);
                     for (std::size_t k = k0; k < k1; ++k) eta[k] = k < ka ? st.from : st.to;
                   },
                   [&](const UniformWhiteNoise& w) {
                     std::mt19937_64 gen(w.seed);
                     for (std::size_t k = k0; k < k1; ++k) {
                       eta[k] = N * (2.0 * uniform_unit(gen()) - 1.0);
                     }
                   },
               },
               s.kind);
  }
  for (auto& e : eta) e = std::clamp(e, -N, N);
  return eta;
}

SampledTrace compose(const SampledTrace& f_trace, std::span<const double> noise) {
  if (noise.size() != f_trace.size()) {
    throw std::invalid_argument("compose: noise length " + std::to_string(noise.size()) +
                                " differs from signal length " +
                                std::to_string(f_trace.size()));
  }
  const std::vector<double>& f = f_trace.f.empty() ? f_trace.u : f_trace.f;
  SampledTrace out;
  out.dt = f_trace.dt;
  out.f = f;
  out.fdot = f_trace.fdot;
  out.eta.assign(noise.begin(), noise.end());
  out.u.resize(f.size());
  for (std::size_t k = 0; k < f.size(); ++k) out.u[k] = f[k] + noise[k];
  return out;
}

SampledTrace random_member_FL(double L, double R, std::uint64_t seed, double dt,
                              std::size_t n, std::optional<double> mean_switch_interval) {
  SignalClassParams params{L, 0.0, R, dt};
  params.validate();
  std::mt19937_64 gen(seed);
  auto uni = [&] { return uniform_unit(gen()); };

  BangBangSignal s;
  s.f0 = R * (2.0 * uni() - 1.0);
  s.fdot0 = R * (2.0 * uni() - 1.0);
  const double mean = mean_switch_interval.value_or(20.0 * dt);
  const double horizon = static_cast<double>(n) * dt;
  double t = 0.0;
  while (t < horizon) {
    s.switches.push_back({t, uni() < 0.5 ? -L : L});
    t += -mean * std::log1p(-uni());
  }
  return gen_test_signal(TestSignalSpec{s, true}, params, n);
}

}  // namespace robdiff
