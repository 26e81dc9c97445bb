#pragma once

#include <cstddef>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "robdiff/adaptive.hpp"

namespace robdiff {

enum class EngineKind { adaptive, finite_difference, red_explicit, red_implicit };

std::string to_string(EngineKind kind);
EngineKind engine_kind_from_string(const std::string& name);

struct RedState {
  double y1 = 0.0;
  double y2 = 0.0;
  bool sliding = false;  // implicit scheme only: step ended on the sliding set
};

struct EngineDiagnostics {
  std::size_t k = 0;
  double y = 0.0;
  std::optional<AdaptiveDiagnostics> adaptive;
  std::optional<RedState> red;
};

/// Common stepping contract. Same parameters + same input prefix produce the
/// same output prefix; `reset` returns to the state before the first sample.
class Differentiator {
 public:
  virtual ~Differentiator() = default;

  virtual double step(double u) = 0;
  virtual void reset() = 0;
  virtual EngineKind kind() const = 0;
  virtual const EngineDiagnostics& diagnostics() const = 0;
  virtual std::unique_ptr<Differentiator> clone() const = 0;
};

// --------------------------------------------------------------------------

class AdaptiveEngine final : public Differentiator {
 public:
  explicit AdaptiveEngine(const AdaptiveParams& params,
                          GammaPolicy policy = GammaPolicy::smallest);

  double step(double u) override;
  void reset() override;
  EngineKind kind() const override { return EngineKind::adaptive; }
  const EngineDiagnostics& diagnostics() const override { return diag_; }
  std::unique_ptr<Differentiator> clone() const override;

 private:
  AdaptiveDifferentiator core_;
  EngineDiagnostics diag_;
};

struct FiniteDifferenceParams {
  double L = 1.0;  // design bounds
  double N = 0.0;
  double dt = 0.01;

  void validate() const;
  /// round(2 sqrt(N/L) / dt), at least 1.
  std::size_t window() const;
};

/// y_k = (u_k - u_{k-m}) / (m dt) once m samples of history exist, else 0.
class FiniteDifferenceEngine final : public Differentiator {
 public:
  explicit FiniteDifferenceEngine(const FiniteDifferenceParams& params);

  double step(double u) override;
  void reset() override;
  EngineKind kind() const override { return EngineKind::finite_difference; }
  const EngineDiagnostics& diagnostics() const override { return diag_; }
  std::unique_ptr<Differentiator> clone() const override;

  std::size_t window() const { return m_; }

 private:
  FiniteDifferenceParams params_;
  std::size_t m_;
  std::vector<double> ring_;  // m + 1 slots
  std::size_t count_ = 0;
  EngineDiagnostics diag_;
};

enum class RedScheme { explicit_euler, implicit_euler };

struct RedParams {
  double lambda1 = 1.5;
  double lambda2 = 1.1;
  double L = 1.0;
  double dt = 0.01;
  RedScheme scheme = RedScheme::implicit_euler;

  void validate() const;
  /// lambda1 >= sqrt(8 lambda2): the gain condition for finite-time
  /// convergence bounds. Violating it is allowed.
  bool meets_convergence_condition() const;
};

/// Second-order sliding-mode differentiator
///   y1' = lambda1 sqrt(L) |u - y1|^(1/2) sign(u - y1) + y2
///   y2' = lambda2 L sign(u - y1)
/// with y1(0) = u(0), y2(0) = 0.
///
/// Each call consumes u_k, advances the state from step k to k + 1 and
/// returns y2 at step k + 1. The explicit scheme is forward Euler and can
/// diverge or chatter for large dt times gains.
///
/// The implicit scheme treats sign(.) as set-valued and solves the backward
/// Euler step exactly: with e+ = u_k - y1+ and w = u_k - y1 - dt y2,
///   e+ + dt lambda1 sqrt(L) sqrt|e+| s + dt^2 lambda2 L s = w,  s in Sgn(e+).
/// If |w| <= dt^2 lambda2 L the solution is e+ = 0, s = w / (dt^2 lambda2 L)
/// (y1 is projected onto u_k); otherwise s = sign(w) and sqrt|e+| is the
/// positive root of x^2 + dt lambda1 sqrt(L) x + dt^2 lambda2 L - |w| = 0.
class RedEngine final : public Differentiator {
 public:
  explicit RedEngine(const RedParams& params);

  double step(double u) override;
  void reset() override;
  EngineKind kind() const override {
    return params_.scheme == RedScheme::explicit_euler ? EngineKind::red_explicit
                                                       : EngineKind::red_implicit;
  }
  const EngineDiagnostics& diagnostics() const override { return diag_; }
  std::unique_ptr<Differentiator> clone() const override;

  const RedState& state() const { return state_; }

 private:
  void step_explicit(double u);
  void step_implicit(double u);

  RedParams params_;
  RedState state_;
  bool started_ = false;
  EngineDiagnostics diag_;
};

// --------------------------------------------------------------------------

/// Builds an engine from a kind name and a JSON parameter object.
///
/// Recognized kinds: "adaptive" {L, dt, k_bar (integer or "inf"), gamma_bar,
/// gamma_policy}, "fd" {L, N, dt}, "red-explicit" / "red-implicit"
/// {lambda1, lambda2, L, dt}. Missing L / dt fall back to `defaults`.
std::unique_ptr<Differentiator> make_engine(const std::string& kind,
                                            const nlohmann::json& params,
                                            const nlohmann::json& defaults = nlohmann::json::object());

std::vector<std::string> engine_kinds();

}  // namespace robdiff
