#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

namespace robdiff {

/// Parameters of the adaptive sample-based differentiator.
///
/// `k_bar` is the estimation window length in samples (empty = unbounded
/// history, memory grows with every step). `gamma_bar` caps the window
/// inflation factor and must lie in [2, 1 + sqrt(2)] for the optimal error
/// band to hold.
struct AdaptiveParams {
  double L = 1.0;
  double dt = 0.01;
  std::optional<std::size_t> k_bar = 200;
  double gamma_bar = 2.0;

  void validate() const;

  /// Largest noise amplitude for which the window is long enough:
  /// L dt^2 (k_bar - 1)^2 / 2 (infinite for unbounded windows).
  double max_noise_bound() const;
};

/// Smallest k_bar with k_bar * dt > sqrt(2 N_bar / L) + dt, paired with
/// gamma_bar = 2.
AdaptiveParams tuned_params(double L, double dt, double N_bar);

/// Most recent measurements, oldest first. Holds min(k + 1, k_bar + 1)
/// samples; `lagged(j)` is u(t_k - j dt).
class SampleWindow {
 public:
  explicit SampleWindow(std::optional<std::size_t> k_bar);

  void push(double u);
  void clear();

  /// Index k of the newest sample. Only meaningful when !empty().
  std::size_t step() const { return pushed_ - 1; }
  bool empty() const { return pushed_ == 0; }
  std::size_t size() const;
  /// min(k, k_bar): the longest lag that can be read.
  std::size_t max_lag() const { return size() == 0 ? 0 : size() - 1; }

  double lagged(std::size_t j) const;

  /// Contiguous view of the stored samples, oldest first.
  std::span<const double> samples() const;

 private:
  std::optional<std::size_t> k_bar_;
  std::size_t capacity_ = 0;   // k_bar + 1 when bounded
  std::vector<double> buffer_;  // bounded: mirrored ring of 2 * capacity_
  std::size_t head_ = 0;        // next write slot in the ring
  std::size_t pushed_ = 0;
};

/// Q(t_k, l dt, j dt) = u(t_k - j dt) - u(t_k) + [u(t_k) - u(t_k - l dt)] j / l.
/// Requires 1 <= j <= l <= window.max_lag().
double q_value(const SampleWindow& window, std::size_t ell, std::size_t j);

struct NoiseEstimate {
  double N_hat = 0.0;
  // Maximizing lag pair, zero when no pair beats the trivial j = l term.
  std::size_t ell = 0;
  std::size_t j = 0;
};

/// Half the largest excess of |Q| over the curvature allowance
/// L dt^2 j (l - j) / 2, scanned over l in {2..min(k, k_bar)}, j in {1..l}.
/// Ties go to the last pair in (l ascending, j ascending) order. L >= 0.
NoiseEstimate estimate_noise(const SampleWindow& window, double L, double dt);
NoiseEstimate estimate_noise(const SampleWindow& window, const AdaptiveParams& params);

/// How gamma_k is picked from the admissible set {j dt / (2 sqrt(N_hat/L))}.
enum class GammaPolicy { smallest, largest };

struct WindowChoice {
  double gamma = 1.0;
  std::size_t steps = 0;  // T_hat / dt
  double T_hat = 0.0;
};

WindowChoice select_window(double N_hat, const AdaptiveParams& params, std::size_t k,
                           GammaPolicy policy = GammaPolicy::smallest);

struct AdaptiveDiagnostics {
  std::size_t k = 0;
  double N_hat = 0.0;
  double gamma = 1.0;
  double T_hat = 0.0;
  std::size_t window_steps = 0;
  double y = 0.0;
};

/// Streaming adaptive differentiator. One instance per measurement stream.
class AdaptiveDifferentiator {
 public:
  explicit AdaptiveDifferentiator(const AdaptiveParams& params,
                                  GammaPolicy policy = GammaPolicy::smallest);

  const AdaptiveDiagnostics& step(double u);
  void reset();

  const AdaptiveParams& params() const { return params_; }
  const AdaptiveDiagnostics& last() const { return last_; }
  const SampleWindow& window() const { return window_; }

 private:
  AdaptiveParams params_;
  GammaPolicy policy_;
  SampleWindow window_;
  AdaptiveDiagnostics last_;
};

}  // namespace robdiff
