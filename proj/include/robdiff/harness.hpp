#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include <json.hpp>

#include "robdiff/engines.hpp"
#include "robdiff/signal.hpp"

namespace robdiff {

struct EngineSpec {
  std::string name;
  std::string kind;
  nlohmann::json params = nlohmann::json::object();
};

/// Random class member drawn with `random_member_FL`; the scenario seed is
/// used unless `seed` is set.
struct RandomSignal {
  std::optional<std::uint64_t> seed;
  std::optional<double> mean_switch_interval;
};

struct Scenario {
  std::string name = "scenario";
  SignalClassParams params;
  // A preloaded trace (adversary export, CSV file) bypasses the noise schedule.
  std::variant<TestSignalSpec, RandomSignal, SampledTrace> signal;
  NoiseScheduleSpec noise;
  std::vector<EngineSpec> engines;
  double duration = 1.0;
  std::uint64_t seed = 0;
  double t_start = 0.0;
  std::string config_hash;

  std::size_t sample_count() const;
  void validate() const;
};

/// Samples signal and noise for the scenario. Deterministic in the scenario.
SampledTrace build_trace(const Scenario& scenario);

struct EngineSeries {
  std::string name;
  EngineKind kind = EngineKind::adaptive;
  std::vector<double> y;
  std::vector<double> e;  // |fdot - y|, empty without ground truth
  std::vector<double> M;  // M[k] = max_{i >= k} e[i]
  // Adaptive engines only.
  std::vector<double> N_hat;
  std::vector<double> gamma;
  std::vector<double> T_hat;
};

struct ErrorReport {
  std::string scenario;
  SampledTrace trace;
  std::vector<EngineSeries> engines;
  std::uint64_t seed = 0;
  std::string config_hash;
  double t_start = 0.0;

  const EngineSeries& engine(const std::string& name) const;
  /// max e_k over t_k >= t (with a 1e-9 dt tolerance on the boundary).
  double max_error_from(const EngineSeries& series, double t) const;
};

std::vector<double> suffix_max(std::span<const double> e);

/// Feeds the whole trace through a fresh copy of `prototype`.
EngineSeries run_engine(const Differentiator& prototype, const SampledTrace& trace,
                        const std::string& name);

ErrorReport run_scenario(const Scenario& scenario);

/// Runs scenarios on up to `threads` workers (0 = hardware concurrency).
/// Results are in input order and independent of the thread count.
std::vector<ErrorReport> run_scenarios(const std::vector<Scenario>& scenarios,
                                       std::size_t threads = 0);

// --------------------------------------------------------------------------
// Output

struct ReportWindow {
  std::string label;
  double t0 = 0.0;
  double t1 = 0.0;
};

struct EngineSummary {
  std::string name;
  std::string kind;
  double max_error = 0.0;  // over t >= t_start
  double t_of_max = 0.0;
  std::vector<double> window_max;
};

struct Summary {
  double t_start = 0.0;
  std::vector<ReportWindow> windows;
  std::vector<EngineSummary> rows;
};

Summary summarize(const ErrorReport& report, const std::vector<ReportWindow>& windows = {});

/// One window per parabola-arc noise segment.
std::vector<ReportWindow> arc_windows(const NoiseScheduleSpec& noise);

/// Shortest round-trip decimal representation.
std::string format_number(double v);

/// Columns: k,t,u,f,fdot then per engine <name>.y,<name>.e and, for adaptive
/// engines, <name>.N_hat,<name>.gamma,<name>.T_hat. A leading '#' line carries
/// the format version, seed and config hash.
void write_trace_csv(const ErrorReport& report, std::ostream& out);
std::string trace_csv_header(const ErrorReport& report);

void write_summary_csv(const Summary& summary, const ErrorReport& report, std::ostream& out);

/// Signal-only CSV (k,t,u,f,fdot,eta) used for adversary exports. Missing
/// columns are written empty.
void write_signal_csv(const SampledTrace& trace, std::ostream& out, const std::string& comment = {});

/// Reads either CSV flavour back into a trace. Requires k,t,u; f, fdot and
/// eta are picked up when present. dt comes from the t column.
SampledTrace read_signal_csv(std::istream& in);

/// Three stacked panels: error per engine, noise, adaptive noise estimate.
void write_svg(const ErrorReport& report, std::ostream& out);

/// FNV-1a (64 bit) of the compact JSON dump, as 16 hex digits.
std::string config_hash(const nlohmann::json& config);

// --------------------------------------------------------------------------
// Worst-case sweep

struct NamedTrace {
  std::string source;
  SampledTrace trace;
};

/// Random noise schedule in E_N mixing constant levels, parabola arcs, steps
/// and white noise with segment lengths on the scale of sqrt(N/L).
NoiseScheduleSpec random_noise_schedule(double L, double N, double dt, double duration,
                                        std::uint64_t seed);

/// Adversary constructions for (L, N, dt) plus `draws` random class members
/// with random noise, each long enough to exercise a window of k_bar steps.
std::vector<NamedTrace> worst_case_corpus(double L, double N, double dt, std::size_t k_bar,
                                          std::size_t draws, std::uint64_t seed, double R = 1.0);

/// max |fdot_k - y_k| over k >= max(k_from, 1).
double max_error_after(const Differentiator& prototype, const SampledTrace& trace,
                       std::size_t k_from);

struct SweepSpec {
  std::vector<double> L;
  std::vector<double> N;
  std::vector<double> dt;
  // Adaptive engine parameters; k_bar is tuned from N_bar unless given.
  nlohmann::json engine = nlohmann::json::object();
  std::optional<double> N_bar;  // default: largest N of the grid
  std::size_t random_draws = 200;
  std::uint64_t seed = 1;
  double R = 1.0;
  std::size_t threads = 0;

  void validate() const;
};

struct SweepCell {
  double L = 0.0;
  double N = 0.0;
  double dt = 0.0;
  std::size_t k_bar = 0;
  double empirical = 0.0;
  std::string worst_source;
  double lower = 0.0;  // 2 sqrt(2 N L) - L dt / 2
  double upper = 0.0;  // 2 sqrt(2 N L) + L dt / 2
  double tolerance = 0.0;
  bool lower_informative = false;
  bool pass = false;
};

std::vector<SweepCell> worst_case_sweep(const SweepSpec& spec);
void write_sweep_csv(const std::vector<SweepCell>& cells, std::ostream& out);

// --------------------------------------------------------------------------
// Reference comparison: f(t) = L t^2 / 2 + R t under a fixed noise timetable,
// the adaptive differentiator against two implicit RED tunings.

inline constexpr std::uint64_t kReferenceSeed = 20240607;

NoiseScheduleSpec reference_noise_schedule(double L, double N, std::uint64_t seed);
Scenario reference_scenario(std::uint64_t seed = kReferenceSeed);

}  // namespace robdiff
