// robdiff: command-line front end for simulations, sweeps, adversary exports
// and the reference comparison.
//
// Exit codes: 0 success, 2 I/O error, 3 invalid config or arguments,
// 4 sweep band check failed.

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "robdiff/adversaries.hpp"
#include "robdiff/config.hpp"
#include "robdiff/harness.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace robdiff;

namespace {

constexpr int kOk = 0;
constexpr int kIoError = 2;
constexpr int kInvalid = 3;
constexpr int kSweepFailed = 4;

struct IoError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

fs::path output_dir(const std::string& flag) {
  fs::path dir = flag;
  if (dir.empty()) {
    const char* env = std::getenv("ROBDIFF_OUT");
    dir = env && *env ? env : "out";
  }
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec || !fs::is_directory(dir)) throw IoError("cannot create output directory " + dir.string());
  return dir;
}

std::ofstream open_out(const fs::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write " + path.string());
  return out;
}

json read_config(const std::string& path) {
  try {
    return load_json_file(path);
  } catch (const std::ios_base::failure& e) {
    throw IoError(e.what());
  }
}

void write_report(const ErrorReport& report, const Summary& summary, const fs::path& dir,
                  bool svg) {
  {
    auto out = open_out(dir / "trace.csv");
    write_trace_csv(report, out);
  }
  {
    auto out = open_out(dir / "summary.csv");
    write_summary_csv(summary, report, out);
  }
  if (svg) {
    auto out = open_out(dir / "plot.svg");
    write_svg(report, out);
  }
}

void print_summary(const Summary& s) {
  std::cout << std::left << std::setw(16) << "engine" << std::setw(14) << "kind"
            << "max error (t >= " << format_number(s.t_start) << ")";
  for (const auto& w : s.windows) std::cout << "  " << w.label;
  std::cout << '\n';
  for (const auto& row : s.rows) {
    std::cout << std::left << std::setw(16) << row.name << std::setw(14) << row.kind
              << std::fixed << std::setprecision(4) << row.max_error;
    for (double m : row.window_max) std::cout << "  " << m;
    std::cout << '\n' << std::defaultfloat;
  }
}

struct RunOptions {
  std::string config;
  std::string out;
  std::optional<std::uint64_t> seed;
  bool svg = false;
};

Scenario load_scenario(const RunOptions& opt) {
  json cfg = read_config(opt.config);
  if (opt.seed && cfg.is_object()) {
    if (!cfg.contains("run") || !cfg["run"].is_object()) cfg["run"] = json::object();
    cfg["run"]["seed"] = *opt.seed;
  }
  return parse_scenario(cfg, fs::path(opt.config).parent_path());
}

int cmd_simulate(const RunOptions& opt) {
  const auto sc = load_scenario(opt);
  const auto dir = output_dir(opt.out);
  const auto report = run_scenario(sc);
  const auto summary = summarize(report, arc_windows(sc.noise));
  write_report(report, summary, dir, opt.svg);
  print_summary(summary);
  return kOk;
}

int cmd_fig4(const RunOptions& opt) {
  Scenario sc;
  if (opt.config.empty()) {
    sc = reference_scenario(opt.seed.value_or(kReferenceSeed));
    json id = {{"reference", true}, {"seed", sc.seed}};
    sc.config_hash = config_hash(id);
  } else {
    sc = load_scenario(opt);
  }
  const auto dir = output_dir(opt.out);
  const auto report = run_scenario(sc);
  const auto summary = summarize(report, arc_windows(sc.noise));
  write_report(report, summary, dir, opt.svg);
  print_summary(summary);
  return kOk;
}

int cmd_sweep(const RunOptions& opt) {
  const auto spec = parse_sweep(read_config(opt.config));
  const auto dir = output_dir(opt.out);
  const auto cells = worst_case_sweep(spec);
  {
    auto out = open_out(dir / "sweep.csv");
    write_sweep_csv(cells, out);
  }
  write_sweep_csv(cells, std::cout);
  for (const auto& c : cells) {
    if (!c.pass) return kSweepFailed;
  }
  return kOk;
}

struct AdversaryOptions {
  std::string kind;
  double L = 1.0;
  double N = 1.0;
  double dt = 0.01;
  double tau = 0.0;
  std::optional<double> horizon;
  std::size_t r = 1;
  std::size_t n = 20;
  std::string out;
};

json certificate(const AdversaryScenario& sc, const json& params) {
  return {{"construction", sc.name},
          {"L", sc.L},
          {"N", sc.N},
          {"dt", sc.trace.dt},
          {"certified_time", sc.certified_time},
          {"certified_step", sc.certified_step},
          {"certified_error", sc.certified_error},
          {"nontrivial", sc.nontrivial},
          {"config_hash", config_hash(params)}};
}

int cmd_adversary(const AdversaryOptions& o) {
  const json params = {{"kind", o.kind}, {"L", o.L},     {"N", o.N}, {"dt", o.dt},
                       {"tau", o.tau},   {"r", o.r},     {"n", o.n},
                       {"horizon", o.horizon ? json(*o.horizon) : json(nullptr)}};
  const double kappa = std::sqrt(o.N / o.L);
  std::vector<AdversaryScenario> out;
  if (o.kind == "exact-trap") {
    out.push_back(exact_trap(o.L, o.N, o.tau, o.dt, o.horizon.value_or(o.tau + 6.0 * kappa)));
  } else if (o.kind == "causal") {
    auto pair = causal_pair(o.L, o.N, o.tau, o.dt, o.horizon.value_or(o.tau + 6.0 * kappa));
    out.push_back(pair.first);
    out.push_back(pair.second);
  } else if (o.kind == "sampled-zero") {
    auto pair = sampled_zero_family(o.L, o.dt, o.n);
    out.push_back(pair.first);
    out.push_back(pair.second);
  } else if (o.kind == "quasi-exact") {
    out.push_back(quasi_exact_trap(o.L, o.N, o.dt, o.r));
  } else {
    throw std::invalid_argument("unknown adversary kind '" + o.kind + "'");
  }

  const auto dir = output_dir(o.out);
  json certs = json::array();
  for (std::size_t i = 0; i < out.size(); ++i) {
    std::string why;
    if (!verify_membership(out[i].trace, o.L, out[i].N, &why)) {
      throw std::logic_error(out[i].name + " failed its membership check: " + why);
    }
    const std::string stem = o.kind + (out.size() > 1 ? (i == 0 ? "_plus" : "_minus") : "");
    auto csv = open_out(dir / (stem + ".csv"));
    write_signal_csv(out[i].trace, csv, "construction=" + out[i].name);
    auto c = certificate(out[i], params);
    c["file"] = stem + ".csv";
    certs.push_back(c);
  }
  auto js = open_out(dir / (o.kind + ".certificate.json"));
  js << certs.dump(2) << '\n';
  std::cout << certs.dump(2) << '\n';
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Robust numerical differentiation: simulations, sweeps and adversaries"};
  app.require_subcommand(1);

  RunOptions sim_opt, fig_opt, sweep_opt;
  AdversaryOptions adv;

  auto* simulate = app.add_subcommand("simulate", "Run a scenario config through its engines");
  simulate->add_option("-c,--config", sim_opt.config, "Scenario config (JSON)")->required();
  simulate->add_option("-o,--out", sim_opt.out, "Output directory (default $ROBDIFF_OUT or ./out)");
  simulate->add_option("--seed", sim_opt.seed, "Override run.seed");
  simulate->add_flag("--svg", sim_opt.svg, "Also write plot.svg");

  auto* sweep = app.add_subcommand("sweep", "Worst-case error sweep over an (L, N, dt) grid");
  sweep->add_option("-c,--config", sweep_opt.config, "Sweep config (JSON)")->required();
  sweep->add_option("-o,--out", sweep_opt.out, "Output directory");

  auto* adversary = app.add_subcommand("adversary", "Export a worst-case construction");
  adversary->add_option("kind", adv.kind, "exact-trap | causal | sampled-zero | quasi-exact")
      ->required();
  adversary->add_option("--L", adv.L, "Bound on |f''|");
  adversary->add_option("--N", adv.N, "Noise bound");
  adversary->add_option("--dt", adv.dt, "Sampling period");
  adversary->add_option("--tau", adv.tau, "Start of the construction");
  adversary->add_option("--horizon", adv.horizon, "Trace length in seconds");
  adversary->add_option("--r", adv.r, "Minimum certified step (quasi-exact)");
  adversary->add_option("--n", adv.n, "Number of samples (sampled-zero)");
  adversary->add_option("-o,--out", adv.out, "Output directory");

  auto* fig4 = app.add_subcommand("fig4", "Reference comparison: adaptive vs two RED tunings");
  fig4->add_option("-c,--config", fig_opt.config, "Scenario config (default: built-in)");
  fig4->add_option("-o,--out", fig_opt.out, "Output directory");
  fig4->add_option("--seed", fig_opt.seed, "White-noise seed");
  fig4->add_flag("--svg", fig_opt.svg, "Also write plot.svg");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kInvalid;
  }

  try {
    if (*simulate) return cmd_simulate(sim_opt);
    if (*sweep) return cmd_sweep(sweep_opt);
    if (*adversary) return cmd_adversary(adv);
    if (*fig4) return cmd_fig4(fig_opt);
  } catch (const IoError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kIoError;
  } catch (const ConfigError& e) {
    std::cerr << e.to_json().dump(2) << '\n';
    return kInvalid;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kInvalid;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return kOk;
}
