#include "robdiff/harness.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <exception>
#include <istream>
#include <map>
#include <mutex>
#include <ostream>
#include <random>
#include <set>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "robdiff/adversaries.hpp"

namespace robdiff {

namespace {

constexpr double kBoundaryTol = 1e-9;

std::size_t first_step_at(double t, double dt) {
  if (t <= 0.0) return 0;
  return static_cast<std::size_t>(std::ceil(t / dt - kBoundaryTol));
}

nlohmann::json engine_defaults(const SignalClassParams& p) {
  return {{"L", p.L}, {"N", p.N}, {"dt", p.dt}};
}

}  // namespace

std::size_t Scenario::sample_count() const {
  return static_cast<std::size_t>(std::floor(duration / params.dt + kBoundaryTol)) + 1;
}

void Scenario::validate() const {
  params.validate();
  if (!(duration > 0.0) || !std::isfinite(duration)) {
    throw std::invalid_argument("scenario duration must be > 0");
  }
  if (!(t_start >= 0.0)) throw std::invalid_argument("t_start must be >= 0");
  if (engines.empty()) throw std::invalid_argument("scenario needs at least one engine");
  std::set<std::string> names;
  for (const auto& e : engines) {
    if (e.name.empty()) throw std::invalid_argument("engine name must not be empty");
    if (!names.insert(e.name).second) {
      throw std::invalid_argument("duplicate engine name '" + e.name + "'");
    }
  }
  if (const auto* tr = std::get_if<SampledTrace>(&signal)) {
    tr->validate();
    if (std::abs(tr->dt - params.dt) > 1e-12 * params.dt) {
      throw std::invalid_argument("trace dt differs from run dt");
    }
  }
}

SampledTrace build_trace(const Scenario& sc) {
  sc.validate();
  if (const auto* tr = std::get_if<SampledTrace>(&sc.signal)) return *tr;

  const std::size_t n = sc.sample_count();
  SampledTrace f;
  if (const auto* spec = std::get_if<TestSignalSpec>(&sc.signal)) {
    f = gen_test_signal(*spec, sc.params, n);
  } else {
    const auto& rnd = std::get<RandomSignal>(sc.signal);
    f = random_member_FL(sc.params.L, sc.params.R, rnd.seed.value_or(sc.seed), sc.params.dt, n,
                         rnd.mean_switch_interval);
  }
  std::vector<double> eta(n, 0.0);
  if (!sc.noise.segments.empty()) eta = gen_noise(sc.noise, sc.params, n);
  return compose(f, eta);
}

const EngineSeries& ErrorReport::engine(const std::string& name) const {
  for (const auto& e : engines) {
    if (e.name == name) return e;
  }
  throw std::out_of_range("no engine named '" + name + "' in report");
}

double ErrorReport::max_error_from(const EngineSeries& series, double t) const {
  const std::size_t k = first_step_at(t, trace.dt);
  return k < series.M.size() ? series.M[k] : 0.0;
}

std::vector<double> suffix_max(std::span<const double> e) {
  std::vector<double> m(e.size());
  double run = 0.0;
  for (std::size_t i = e.size(); i-- > 0;) {
    run = std::max(run, e[i]);
    m[i] = run;
  }
  return m;
}

EngineSeries run_engine(const Differentiator& prototype, const SampledTrace& trace,
                        const std::string& name) {
  auto engine = prototype.clone();
  engine->reset();
  EngineSeries s;
  s.name = name;
  s.kind = engine->kind();
  const std::size_t n = trace.size();
  const bool adaptive = s.kind == EngineKind::adaptive;
  s.y.resize(n);
  if (adaptive) {
    s.N_hat.resize(n);
    s.gamma.resize(n);
    s.T_hat.resize(n);
  }
  for (std::size_t k = 0; k < n; ++k) {
    s.y[k] = engine->step(trace.u[k]);
    if (adaptive) {
      const auto& d = *engine->diagnostics().adaptive;
      s.N_hat[k] = d.N_hat;
      s.gamma[k] = d.gamma;
      s.T_hat[k] = d.T_hat;
    }
  }
  if (trace.has_truth()) {
    s.e.resize(n);
    for (std::size_t k = 0; k < n; ++k) s.e[k] = std::abs(trace.fdot[k] - s.y[k]);
    s.M = suffix_max(s.e);
  }
  return s;
}

ErrorReport run_scenario(const Scenario& sc) {
  ErrorReport r;
  r.scenario = sc.name;
  r.trace = build_trace(sc);
  r.seed = sc.seed;
  r.config_hash = sc.config_hash;
  r.t_start = sc.t_start;
  const auto defaults = engine_defaults(sc.params);
  for (const auto& spec : sc.engines) {
    const auto engine = make_engine(spec.kind, spec.params, defaults);
    r.engines.push_back(run_engine(*engine, r.trace, spec.name));
  }
  return r;
}

std::vector<ErrorReport> run_scenarios(const std::vector<Scenario>& scenarios,
                                       std::size_t threads) {
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = std::min(threads, scenarios.size());
  std::vector<ErrorReport> out(scenarios.size());
  if (threads <= 1) {
    for (std::size_t i = 0; i < scenarios.size(); ++i) out[i] = run_scenario(scenarios[i]);
    return out;
  }

  std::atomic<std::size_t> next{0};
  std::vector<std::exception_ptr> errors(scenarios.size());
  std::vector<std::thread> pool;
  for (std::size_t w = 0; w < threads; ++w) {
    pool.emplace_back([&] {
      for (std::size_t i; (i = next.fetch_add(1)) < scenarios.size();) {
        try {
          out[i] = run_scenario(scenarios[i]);
        } catch (...) {
          errors[i] = std::current_exception();
        }
      }
    });
  }
  for (auto& t : pool) t.join();
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  return out;
}

// --------------------------------------------------------------------------

Summary summarize(const ErrorReport& report, const std::vector<ReportWindow>& windows) {
  Summary s;
  s.t_start = report.t_start;
  s.windows = windows;
  const double dt = report.trace.dt;
  for (const auto& eng : report.engines) {
    EngineSummary row;
    row.name = eng.name;
    row.kind = to_string(eng.kind);
    for (std::size_t k = first_step_at(report.t_start, dt); k < eng.e.size(); ++k) {
      if (eng.e[k] > row.max_error) {
        row.max_error = eng.e[k];
        row.t_of_max = report.trace.time(k);
      }
    }
    for (const auto& w : windows) {
      double m = 0.0;
      const std::size_t k1 = std::min(eng.e.size(), first_step_at(w.t1, dt));
      for (std::size_t k = first_step_at(w.t0, dt); k < k1; ++k) m = std::max(m, eng.e[k]);
      row.window_max.push_back(m);
    }
    s.rows.push_back(std::move(row));
  }
  return s;
}

std::vector<ReportWindow> arc_windows(const NoiseScheduleSpec& noise) {
  std::vector<ReportWindow> out;
  for (const auto& seg : noise.segments) {
    if (const auto* arc = std::get_if<ParabolaArcNoise>(&seg.kind)) {
      out.push_back({"arc(" + format_number(arc->factor) + ")@" + format_number(seg.start),
                     seg.start, seg.end()});
    }
  }
  return out;
}

std::string format_number(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

std::string trace_csv_header(const ErrorReport& report) {
  std::string h = "k,t,u,f,fdot";
  for (const auto& e : report.engines) {
    h += "," + e.name + ".y," + e.name + ".e";
    if (e.kind == EngineKind::adaptive) {
      h += "," + e.name + ".N_hat," + e.name + ".gamma," + e.name + ".T_hat";
    }
  }
  return h;
}

void write_trace_csv(const ErrorReport& report, std::ostream& out) {
  const auto& tr = report.trace;
  out << "# robdiff-trace v1 scenario=" << report.scenario << " seed=" << report.seed
      << " config_hash=" << report.config_hash << " dt=" << format_number(tr.dt) << '\n';
  out << trace_csv_header(report) << '\n';
  auto opt = [](const std::vector<double>& v, std::size_t k) {
    return k < v.size() ? format_number(v[k]) : std::string();
  };
  std::string line;
  for (std::size_t k = 0; k < tr.size(); ++k) {
    line.clear();
    line += std::to_string(k);
    line += ',' + format_number(tr.time(k));
    line += ',' + format_number(tr.u[k]);
    line += ',' + opt(tr.f, k);
    line += ',' + opt(tr.fdot, k);
    for (const auto& e : report.engines) {
      line += ',' + format_number(e.y[k]);
      line += ',' + opt(e.e, k);
      if (e.kind == EngineKind::adaptive) {
        line += ',' + format_number(e.N_hat[k]);
        line += ',' + format_number(e.gamma[k]);
        line += ',' + format_number(e.T_hat[k]);
      }
    }
    out << line << '\n';
  }
}

void write_summary_csv(const Summary& s, const ErrorReport& report, std::ostream& out) {
  out << "engine,kind,t_start,max_error,t_of_max";
  for (const auto& w : s.windows) out << ",max_error[" << w.label << "]";
  out << ",seed,config_hash\n";
  for (const auto& row : s.rows) {
    out << row.name << ',' << row.kind << ',' << format_number(s.t_start) << ','
        << format_number(row.max_error) << ',' << format_number(row.t_of_max);
    for (double m : row.window_max) out << ',' << format_number(m);
    out << ',' << report.seed << ',' << report.config_hash << '\n';
  }
}

void write_signal_csv(const SampledTrace& tr, std::ostream& out, const std::string& comment) {
  out << "# robdiff-signal v1";
  if (!comment.empty()) out << ' ' << comment;
  out << " dt=" << format_number(tr.dt) << '\n';
  out << "k,t,u,f,fdot,eta\n";
  auto opt = [](const std::vector<double>& v, std::size_t k) {
    return k < v.size() ? format_number(v[k]) : std::string();
  };
  for (std::size_t k = 0; k < tr.size(); ++k) {
    out << k << ',' << format_number(tr.time(k)) << ',' << format_number(tr.u[k]) << ','
        << opt(tr.f, k) << ',' << opt(tr.fdot, k) << ',' << opt(tr.eta, k) << '\n';
  }
}

namespace {

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> cells;
  std::string cur;
  std::istringstream ss(line);
  while (std::getline(ss, cur, ',')) cells.push_back(cur);
  if (!line.empty() && line.back() == ',') cells.emplace_back();
  return cells;
}

double parse_double(const std::string& s, std::size_t line_no) {
  double v = 0.0;
  const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec != std::errc() || res.ptr != s.data() + s.size()) {
    throw std::invalid_argument("line " + std::to_string(line_no) + ": bad number '" + s + "'");
  }
  return v;
}

}  // namespace

SampledTrace read_signal_csv(std::istream& in) {
  std::string line;
  std::size_t line_no = 0;
  std::map<std::string, std::size_t> col;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    const auto names = split_csv(line);
    for (std::size_t i = 0; i < names.size(); ++i) col[names[i]] = i;
    break;
  }
  for (const char* need : {"k", "t", "u"}) {
    if (!col.count(need)) throw std::invalid_argument(std::string("CSV lacks column '") + need + "'");
  }
  SampledTrace tr;
  std::vector<double> t;
  auto take = [&](const std::vector<std::string>& cells, const char* name,
                  std::vector<double>& dst, bool& present) {
    const auto it = col.find(name);
    if (it == col.end() || it->second >= cells.size() || cells[it->second].empty()) {
      present = false;
      return;
    }
    dst.push_back(parse_double(cells[it->second], line_no));
  };
  bool has_f = true, has_fdot = true, has_eta = true, dummy = true;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    const auto cells = split_csv(line);
    take(cells, "t", t, dummy);
    take(cells, "u", tr.u, dummy);
    if (!dummy) throw std::invalid_argument("line " + std::to_string(line_no) + ": missing t or u");
    if (has_f) take(cells, "f", tr.f, has_f);
    if (has_fdot) take(cells, "fdot", tr.fdot, has_fdot);
    if (has_eta) take(cells, "eta", tr.eta, has_eta);
  }
  if (!has_f) tr.f.clear();
  if (!has_fdot) tr.fdot.clear();
  if (!has_eta) tr.eta.clear();
  if (t.size() < 2) throw std::invalid_argument("CSV needs at least two samples");
  tr.dt = t[1] - t[0];
  tr.validate();
  return tr;
}

// --------------------------------------------------------------------------

namespace {

struct Panel {
  std::string title;
  std::vector<std::pair<std::string, const std::vector<double>*>> series;
};

}  // namespace

void write_svg(const ErrorReport& report, std::ostream& out) {
  const double width = 900, panel_h = 200, margin = 50, gap = 30;
  static const char* colors[] = {"#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd", "#8c564b"};

  std::vector<Panel> panels(3);
  panels[0].title = "error |fdot - y|";
  for (const auto& e : report.engines) {
    if (!e.e.empty()) panels[0].series.push_back({e.name, &e.e});
  }
  panels[1].title = "noise";
  if (report.trace.has_noise()) panels[1].series.push_back({"eta", &report.trace.eta});
  panels[2].title = "noise estimate";
  for (const auto& e : report.engines) {
    if (!e.N_hat.empty()) panels[2].series.push_back({e.name, &e.N_hat});
  }

  const std::size_t n = report.trace.size();
  const double height = margin * 2 + panels.size() * panel_h + (panels.size() - 1) * gap;
  const double plot_w = width - 2 * margin;
  const std::size_t stride = std::max<std::size_t>(1, n / 2000);
  const double t_end = n > 1 ? report.trace.time(n - 1) : 1.0;

  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\""
      << height << "\" font-family=\"sans-serif\" font-size=\"11\">\n";
  out << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  for (std::size_t p = 0; p < panels.size(); ++p) {
    const auto& panel = panels[p];
    const double top = margin + p * (panel_h + gap);
    double lo = 0.0, hi = 0.0;
    for (const auto& [_, v] : panel.series) {
      for (double x : *v) {
        lo = std::min(lo, x);
        hi = std::max(hi, x);
      }
    }
    if (hi <= lo) hi = lo + 1.0;
    out << "<rect x=\"" << margin << "\" y=\"" << top << "\" width=\"" << plot_w
        << "\" height=\"" << panel_h << "\" fill=\"none\" stroke=\"#888\"/>\n";
    out << "<text x=\"" << margin << "\" y=\"" << top - 6 << "\">" << panel.title << "  ["
        << format_number(lo) << ", " << format_number(hi) << "]</text>\n";
    for (std::size_t s = 0; s < panel.series.size(); ++s) {
      const auto& v = *panel.series[s].second;
      const char* color = colors[s % std::size(colors)];
      out << "<polyline fill=\"none\" stroke-width=\"1\" stroke=\"" << color << "\" points=\"";
      for (std::size_t k = 0; k < v.size(); k += stride) {
        // keep the bucket's extreme value so peaks survive decimation
        double y = v[k];
        for (std::size_t i = k; i < std::min(v.size(), k + stride); ++i) {
          if (std::abs(v[i]) > std::abs(y)) y = v[i];
        }
        const double px = margin + plot_w * report.trace.time(k) / t_end;
        const double py = top + panel_h * (1.0 - (y - lo) / (hi - lo));
        out << format_number(std::round(px * 10) / 10) << ','
            << format_number(std::round(py * 10) / 10) << ' ';
      }
      out << "\"/>\n";
      out << "<text x=\"" << width - margin - 120 << "\" y=\"" << top + 14 + 13 * s
          << "\" fill=\"" << color << "\">" << panel.series[s].first << "</text>\n";
    }
  }
  out << "</svg>\n";
}

std::string config_hash(const nlohmann::json& config) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : config.dump()) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

// --------------------------------------------------------------------------

NoiseScheduleSpec random_noise_schedule(double L, double N, double dt, double duration,
                                        std::uint64_t seed) {
  NoiseScheduleSpec s;
  if (N == 0.0) {
    s.segments.push_back({0.0, duration + dt, ConstantNoise{0.0}});
    return s;
  }
  std::mt19937_64 gen(seed);
  auto unit = [&] { return uniform_unit(gen()); };
  const double kappa = std::sqrt(N / L);
  double t = 0.0;
  while (t <= duration) {
    double len = std::max(2.0 * dt, kappa * (0.5 + 5.0 * unit()));
    if (t + len > duration) len = duration - t + dt;
    NoiseSegment seg;
    seg.start = t;
    seg.duration = len;
    const double pick = unit();
    const double sign = unit() < 0.5 ? -1.0 : 1.0;
    if (pick < 0.2) {
      seg.kind = ConstantNoise{unit() < 0.5 ? sign * N : N * (2.0 * unit() - 1.0)};
    } else if (pick < 0.5) {
      seg.kind = ParabolaArcNoise{unit() < 0.3 ? 1.0 : 2.0 * unit()};
    } else if (pick < 0.75) {
      seg.kind = StepNoise{-sign * N, sign * N, t + len * unit()};
    } else {
      seg.kind = UniformWhiteNoise{gen()};
    }
    s.segments.push_back(seg);
    t += len;
  }
  return s;
}

std::vector<NamedTrace> worst_case_corpus(double L, double N, double dt, std::size_t k_bar,
                                          std::size_t draws, std::uint64_t seed, double R) {
  std::vector<NamedTrace> out;
  const double kappa = std::sqrt(N / L);
  const double window = static_cast<double>(k_bar) * dt;

  for (auto& sc : {sampled_zero_family(L, dt, 40).first, sampled_zero_family(L, dt, 40).second}) {
    out.push_back({sc.name, sc.trace});
  }
  const auto r = static_cast<std::size_t>(std::ceil(2.0 * kappa / dt));
  out.push_back({"quasi-exact-trap", quasi_exact_trap(L, N, dt, std::max(r, k_bar)).trace});
  if (N > 0.0) {
    auto pair = causal_pair(L, N, 0.5 * kappa, dt, 4.5 * kappa + 2.0 * window);
    out.push_back({pair.first.name, pair.first.trace});
    out.push_back({pair.second.name, pair.second.trace});
    out.push_back({"exact-differentiator-trap",
                   exact_trap(L, N, 0.5 * kappa, dt, 4.0 * kappa + 2.0 * window).trace});
  }

  const double duration = std::max(50.0 * dt, 4.0 * window + 2.0 * kappa);
  const std::size_t n = static_cast<std::size_t>(std::floor(duration / dt)) + 1;
  SignalClassParams params{L, N, R, dt};
  std::mt19937_64 gen(seed);
  for (std::size_t i = 0; i < draws; ++i) {
    const std::uint64_t s_sig = gen();
    const std::uint64_t s_noise = gen();
    const double switch_mean = std::max(2.0 * dt, (kappa > 0 ? 4.0 * kappa : 20.0 * dt) *
                                                       (0.1 + uniform_unit(gen())));
    auto f = random_member_FL(L, R, s_sig, dt, n, switch_mean);
    auto eta = gen_noise(random_noise_schedule(L, N, dt, duration, s_noise), params, n);
    out.push_back({"random#" + std::to_string(i), compose(f, eta)});
  }
  return out;
}

double max_error_after(const Differentiator& prototype, const SampledTrace& trace,
                       std::size_t k_from) {
  auto engine = prototype.clone();
  engine->reset();
  double worst = 0.0;
  k_from = std::max<std::size_t>(k_from, 1);
  for (std::size_t k = 0; k < trace.size(); ++k) {
    const double y = engine->step(trace.u[k]);
    if (k >= k_from) worst = std::max(worst, std::abs(trace.fdot[k] - y));
  }
  return worst;
}

void SweepSpec::validate() const {
  if (L.empty() || N.empty() || dt.empty()) throw std::invalid_argument("sweep grid is empty");
  for (double v : L) {
    if (!(v > 0.0)) throw std::invalid_argument("sweep L values must be > 0");
  }
  for (double v : N) {
    if (!(v >= 0.0)) throw std::invalid_argument("sweep N values must be >= 0");
  }
  for (double v : dt) {
    if (!(v > 0.0)) throw std::invalid_argument("sweep dt values must be > 0");
  }
  if (N_bar && !(*N_bar >= 0.0)) throw std::invalid_argument("N_bar must be >= 0");
}

std::vector<SweepCell> worst_case_sweep(const SweepSpec& spec) {
  spec.validate();
  const double n_bar = spec.N_bar.value_or(*std::max_element(spec.N.begin(), spec.N.end()));

  std::vector<SweepCell> cells;
  std::vector<std::unique_ptr<Differentiator>> engines;
  for (double L : spec.L) {
    for (double N : spec.N) {
      for (double dt : spec.dt) {
        auto params = spec.engine;
        params["L"] = L;
        params["dt"] = dt;
        if (!params.contains("k_bar")) params["N_bar"] = n_bar;
        engines.push_back(make_engine("adaptive", params));
        SweepCell c;
        c.L = L;
        c.N = N;
        c.dt = dt;
        if (params.contains("k_bar") && params["k_bar"].is_number_integer()) {
          c.k_bar = params["k_bar"].get<std::size_t>();
        } else if (!params.contains("k_bar")) {
          c.k_bar = *tuned_params(L, dt, n_bar).k_bar;
        }
        const double base = 2.0 * std::sqrt(2.0 * N * L);
        c.lower = base - L * dt / 2.0;
        c.upper = base + L * dt / 2.0;
        c.tolerance = L * dt;
        c.lower_informative = N > 0.0 && dt <= 4.0 * (std::sqrt(2.0) - 1.0) * std::sqrt(N / L);
        cells.push_back(c);
      }
    }
  }

  std::size_t threads = spec.threads ? spec.threads : std::max(1u, std::thread::hardware_concurrency());
  std::atomic<std::size_t> next{0};
  std::vector<std::exception_ptr> errors(cells.size());
  auto work = [&] {
    for (std::size_t i; (i = next.fetch_add(1)) < cells.size();) {
      try {
        auto& c = cells[i];
        const std::size_t window = c.k_bar ? c.k_bar : 200;
        const auto corpus = worst_case_corpus(c.L, c.N, c.dt, window, spec.random_draws,
                                              spec.seed + i, spec.R);
        const auto k_from = static_cast<std::size_t>(
            std::ceil(2.0 * std::sqrt(c.N / c.L) / c.dt - kBoundaryTol));
        for (const auto& item : corpus) {
          const double m = max_error_after(*engines[i], item.trace, k_from);
          if (c.worst_source.empty() || m > c.empirical) {
            c.empirical = m;
            c.worst_source = item.source;
          }
        }
        c.pass = c.empirical <= c.upper + c.tolerance &&
                 (!c.lower_informative || c.empirical >= c.lower - c.tolerance);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  std::vector<std::thread> pool;
  for (std::size_t w = 0; w < std::min(threads, cells.size()); ++w) pool.emplace_back(work);
  for (auto& t : pool) t.join();
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  return cells;
}

void write_sweep_csv(const std::vector<SweepCell>& cells, std::ostream& out) {
  out << "L,N,dt,k_bar,empirical_max,worst_source,lower,upper,tolerance,lower_informative,pass\n";
  for (const auto& c : cells) {
    out << format_number(c.L) << ',' << format_number(c.N) << ',' << format_number(c.dt) << ','
        << c.k_bar << ',' << format_number(c.empirical) << ',' << c.worst_source << ','
        << format_number(c.lower) << ',' << format_number(c.upper) << ','
        << format_number(c.tolerance) << ',' << (c.lower_informative ? "yes" : "no") << ','
        << (c.pass ? "pass" : "FAIL") << '\n';
  }
}

// --------------------------------------------------------------------------

NoiseScheduleSpec reference_noise_schedule(double L, double N, std::uint64_t seed) {
  (void)L;
  NoiseScheduleSpec s;
  auto add = [&](double start, double end, auto kind) {
    s.segments.push_back({start, end - start, kind});
  };
  // Both arcs come after the slower RED has converged (about 10 s from
  // the initial slope error of 1 at lambda2 = 1.1).
  add(0.0, 12.0, ConstantNoise{N});
  add(12.0, 15.0, ParabolaArcNoise{1.1});
  add(15.0, 18.0, StepNoise{-N, N, 16.0});
  add(18.0, 21.0, ParabolaArcNoise{1.96});
  add(21.0, 24.0, StepNoise{-N, N, 22.0});
  add(24.0, 26.0, ConstantNoise{N});
  add(26.0, 35.01, UniformWhiteNoise{seed});
  return s;
}

Scenario reference_scenario(std::uint64_t seed) {
  Scenario sc;
  sc.name = "reference-comparison";
  sc.params = SignalClassParams{1.0, 0.08, 1.0, 0.01};
  sc.signal = TestSignalSpec{RampParabolaSignal{0.0}, true};
  sc.noise = reference_noise_schedule(sc.params.L, sc.params.N, seed);
  sc.engines = {
      {"adaptive", "adaptive", {{"k_bar", 200}, {"gamma_bar", 2.0}}},
      {"red_1.5_1.1", "red-implicit", {{"lambda1", 1.5}, {"lambda2", 1.1}}},
      {"red_2.8_1.96", "red-implicit", {{"lambda1", 2.8}, {"lambda2", 1.96}}},
  };
  sc.duration = 35.0;
  sc.seed = seed;
  sc.t_start = 10.0;
  return sc;
}

}  // namespace robdiff
