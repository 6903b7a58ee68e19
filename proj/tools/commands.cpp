#include "commands.hpp"

#include <omp.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <ctime>
#include <iomanip>

#include <CLI11.hpp>

#include "plab/ensemble.hpp"

#ifndef PLAB_VERSION
#define PLAB_VERSION "0.0.0"
#endif

namespace plab::app {

namespace fs = std::filesystem;

namespace {

std::string utc_timestamp() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

/// One run's output directory: data files are collected here and written by
/// the calling thread only, then listed in manifest.json.
class Run {
 public:
  Run(std::string command, const ExperimentConfig& config, const RunOptions& options)
      : command_(std::move(command)), config_(config), options_(options) {
    if (options.seeds) config_.seeds = *options.seeds;
    if (options.out_dir) config_.out_dir = *options.out_dir;
    if (config_.seeds.empty()) throw ConfigError("--seed: empty seed list");
    std::error_code ec;
    fs::create_directories(config_.out_dir, ec);
    if (ec) throw ConfigError("cannot create output directory " + config_.out_dir.string() + ": " + ec.message());
  }

  const ExperimentConfig& config() const { return config_; }
  bool plot() const { return options_.emit_plot_data; }

  void write(const std::string& name, const std::string& content) {
    io::write_text(config_.out_dir / name, content);
    files_.push_back(name);
  }
  void write(const std::string& name, const json& j) { write(name, j.dump(2) + "\n"); }

  void finish(int status, const json& summary) {
    json m;
    m["tool"] = "plab";
    m["version"] = PLAB_VERSION;
    m["command"] = command_;
    m["timestamp"] = utc_timestamp();
    m["workers"] = omp_get_max_threads();
    m["status"] = status == kOk ? "ok" : "property_violation";
    m["exit_code"] = status;
    m["config"] = config_.resolved();
    m["resolved_profiles"] = {{"g", io::to_json(config_.params.g)},
                              {"a", io::to_json(config_.params.a_defect)},
                              {"v0", io::to_json(config_.v0)}};
    m["files"] = files_;
    m["summary"] = summary;
    io::write_text(config_.out_dir / "manifest.json", m.dump(2) + "\n");
  }

 private:
  std::string command_;
  ExperimentConfig config_;
  RunOptions options_;
  std::vector<std::string> files_;
};

std::string seed_tag(std::uint64_t seed) { return "seed" + std::to_string(seed); }

std::string fixed(double x, int digits = 6) {
  std::ostringstream s;
  s << std::setprecision(digits) << x;
  return s.str();
}

template <class F>
auto for_seed(std::uint64_t seed, F&& f) {
  try {
    return f();
  } catch (const NumericalError& e) {
    throw e.annotated("seed " + std::to_string(seed));
  }
}

}  // namespace

// ---------------------------------------------------------------------------

int cmd_verify_phi(const ExperimentConfig& config, const RunOptions& options, std::ostream& out) {
  Run run("verify-phi", config, options);
  const ExperimentConfig& c = run.config();
  PhiConstants k{0.0, 0.0, 0.0};
  const bool need_suggested = !c.c1 || !c.c2 || !c.k;
  if (need_suggested) {
    try {
      k = suggested_constants(c.params.phi);
    } catch (const UnsupportedError& e) {
      throw ConfigError(std::string("/verify_phi: c1, c2 and k are required for a tabulated nonlinearity (") + e.what() + ")");
    }
  }
  if (c.c1) k.c1 = *c.c1;
  if (c.c2) k.c2 = *c.c2;
  if (c.k) k.k = *c.k;

  const ConditionReport growth = verify_growth(c.params.phi, k.c1, k.c2, c.growth);
  const ConditionReport mono = verify_monotonicity(c.params.phi, k.k, c.a_bound, c.pairs);
  json report;
  report["growth"] = io::to_json(growth);
  report["monotonicity"] = io::to_json(mono);
  run.write("verify_phi.json", report);

  out << "p = " << c.params.p << ", c1 = " << k.c1 << ", c2 = " << k.c2 << ", k = " << k.k << ", a = " << c.a_bound
      << "\n";
  out << std::left << std::setw(14) << "condition" << std::setw(10) << "samples" << std::setw(16) << "worst margin"
      << std::setw(12) << "violations" << "result\n";
  for (const ConditionReport* r : {&growth, &mono}) {
    out << std::left << std::setw(14) << to_string(r->condition) << std::setw(10) << r->samples << std::setw(16)
        << fixed(r->worst_margin) << std::setw(12) << r->violations.size() << (r->pass() ? "pass" : "FAIL") << "\n";
    if (!r->pass()) {
      const auto& w = r->violations.front();
      out << "  witness: u = " << w.u;
      if (r->condition == ConditionReport::Condition::monotonicity) out << ", v = " << w.v;
      out << ", margin = " << w.margin << " (" << w.bound << ")\n";
    }
  }
  const int status = growth.pass() && mono.pass() ? kOk : kViolation;
  run.finish(status, {{"growth_pass", growth.pass()}, {"monotonicity_pass", mono.pass()}});
  return status;
}

// ---------------------------------------------------------------------------

int cmd_simulate(const ExperimentConfig& config, const RunOptions& options, std::ostream& out) {
  Run run("simulate", config, options);
  const ExperimentConfig& c = run.config();
  struct Result {
    std::string trajectory, energy;
    json snapshots;
    double min_residual;
    std::vector<double> times, norms;
  };
  IntegratorOptions opts = c.integrator;
  opts.checkpoints = uniform_checkpoints(c.T, c.checkpoint_spacing);
  opts.record_steps = true;
  const auto results = parallel_map(c.seeds.size(), [&](std::size_t i) {
    const std::uint64_t seed = c.seeds[i];
    return for_seed(seed, [&] {
      const WienerPath omega = sample_wiener(seed, -default_backward_horizon(c.T), c.T, c.dt);
      const OUPath ou = ou_path(omega);
      const Trajectory traj = integrate(c.v0, OUView(ou), c.params, c.T, opts);
      const EnergyReport energy = energy_report(traj, c.params);
      Result r;
      r.trajectory = io::trajectory_csv(traj, c.params.p, c.tail_sites);
      r.energy = io::energy_csv(energy);
      if (c.snapshots) r.snapshots = io::trajectory_snapshots(traj);
      r.min_residual = energy.min_residual();
      r.times = traj.times;
      for (const auto& v : traj.states) r.norms.push_back(norm_l2(v));
      return r;
    });
  });

  bool ok = true;
  json summary = json::array();
  io::LongTable plot;
  for (std::size_t i = 0; i < c.seeds.size(); ++i) {
    const std::string tag = seed_tag(c.seeds[i]);
    const Result& r = results[i];
    run.write("trajectory_" + tag + ".csv", r.trajectory);
    run.write("energy_" + tag + ".csv", r.energy);
    if (c.snapshots) run.write("snapshots_" + tag + ".json", r.snapshots);
    const bool holds = r.min_residual >= -1e-6;
    ok = ok && holds;
    summary.push_back({{"seed", c.seeds[i]}, {"final_norm", r.norms.back()}, {"energy_min_residual", r.min_residual}});
    out << tag << ": ||v(T)|| = " << fixed(r.norms.back()) << ", energy residual min = " << fixed(r.min_residual)
        << (holds ? "" : "  VIOLATION") << "\n";
    for (std::size_t k = 0; k < r.times.size(); ++k) plot.add("norm_l2/" + tag, r.times[k], r.norms[k]);
  }
  if (run.plot()) run.write("plot_simulate.csv", plot.text());
  const int status = ok ? kOk : kViolation;
  run.finish(status, summary);
  return status;
}

// ---------------------------------------------------------------------------

int cmd_absorb(const ExperimentConfig& config, const RunOptions& options, std::ostream& out) {
  Run run("absorb", config, options);
  const ExperimentConfig& c = run.config();
  const ExperimentSetup setup = c.setup();
  const AbsorptionReport report = absorption_experiment(setup, c.ball_radius, c.pullback_times, c.seeds);
  run.write("absorption.csv", io::absorption_csv(report));
  run.write("absorption.json", io::to_json(report));

  bool ok = report.all_absorbed_at_last();
  for (const auto& s : report.seeds)
    out << seed_tag(s.seed) << ": R = " << fixed(s.radius) << ", T_B observed = " << fixed(s.observed_time)
        << ", T_B from bound = " << fixed(s.bound_time) << "\n";
  if (c.params.alpha == 0.0 && c.ball_radius > 0.0)
    out << "closed form (2/lambda) ln B = " << fixed(2.0 / c.params.lambda * std::log(c.ball_radius)) << "\n";
  out << "absorbed at t = " << c.pullback_times.back() << ": " << (ok ? "all seeds" : "NOT all seeds") << "\n";

  json summary = io::to_json(report);
  io::LongTable plot;
  for (const auto& row : report.rows) {
    plot.add("max_norm/" + seed_tag(row.seed), row.t, row.max_norm);
    plot.add("radius/" + seed_tag(row.seed), row.t, row.radius);
  }
  if (!c.gammas.empty()) {
    const RadiusTemperReport temper = temperedness_of_R(setup, c.seeds, c.gammas, c.temper_times);
    run.write("radius_temper.csv", io::radius_temper_csv(temper));
    run.write("radius_temper.json", io::to_json(temper));
    bool tempered = true;
    for (const auto& s : temper.summaries) {
      tempered = tempered && s.decreasing && s.below_threshold;
      out << seed_tag(s.seed) << ", gamma " << s.gamma << ": e^{-gamma t} R^2 drops " << fixed(s.decades, 4)
          << " decades\n";
    }
    for (const auto& row : temper.rows)
      plot.add("weighted_r2/" + seed_tag(row.seed) + "/gamma=" + io::format_number(row.gamma), row.t, row.weighted);
    summary["radius_tempered"] = tempered;
    ok = ok && tempered;
  }
  if (run.plot()) run.write("plot_absorb.csv", plot.text());
  const int status = ok ? kOk : kViolation;
  run.finish(status, summary);
  return status;
}

// ---------------------------------------------------------------------------

int cmd_pullback(const ExperimentConfig& config, const RunOptions& options, std::ostream& out) {
  Run run("pullback", config, options);
  const ExperimentConfig& c = run.config();
  const ExperimentSetup setup = c.setup();
  const auto set_a = ball_samples(c.params.half_width, c.inner_radius, c.samples);
  const auto set_b = ball_samples(c.params.half_width, c.outer_radius, c.samples);
  bool ok = true;
  json summary = json::array();
  io::LongTable plot;
  for (std::uint64_t seed : c.seeds) {
    const PullbackReport r = pullback_attraction(setup, set_a, set_b, c.pullback_times, seed);
    run.write("pullback_" + seed_tag(seed) + ".csv", io::pullback_csv(r));
    summary.push_back(io::to_json(r));
    ok = ok && r.eventually_decreasing;
    out << seed_tag(seed) << ": mutual distance " << fixed(r.rows.front().mutual) << " -> "
        << fixed(r.rows.back().mutual) << (r.eventually_decreasing ? "" : "  NOT decreasing") << "\n";
    for (const auto& row : r.rows) plot.add("mutual/" + seed_tag(seed), row.t, row.mutual);
  }
  run.write("pullback.json", summary);
  if (run.plot()) run.write("plot_pullback.csv", plot.text());
  const int status = ok ? kOk : kViolation;
  run.finish(status, summary);
  return status;
}

// ---------------------------------------------------------------------------

int cmd_tails(const ExperimentConfig& config, const RunOptions& options, std::ostream& out) {
  Run run("tails", config, options);
  const ExperimentConfig& c = run.config();
  const NullityReport r = nullity_experiment(c.setup(), c.epsilon, c.pullback_times, c.seeds, c.cutoff_width);
  run.write("tails.csv", io::nullity_csv(r));
  run.write("tails.json", io::to_json(r));
  bool ok = true;
  for (const auto& s : r.seeds) {
    ok = ok && s.stabilized;
    out << seed_tag(s.seed) << ": I0 = " << s.n_tilde << " from t = " << s.t_tilde
        << (s.stabilized ? "" : "  NOT stabilized") << "\n";
  }
  if (run.plot()) {
    io::LongTable plot;
    for (const auto& row : r.rows) {
      plot.add("min_i0/" + seed_tag(row.seed), row.t, row.min_i0);
      plot.add("cutoff_tail/" + seed_tag(row.seed), row.t, row.cutoff_tail);
    }
    run.write("plot_tails.csv", plot.text());
  }
  const int status = ok ? kOk : kViolation;
  run.finish(status, io::to_json(r));
  return status;
}

// ---------------------------------------------------------------------------

int cmd_ou_diag(const ExperimentConfig& config, const RunOptions& options, std::ostream& out) {
  Run run("ou-diag", config, options);
  const ExperimentConfig& c = run.config();
  struct Result {
    std::string path_csv, temper_csv;
    json manifest, temper;
    double variance;
    bool vanishing;
  };
  const auto results = parallel_map(c.seeds.size(), [&](std::size_t i) {
    const std::uint64_t seed = c.seeds[i];
    const WienerPath omega = sample_wiener(seed, -c.ou_span, c.ou_span, c.dt);
    const OUPath ou = ou_path(omega);
    const TemperednessReport diag = temperedness_diag(ou, c.threshold);
    // Sample variance on [0, span]; the backward half serves as warm-up.
    double sum = 0.0, sum2 = 0.0;
    std::size_t count = 0;
    for (std::int64_t k = 0; k <= ou.k_max(); ++k) {
      const double z = ou.z_node(k);
      sum += z;
      sum2 += z * z;
      ++count;
    }
    const double mean = sum / static_cast<double>(count);
    Result r;
    r.variance = sum2 / static_cast<double>(count) - mean * mean;
    r.vanishing = diag.vanishing;
    r.path_csv = io::path_csv(omega, ou);
    r.manifest = io::path_manifest(omega);
    r.temper_csv = io::temperedness_csv(diag);
    r.temper = io::to_json(diag);
    return r;
  });
  bool ok = true;
  json summary = json::array();
  io::LongTable plot;
  for (std::size_t i = 0; i < c.seeds.size(); ++i) {
    const std::string tag = seed_tag(c.seeds[i]);
    const Result& r = results[i];
    run.write("path_" + tag + ".csv", r.path_csv);
    run.write("path_" + tag + ".json", r.manifest);
    run.write("temperedness_" + tag + ".csv", r.temper_csv);
    ok = ok && r.vanishing;
    summary.push_back({{"seed", c.seeds[i]}, {"variance", r.variance}, {"vanishing", r.vanishing}});
    out << tag << ": var(z) = " << fixed(r.variance) << " (stationary 0.5), temperedness "
        << (r.vanishing ? "ok" : "NOT vanishing") << "\n";
    const auto& times = r.temper["times"];
    for (std::size_t k = 0; k < times.size(); ++k) {
      plot.add("z_over_t/" + tag, times[k].get<double>(), r.temper["z_over_t"][k].get<double>());
      plot.add("running_mean/" + tag, times[k].get<double>(), r.temper["running_mean"][k].get<double>());
    }
  }
  if (run.plot()) run.write("plot_ou_diag.csv", plot.text());
  const int status = ok ? kOk : kViolation;
  run.finish(status, summary);
  return status;
}

// ---------------------------------------------------------------------------

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"plab: numerical lab for a stochastic porous-media lattice equation"};
  app.require_subcommand(1);
  app.set_version_flag("--version", PLAB_VERSION);

  std::string config_path;
  std::vector<std::uint64_t> seeds;
  std::string out_dir;
  RunOptions run;

  using Handler = int (*)(const ExperimentConfig&, const RunOptions&, std::ostream&);
  const std::vector<std::tuple<std::string, std::string, Handler>> commands = {
      {"verify-phi", "Check the growth and monotonicity conditions of the nonlinearity", cmd_verify_phi},
      {"simulate", "Integrate forward from v0 and write trajectory and energy files", cmd_simulate},
      {"absorb", "Pullback absorption into the random ball of radius R", cmd_absorb},
      {"pullback", "Hausdorff distance between pullback images of two balls", cmd_pullback},
      {"tails", "Tail-energy nullity over the pullback times", cmd_tails},
      {"ou-diag", "Export OU paths and temperedness diagnostics", cmd_ou_diag},
  };
  Handler chosen = nullptr;
  for (const auto& [name, help, handler] : commands) {
    CLI::App* sub = app.add_subcommand(name, help);
    sub->add_option("--config", config_path, "JSON config file")->check(CLI::ExistingFile);
    sub->add_option("--seed", seeds, "Seed list, overrides noise.seeds")->delimiter(',');
    sub->add_option("--out", out_dir, "Output directory, overrides output.dir");
    sub->add_option("--workers", run.workers, "OpenMP threads (0 keeps the default)")->check(CLI::NonNegativeNumber);
    sub->add_flag("--emit-plot-data", run.emit_plot_data, "Also write long-format plot CSV");
    sub->callback([&chosen, h = handler] { chosen = h; });
  }

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kConfigError;
  }

  try {
    if (!seeds.empty()) run.seeds = seeds;
    if (!out_dir.empty()) run.out_dir = out_dir;
    if (run.workers > 0) omp_set_num_threads(run.workers);
    const ExperimentConfig config = config_path.empty() ? parse_config("{}") : load_config(config_path);
    return chosen(config, run, out);
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << "\n";
    return kConfigError;
  } catch (const DomainError& e) {
    err << "invalid input: " << e.what() << "\n";
    return kConfigError;
  } catch (const UnsupportedError& e) {
    err << "unsupported: " << e.what() << "\n";
    return kConfigError;
  } catch (const NumericalError& e) {
    err << "numerical failure: " << e.what() << "\n";
    return kNumericalFailure;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return kConfigError;
  }
}

}  // namespace plab::app
