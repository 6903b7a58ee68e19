// Acceptance suite: one PASS/FAIL line per criterion. Exit status 1 if any fails.

#include <omp.h>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "commands.hpp"
#include "plab/attractor.hpp"
#include "plab/dynamics.hpp"
#include "plab/energy.hpp"
#include "plab/ensemble.hpp"
#include "plab/errors.hpp"
#include "plab/io.hpp"

using namespace plab;
namespace fs = std::filesystem;

namespace {

struct Verdict {
  bool pass = false;
  std::string detail;
};

std::string num(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3g", x);
  return buf;
}

LatticeVector gaussian_vector(int n, std::mt19937_64& rng, double sd = 1.0) {
  std::normal_distribution<double> d(0.0, sd);
  LatticeVector v(n);
  for (double& x : v.values()) x = d(rng);
  return v;
}

ModelParams bump_model(double alpha, int n) {
  ModelParams m = ModelParams::make(1.0, 2.0, alpha, n);
  for (int i = -n; i <= n; ++i) m.g[i] = std::exp(-0.125 * i * i);
  return m;
}

std::vector<std::uint64_t> seed_range(std::uint64_t first, std::size_t count) {
  std::vector<std::uint64_t> s;
  for (std::size_t k = 0; k < count; ++k) s.push_back(first + k);
  return s;
}

// 1 -------------------------------------------------------------------------
Verdict operator_identities() {
  std::mt19937_64 rng(101);
  double worst_energy = 0.0, worst_adjoint = 0.0, worst_ratio = 0.0;
  for (int n : {4, 16, 64}) {
    for (int k = 0; k < 1000; ++k) {
      const LatticeVector u = gaussian_vector(n, rng);
      const LatticeVector w = gaussian_vector(n, rng);
      const double au = inner_product(apply_A(u), u);
      const double bu = norm_l2_squared(apply_B_extended(u));
      worst_energy = std::max(worst_energy, std::abs(au - bu) / bu);
      const double l = inner_product(apply_B(u), w);
      const double r = inner_product(u, apply_Bstar(w));
      worst_adjoint = std::max(worst_adjoint, std::abs(l - r) / (norm_l2(apply_B(u)) * norm_l2(w)));
      worst_ratio = std::max(worst_ratio, au / norm_l2_squared(u));
    }
  }
  return {worst_energy <= 1e-12 && worst_adjoint <= 1e-12 && worst_ratio <= 4.0,
          "max rel defect (Au,u)=|Bu|^2: " + num(worst_energy) + ", adjoint: " + num(worst_adjoint) +
              ", max (Au,u)/|u|^2 = " + num(worst_ratio)};
}

// 2 -------------------------------------------------------------------------
Verdict phi_conditions() {
  bool ok = true;
  std::size_t violations = 0;
  for (double p : {1.2, 1.5, 2.0, 3.0, 5.0}) {
    const PhiSpec phi = PhiSpec::power_law(p);
    const PhiConstants c = suggested_constants(phi);
    const auto g = verify_growth(phi, c.c1, c.c2);
    const auto m = verify_monotonicity(phi, c.k, 0.0);
    violations += g.violations.size() + m.violations.size();
    ok = ok && g.pass() && m.pass();
  }
  const PhiSpec two = PhiSpec::power_law(2.0);
  const PhiConstants c = suggested_constants(two);
  const bool c2_caught = !verify_growth(two, c.c1, 2.0).pass();
  const bool k_caught = !verify_monotonicity(two, 1.0, 0.0).pass();
  return {ok && c2_caught && k_caught, std::to_string(violations) + " violations for suggested constants; c2=2 " +
                                           (c2_caught ? "caught" : "MISSED") + ", k=1 " + (k_caught ? "caught" : "MISSED")};
}

// 3 -------------------------------------------------------------------------
Verdict ou_fidelity() {
  const double T = 1e4;
  const auto seeds = seed_range(1, 20);
  struct Row {
    double var, z_over_t, mean;
  };
  const auto rows = parallel_map(seeds.size(), [&](std::size_t i) {
    const WienerPath w = sample_wiener(seeds[i], -default_backward_horizon(1.0), T, 0.01);
    const OUPath ou = ou_path(w);
    double s = 0.0, s2 = 0.0;
    std::size_t n = 0;
    for (std::int64_t k = 0; k <= ou.k_max(); ++k) {
      s += ou.z_node(k);
      s2 += ou.z_node(k) * ou.z_node(k);
      ++n;
    }
    const double mean = s / static_cast<double>(n);
    return Row{s2 / static_cast<double>(n) - mean * mean, std::abs(ou.z(T)) / T, std::abs(ou.integral(0.0, T)) / T};
  });
  double worst_var = 0.0, worst_z = 0.0, worst_mean = 0.0;
  for (const Row& r : rows) {
    worst_var = std::max(worst_var, std::abs(r.var - 0.5) / 0.5);
    worst_z = std::max(worst_z, r.z_over_t);
    worst_mean = std::max(worst_mean, r.mean);
  }
  return {worst_var <= 0.05 && worst_z < 0.05 && worst_mean < 0.05,
          "20 seeds, worst |var/0.5 - 1| = " + num(worst_var) + ", max |z(T)|/T = " + num(worst_z) +
              ", max |(1/T) int z| = " + num(worst_mean)};
}

// 4 -------------------------------------------------------------------------
Verdict cocycle_property() {
  const ModelParams m = bump_model(0.5, 32);
  IntegratorOptions opts;
  opts.tol = 1e-9;
  const auto seeds = seed_range(11, 10);
  const auto defects = parallel_map(seeds.size(), [&](std::size_t i) {
    std::mt19937_64 rng(seeds[i]);
    const LatticeVector v0 = gaussian_vector(32, rng);
    const NoiseRealization nr = realize_noise(seeds[i], 0.01, 60.0, 2.0);
    const OUView view(nr.ou);
    const LatticeVector whole = cocycle(1.0, view, v0, m, opts).v;
    const LatticeVector first = cocycle(0.5, view, v0, m, opts).v;
    const LatticeVector composed = cocycle(0.5, view.shifted(0.5), first, m, opts).v;
    return norm_l2(whole - composed) / norm_l2(whole);
  });
  const double worst = *std::max_element(defects.begin(), defects.end());
  return {worst <= 1e-5, "10 seeds, N=32, max relative defect " + num(worst)};
}

// 5 -------------------------------------------------------------------------
Verdict deterministic_decay() {
  double worst_excess = -INFINITY;
  std::mt19937_64 rng(55);
  for (double p : {1.5, 2.0, 3.0}) {
    const ModelParams m = ModelParams::make(1.0, p, 0.0, 32);
    const NoiseRealization nr = realize_noise(5, 0.01, 60.0, 5.0);
    const LatticeVector v0 = gaussian_vector(32, rng, 2.0);
    IntegratorOptions opts;
    opts.checkpoints = uniform_checkpoints(5.0, 0.05);
    const Trajectory t = integrate(v0, OUView(nr.ou), m, 5.0, opts);
    for (std::size_t k = 0; k < t.times.size(); ++k)
      worst_excess = std::max(worst_excess, norm_l2_squared(t.states[k]) -
                                                std::exp(-m.lambda * t.times[k]) * norm_l2_squared(v0));
  }
  // Single site, p = 2: v' = -v - 3 v|v|; classical RK4 with h = 1e-6.
  const ModelParams one = ModelParams::make(1.0, 2.0, 0.0, 0);
  const NoiseRealization nr = realize_noise(1, 0.01, 60.0, 2.0);
  IntegratorOptions fine;
  fine.tol = 1e-12;
  const double got = cocycle(1.0, OUView(nr.ou), LatticeVector(0, 1.0), one, fine).v[0];
  auto f = [](double v) { return -v - 3.0 * v * std::abs(v); };
  double y = 1.0;
  const double h = 1e-6;
  for (int n = 0; n < 1000000; ++n) {
    const double k1 = f(y), k2 = f(y + 0.5 * h * k1), k3 = f(y + 0.5 * h * k2), k4 = f(y + h * k3);
    y += h / 6.0 * (k1 + 2 * k2 + 2 * k3 + k4);
  }
  const double gap = std::abs(got - y);
  const double closed = std::abs(got - 1.0 / (4.0 * std::exp(1.0) - 3.0));
  return {worst_excess <= 1e-9 && gap <= 1e-8,
          "max(|v|^2 - e^{-lambda t}|v0|^2) = " + num(worst_excess) + ", single site vs RK4 " + num(gap) +
              " (vs closed form " + num(closed) + ")"};
}

// 6 -------------------------------------------------------------------------
Verdict energy_inequality() {
  struct Run {
    double residual;
    double later;  // smallest residual after t = 0
  };
  const auto results = parallel_map(100, [&](std::size_t run) {
    std::mt19937_64 rng(6000 + run);
    std::uniform_real_distribution<double> uni(0.0, 1.0);
    std::normal_distribution<double> gauss(0.0, 1.0);
    const double p = 1.2 + 2.8 * uni(rng);
    const int n = 4 + static_cast<int>(28 * uni(rng));
    ModelParams m = ModelParams::make(0.5 + 1.5 * uni(rng), p, uni(rng), n);
    const double decay = 0.1 + uni(rng);
    for (int i = -n; i <= n; ++i) {
      m.g[i] = 2.0 * gauss(rng) * std::exp(-decay * std::abs(i));
      m.a_defect[i] = uni(rng) < 0.5 ? 0.0 : 0.2 * uni(rng);
    }
    const LatticeVector v0 = gaussian_vector(n, rng, 3.0 * uni(rng));
    const NoiseRealization nr = realize_noise(7000 + run, 0.01, 60.0, 5.0);
    IntegratorOptions opts;
    opts.checkpoints = uniform_checkpoints(5.0, 0.01);
    opts.record_steps = true;
    const Trajectory traj = integrate(v0, OUView(nr.ou), m, 5.0, opts);
    const EnergyReport e = energy_report(traj, m);
    return Run{e.min_residual(), *std::min_element(e.residual.begin() + 1, e.residual.end())};
  });
  double worst = INFINITY, later = INFINITY;
  for (const Run& r : results) {
    worst = std::min(worst, r.residual);
    later = std::min(later, r.later);
  }
  return {worst >= -1e-6, "100 runs, min residual " + num(worst) + " (min over t > 0: " + num(later) + ")"};
}

// 7 -------------------------------------------------------------------------
Verdict absorption() {
  ExperimentSetup setup;
  setup.params = bump_model(0.5, 64);
  const std::vector<double> times{5.0, 10.0, 20.0, 30.0};
  const AbsorptionReport r = absorption_experiment(setup, 10.0, times, seed_range(1, 20));
  std::size_t absorbed = 0;
  double latest = 0.0;
  for (const auto& s : r.seeds) {
    if (std::isfinite(s.observed_time)) {
      ++absorbed;
      latest = std::max(latest, s.observed_time);
    }
  }
  ExperimentSetup det = setup;
  det.params.alpha = 0.0;
  det.params.g = SiteSequence(64);
  std::vector<double> det_times;
  for (int k = 1; k <= 14; ++k) det_times.push_back(0.5 * k);
  const AbsorptionReport d = absorption_experiment(det, 10.0, det_times, {1});
  const double closed = 2.0 * std::log(10.0);
  const double bound_gap = std::abs(d.seeds[0].bound_time - closed) / closed;
  const bool det_ok = bound_gap <= 0.1 && d.seeds[0].observed_time <= 1.1 * closed;
  return {r.all_absorbed_at_last() && det_ok,
          std::to_string(absorbed) + "/20 seeds absorbed at t=30 (latest entry " + num(latest) +
              "); alpha=0: T_B from bound " + num(d.seeds[0].bound_time) + ", observed " +
              num(d.seeds[0].observed_time) + ", closed form " + num(closed)};
}

// 8 -------------------------------------------------------------------------
Verdict radius_quadrature() {
  double worst_horizon = 0.0, worst_closed = 0.0;
  bool trivial = true;
  for (std::uint64_t seed : seed_range(1, 10)) {
    const NoiseRealization nr = realize_noise(seed, 0.01, 160.0, 1.0);
    const OUView view(nr.ou);
    const ModelParams m = bump_model(0.5, 64);
    worst_horizon = std::max(worst_horizon, std::abs(absorbing_radius(view, m, 100.0).r_squared -
                                                     absorbing_radius(view, m, 50.0).r_squared));
    trivial = trivial && absorbing_radius(view, ModelParams::make(1.0, 2.0, 0.5, 64), 50.0).r_squared == 1.0;
    ModelParams flat = bump_model(0.0, 64);
    flat.a_defect[3] = 0.25;
    const double closed = 1.0 + flat.forcing_constant() / flat.lambda;
    worst_closed = std::max(worst_closed, std::abs(absorbing_radius(view, flat, 100.0).r_squared - closed));
  }
  return {worst_horizon < 1e-8 && trivial && worst_closed <= 1e-10,
          "10 seeds, |R^2(100) - R^2(50)| <= " + num(worst_horizon) + ", g=a=0 gives 1: " + (trivial ? "yes" : "NO") +
              ", alpha=0 vs closed form " + num(worst_closed)};
}

// 9 -------------------------------------------------------------------------
Verdict radius_temperedness() {
  ExperimentSetup setup;
  setup.params = bump_model(0.5, 64);
  const RadiusTemperReport r =
      temperedness_of_R(setup, seed_range(1, 10), {0.1}, {1.0, 2.0, 5.0, 10.0, 20.0, 50.0, 100.0});
  double least = INFINITY;
  bool decreasing = true;
  for (const auto& s : r.summaries) {
    least = std::min(least, s.decades);
    decreasing = decreasing && s.decreasing;
  }
  return {least >= 2.0 && decreasing, "10 seeds, gamma=0.1, smallest drop " + num(least) + " decades from t=1 to 100"};
}

// 10 ------------------------------------------------------------------------
Verdict tail_nullity() {
  ExperimentSetup setup;
  setup.params = ModelParams::make(1.0, 2.0, 0.5, 64);
  for (int i = -5; i <= 5; ++i) setup.params.g[i] = 1.0;
  const NullityReport r = nullity_experiment(setup, 1e-3, {5.0, 10.0, 20.0, 40.0}, seed_range(1, 5));
  bool ok = true;
  std::string seq;
  for (const auto& s : r.seeds) ok = ok && s.stabilized;
  for (const auto& row : r.rows)
    if (row.seed == 1) seq += (seq.empty() ? "" : ",") + std::to_string(row.min_i0);
  int worst = 0;
  for (const auto& s : r.seeds) worst = std::max(worst, s.n_tilde);
  return {ok, "5 seeds, eps^2=1e-6, I0 over t={5,10,20,40} for seed 1: " + seq + "; largest final I0 " +
                  std::to_string(worst)};
}

// 11 ------------------------------------------------------------------------
Verdict pullback_attraction_check() {
  ExperimentSetup setup;
  setup.params = bump_model(0.5, 64);
  const auto a = ball_samples(64, 1.0);
  const auto b = ball_samples(64, 10.0);
  double worst = 0.0;
  bool decreasing = true;
  for (std::uint64_t seed : seed_range(1, 5)) {
    const PullbackReport r = pullback_attraction(setup, a, b, {0.0, 1.0, 2.0, 5.0, 10.0, 15.0, 20.0}, seed);
    worst = std::max(worst, r.rows.back().mutual);
    decreasing = decreasing && r.eventually_decreasing;
  }
  return {worst < 1e-4, "5 seeds, max mutual distance at t=20: " + num(worst) +
                            (decreasing ? ", decreasing" : ", not monotone")};
}

// 12 ------------------------------------------------------------------------
Verdict continuous_dependence() {
  const auto reports = parallel_map(50, [&](std::size_t run) {
    std::mt19937_64 rng(1200 + run);
    std::uniform_real_distribution<double> uni(0.0, 1.0);
    const ModelParams m = bump_model(uni(rng), 16);
    const LatticeVector u0 = gaussian_vector(16, rng, 1.0 + 2.0 * uni(rng));
    const LatticeVector v0 = u0 + gaussian_vector(16, rng, std::pow(10.0, -1.0 - 4.0 * uni(rng)));
    const NoiseRealization nr = realize_noise(1300 + run, 0.01, 60.0, 2.0);
    return check_continuous_dependence(u0, v0, OUView(nr.ou), m, 1.0);
  });
  std::size_t held = 0;
  double worst_ratio = 0.0;
  for (const auto& r : reports) {
    held += r.holds ? 1 : 0;
    worst_ratio = std::max(worst_ratio, r.sup_gap2 / r.bound);
  }
  return {held == reports.size(),
          std::to_string(held) + "/50 runs hold, max sup|X-Y|^2 / bound = " + num(worst_ratio)};
}

// 13 ------------------------------------------------------------------------
Verdict reproducibility() {
  const fs::path dir = fs::temp_directory_path() / "plab_acceptance_repro";
  fs::remove_all(dir);
  fs::create_directories(dir);
  io::write_text(dir / "config.json", R"({
  "model": {"lambda": 1, "p": 2, "alpha": 0.5, "half_width": 32, "g": {"profile": "gaussian-bump"}},
  "noise": {"radius_horizon": 30},
  "experiment": {"T": 5, "v0": {"profile": "unit", "site": 3, "amplitude": 4}, "tail_sites": [4, 8],
                 "ball_radius": 10, "pullback_times": [1, 5, 10]}
})");
  std::ostringstream sink;
  std::size_t compared = 0;
  bool same = true;
  for (const std::string cmd : {"simulate", "absorb"}) {
    std::vector<fs::path> outs;
    for (const std::string workers : {"1", "1", "2"}) {
      const fs::path out = dir / (cmd + "_" + std::to_string(outs.size()));
      const int code = app::run_cli({cmd, "--config", (dir / "config.json").string(), "--seed", "3,4", "--out",
                                     out.string(), "--workers", workers},
                                    sink, sink);
      if (code != 0) return {false, cmd + " exited with " + std::to_string(code)};
      outs.push_back(out);
    }
    for (const auto& entry : fs::directory_iterator(outs[0])) {
      if (entry.path().extension() != ".csv") continue;
      const std::string ref = io::read_text(entry.path());
      for (std::size_t k = 1; k < outs.size(); ++k) {
        ++compared;
        same = same && io::read_text(outs[k] / entry.path().filename()) == ref;
      }
    }
  }
  omp_set_num_threads(omp_get_num_procs());
  return {same && compared > 0, std::to_string(compared) + " CSV comparisons across repeated runs (1 and 2 workers), " +
                                    (same ? "all byte-identical" : "DIFFERENCES FOUND")};
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Verdict()>>> criteria = {
      {"operator identities", operator_identities},
      {"nonlinearity conditions", phi_conditions},
      {"OU fidelity", ou_fidelity},
      {"cocycle property", cocycle_property},
      {"deterministic decay", deterministic_decay},
      {"energy inequality", energy_inequality},
      {"absorption", absorption},
      {"absorbing-radius quadrature", radius_quadrature},
      {"temperedness of R^2", radius_temperedness},
      {"tail nullity", tail_nullity},
      {"pullback attraction", pullback_attraction_check},
      {"continuous dependence", continuous_dependence},
      {"reproducibility", reproducibility},
  };
  int failed = 0;
  for (std::size_t k = 0; k < criteria.size(); ++k) {
    const auto start = std::chrono::steady_clock::now();
    Verdict v;
    try {
      v = criteria[k].second();
    } catch (const std::exception& e) {
      v = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    failed += v.pass ? 0 : 1;
    std::printf("%s %2zu %-28s %s [%.1fs]\n", v.pass ? "PASS" : "FAIL", k + 1, criteria[k].first.c_str(),
                v.detail.c_str(), secs);
    std::fflush(stdout);
  }
  std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
