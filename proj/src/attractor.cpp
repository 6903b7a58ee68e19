#include "plab/attractor.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <string>

#include "plab/dynamics.hpp"
#include "plab/energy.hpp"
#include "plab/ensemble.hpp"
#include "plab/errors.hpp"
#include "plab/kernels.hpp"

namespace plab {

namespace {

constexpr std::array<double, 5> kGaussNodes = {-0.9061798459386640, -0.5384693101056831, 0.0, 0.5384693101056831,
                                               0.9061798459386640};
constexpr std::array<double, 5> kGaussWeights = {0.2369268850561891, 0.4786286704993665, 0.5688888888888889,
                                                 0.4786286704993665, 0.2369268850561891};

double nan() { return std::numeric_limits<double>::quiet_NaN(); }

void require_times(const std::vector<double>& times, const char* where) {
  if (times.empty()) throw DomainError(std::string(where) + ": empty time list");
  for (std::size_t k = 0; k < times.size(); ++k) {
    if (!(times[k] >= 0.0)) throw DomainError(std::string(where) + ": times must be >= 0");
    if (k > 0 && !(times[k] > times[k - 1])) throw DomainError(std::string(where) + ": times must be increasing");
  }
}

template <class F>
auto run_annotated(const std::string& context, F&& f) {
  try {
    return f();
  } catch (const NumericalError& e) {
    throw e.annotated(context);
  }
}

std::string task_label(std::uint64_t seed, double t, std::size_t sample) {
  return "seed " + std::to_string(seed) + ", pullback t=" + std::to_string(t) + ", sample " + std::to_string(sample);
}

}  // namespace

double AbsorbingRadius::radius() const { return std::sqrt(r_squared); }

AbsorbingRadius absorbing_radius(const OUView& ou, const ModelParams& params, double horizon, double quad_dt) {
  params.validate();
  if (!(horizon > 0.0)) throw DomainError("absorbing_radius: horizon must be > 0");
  const double dt = ou.dt();
  const double q = quad_dt > 0.0 ? quad_dt : dt;
  const double per_segment = dt / q;
  if (std::abs(per_segment - std::round(per_segment)) > 1e-9 * per_segment || per_segment < 1.0 - 1e-9)
    throw DomainError("absorbing_radius: quad_dt must divide the OU step");
  const auto panels = static_cast<std::size_t>(std::ceil(horizon / q - 1e-9));
  const double reach = static_cast<double>(panels) * q;
  if (!ou.covers(-reach, 0.0))
    throw DomainError("absorbing_radius: horizon " + std::to_string(horizon) + " exceeds the noise path domain");

  AbsorbingRadius r;
  r.horizon = reach;
  r.quad_dt = q;
  const double c = params.forcing_constant();
  if (c == 0.0) return r;

  const double lambda = params.lambda;
  const double alpha = params.alpha;
  double integral = 0.0;
  double inner = 0.0;  // int_{s_right}^0 z
  double z_right = ou.z(0.0);
  double z_max = std::abs(z_right);
  for (std::size_t j = 0; j < panels; ++j) {
    const double s_right = -static_cast<double>(j) * q;
    const double s_left = -static_cast<double>(j + 1) * q;
    const double z_left = ou.z(s_left);
    const double mid = 0.5 * (s_left + s_right);
    double panel = 0.0;
    for (std::size_t k = 0; k < kGaussNodes.size(); ++k) {
      const double s = mid + 0.5 * q * kGaussNodes[k];
      const double zs = z_right + (z_left - z_right) * (s_right - s) / q;
      const double inner_s = inner + 0.5 * (s_right - s) * (zs + z_right);
      panel += kGaussWeights[k] * std::exp(lambda * s - 2.0 * alpha * zs + 2.0 * alpha * inner_s);
    }
    integral += 0.5 * q * panel;
    inner += 0.5 * q * (z_left + z_right);
    z_right = z_left;
    z_max = std::max(z_max, std::abs(z_left));
  }
  const double edge = std::exp(-lambda * reach - 2.0 * alpha * z_right + 2.0 * alpha * inner);
  const double rate = std::max(lambda - 2.0 * alpha * alpha, 0.1 * lambda);
  r.tail_estimate = c * edge * std::exp(4.0 * alpha * z_max) / rate;
  r.r_squared = 1.0 + c * integral;
  return r;
}

double tail_energy(const LatticeVector& v, int I0) {
  const int n = v.half_width();
  if (I0 < 0 || I0 > n) throw DomainError("tail_energy: I0 must lie in [0, N]");
  double s = 0.0;
  for (int i = I0 + 1; i <= n; ++i) s += v[i] * v[i] + v[-i] * v[-i];
  return s;
}

double hausdorff_semidistance(std::span<const LatticeVector> xs, std::span<const LatticeVector> ys) {
  return semidistance_parallel(xs, ys);
}

double cutoff(double s) {
  if (s <= 1.0) return 0.0;
  if (s >= 2.0) return 1.0;
  const double x = s - 1.0;
  return x * x * (3.0 - 2.0 * x);
}

NoiseRealization realize_noise(std::uint64_t seed, double dt, double backward_span, double forward_span) {
  WienerPath omega = sample_wiener(seed, -backward_span, forward_span, dt);
  OUPath ou = ou_path(omega);
  return {std::move(omega), std::move(ou)};
}

double required_backward_span(const ExperimentSetup& setup, double max_time) {
  return max_time + setup.radius_horizon + default_backward_horizon(max_time) + setup.dt;
}

LatticeVector pullback_state(const OUPath& ou, double t, const LatticeVector& v0, const ModelParams& params,
                             const IntegratorOptions& options) {
  const OUView view = OUView(ou).shifted(-t);
  return cocycle(t, view, v0, params, options).v;
}

// ---------------------------------------------------------------------------

bool AbsorptionReport::all_absorbed_at_last() const {
  if (rows.empty()) return false;
  const double last = rows.back().t;
  return std::all_of(rows.begin(), rows.end(), [&](const AbsorptionRow& r) { return r.t != last || r.inside; });
}

AbsorptionReport absorption_experiment(const ExperimentSetup& setup, double ball_radius,
                                       const std::vector<double>& pullback_times,
                                       const std::vector<std::uint64_t>& seeds) {
  require_times(pullback_times, "absorption_experiment");
  if (seeds.empty()) throw DomainError("absorption_experiment: no seeds");
  if (!(ball_radius >= 0.0)) throw DomainError("absorption_experiment: ball radius must be >= 0");
  setup.params.validate();
  const ModelParams& params = setup.params;
  const double max_t = pullback_times.back();
  const double span = required_backward_span(setup, max_t);

  const auto noises = parallel_map(seeds.size(), [&](std::size_t i) { return realize_noise(seeds[i], setup.dt, span, setup.dt); });
  const auto radii = parallel_map(seeds.size(), [&](std::size_t i) {
    return absorbing_radius(OUView(noises[i].ou), params, setup.radius_horizon).radius();
  });
  const auto samples = ball_samples(params.half_width, ball_radius, setup.samples);

  const std::size_t nt = pullback_times.size();
  const std::size_t ns = samples.size();
  const auto norms = parallel_map(seeds.size() * nt * ns, [&](std::size_t task) {
    const std::size_t i = task / (nt * ns);
    const std::size_t j = (task / ns) % nt;
    const std::size_t k = task % ns;
    return run_annotated(task_label(seeds[i], pullback_times[j], k), [&] {
      return norm_l2(pullback_state(noises[i].ou, pullback_times[j], samples[k], params, setup.integrator));
    });
  });

  AbsorptionReport report;
  report.ball_radius = ball_radius;
  for (std::size_t i = 0; i < seeds.size(); ++i) {
    AbsorptionSeedSummary summary{seeds[i], radii[i], nan(), nan()};
    std::vector<bool> inside(nt);
    for (std::size_t j = 0; j < nt; ++j) {
      double worst = 0.0;
      for (std::size_t k = 0; k < ns; ++k) worst = std::max(worst, norms[(i * nt + j) * ns + k]);
      inside[j] = worst <= radii[i];
      report.rows.push_back({seeds[i], pullback_times[j], worst, radii[i], inside[j]});
    }
    for (std::size_t j = nt; j > 0 && inside[j - 1]; --j) summary.observed_time = pullback_times[j - 1];

    // Scan the energy bound on the OU grid back to max_t.
    const OUView view(noises[i].ou);
    const auto steps = static_cast<std::size_t>(std::llround(max_t / setup.dt));
    const double log_b2 = ball_radius > 0.0 ? 2.0 * std::log(ball_radius) : -std::numeric_limits<double>::infinity();
    double running = 0.0;  // int_{-t}^0 z
    std::ptrdiff_t last_violation = -1;
    for (std::size_t m = 0; m <= steps; ++m) {
      const double t = static_cast<double>(m) * setup.dt;
      if (m > 0) running += view.integral(-t, -t + setup.dt);
      if (-params.lambda * t + 2.0 * params.alpha * running + log_b2 > 0.0) last_violation = static_cast<std::ptrdiff_t>(m);
    }
    if (last_violation < static_cast<std::ptrdiff_t>(steps))
      summary.bound_time = static_cast<double>(last_violation + 1) * setup.dt;
    report.seeds.push_back(summary);
  }
  return report;
}

// ---------------------------------------------------------------------------

RadiusTemperReport temperedness_of_R(const ExperimentSetup& setup, const std::vector<std::uint64_t>& seeds,
                                     const std::vector<double>& gammas, const std::vector<double>& t_list,
                                     double threshold) {
  require_times(t_list, "temperedness_of_R");
  if (seeds.empty() || gammas.empty()) throw DomainError("temperedness_of_R: need seeds and gammas");
  for (double g : gammas)
    if (!(g > 0.0)) throw DomainError("temperedness_of_R: gamma must be > 0");
  const double span = required_backward_span(setup, t_list.back());
  const auto noises = parallel_map(seeds.size(), [&](std::size_t i) { return realize_noise(seeds[i], setup.dt, span, setup.dt); });
  const std::size_t nt = t_list.size();
  const auto r2 = parallel_map(seeds.size() * nt, [&](std::size_t task) {
    const std::size_t i = task / nt;
    const std::size_t j = task % nt;
    const OUView view = OUView(noises[i].ou).shifted(-t_list[j]);
    return absorbing_radius(view, setup.params, setup.radius_horizon).r_squared;
  });

  RadiusTemperReport report;
  report.threshold = threshold;
  for (std::size_t i = 0; i < seeds.size(); ++i) {
    for (double gamma : gammas) {
      std::vector<double> logs;
      for (std::size_t j = 0; j < nt; ++j) {
        const double w = std::exp(-gamma * t_list[j]) * r2[i * nt + j];
        report.rows.push_back({seeds[i], gamma, t_list[j], r2[i * nt + j], w});
        logs.push_back(std::log(w));
      }
      double mt = 0.0, ml = 0.0;
      for (std::size_t j = 0; j < nt; ++j) {
        mt += t_list[j];
        ml += logs[j];
      }
      mt /= static_cast<double>(nt);
      ml /= static_cast<double>(nt);
      double cov = 0.0;
      for (std::size_t j = 0; j < nt; ++j) cov += (t_list[j] - mt) * (logs[j] - ml);
      RadiusTemperSummary s;
      s.seed = seeds[i];
      s.gamma = gamma;
      s.decades = (logs.front() - logs.back()) / std::log(10.0);
      s.decreasing = logs.back() < logs.front() && (nt < 2 || cov < 0.0);
      s.below_threshold = logs.back() <= std::log(threshold) + logs.front();
      report.summaries.push_back(s);
    }
  }
  return report;
}

// ---------------------------------------------------------------------------

namespace {

struct NullitySample {
  LatticeVector final_state;
  double decay_term = 0.0;
  double dissipation_terms = 0.0;
  double forcing_tail = 0.0;
  double cutoff_tail = 0.0;
};

NullitySample run_nullity_sample(const OUPath& ou, double t, const LatticeVector& v0, const ExperimentSetup& setup,
                                 int cut, double c1) {
  const ModelParams& params = setup.params;
  const OUView view = OUView(ou).shifted(-t);
  IntegratorOptions opts = setup.integrator;
  opts.checkpoints = t > 0.0 ? uniform_checkpoints(t, std::max(setup.dt, t / 200.0)) : std::vector<double>{};
  const Trajectory traj = integrate(v0, view, params, t, opts);

  NullitySample out;
  out.final_state = traj.final_state();
  const double lambda = params.lambda;
  const double alpha = params.alpha;
  const std::size_t n = traj.times.size();
  std::vector<double> f_l2(n), f_pow(n), f_force(n);
  for (std::size_t k = 0; k < n; ++k) {
    const double z = view.z(traj.times[k]);
    f_l2[k] = norm_l2_squared(traj.states[k]);
    f_pow[k] = std::exp(alpha * (params.p - 1.0) * z) * sum_abs_pow(traj.states[k], params.p + 1.0);
    f_force[k] = std::exp(-2.0 * alpha * z);
  }
  const double weight = 4.0 * kCutoffSlopeBound * c1 / cut;
  out.decay_term = std::exp(-lambda * t + 2.0 * alpha * view.integral(0.0, t)) * norm_l2_squared(v0);
  out.dissipation_terms =
      weight * (gronwall_integral(traj, lambda, alpha, f_l2) + gronwall_integral(traj, lambda, alpha, f_pow));
  double tail_coeff = 0.0;
  for (int i = -params.half_width; i <= params.half_width; ++i)
    if (std::abs(i) >= cut) tail_coeff += 2.0 * params.a_defect[i] + params.g[i] * params.g[i] / lambda;
  out.forcing_tail = tail_coeff * gronwall_integral(traj, lambda, alpha, f_force);
  for (int i = -params.half_width; i <= params.half_width; ++i) {
    const double x = out.final_state[i];
    out.cutoff_tail += cutoff(static_cast<double>(std::abs(i)) / cut) * x * x;
  }
  return out;
}

}  // namespace

NullityReport nullity_experiment(const ExperimentSetup& setup, double epsilon, const std::vector<double>& pullback_times,
                                 const std::vector<std::uint64_t>& seeds, int cutoff_width) {
  require_times(pullback_times, "nullity_experiment");
  if (seeds.empty()) throw DomainError("nullity_experiment: no seeds");
  if (!(epsilon > 0.0)) throw DomainError("nullity_experiment: epsilon must be > 0");
  const ModelParams& params = setup.params;
  params.validate();
  const int n = params.half_width;
  const int cut = cutoff_width > 0 ? cutoff_width : std::max(1, n / 4);
  const double c1 = params.phi.kind == PhiSpec::Kind::power_law ? suggested_constants(params.phi).c1
                                                                 : phi_max_slope(params.phi, 1e300);
  const double span = required_backward_span(setup, pullback_times.back());
  const auto noises = parallel_map(seeds.size(), [&](std::size_t i) { return realize_noise(seeds[i], setup.dt, span, setup.dt); });

  const std::size_t nt = pullback_times.size();
  const auto radii = parallel_map(seeds.size() * nt, [&](std::size_t task) {
    const OUView view = OUView(noises[task / nt].ou).shifted(-pullback_times[task % nt]);
    return absorbing_radius(view, params, setup.radius_horizon).radius();
  });
  const std::size_t ns = ball_samples(n, 1.0, setup.samples).size();
  const auto results = parallel_map(seeds.size() * nt * ns, [&](std::size_t task) {
    const std::size_t i = task / (nt * ns);
    const std::size_t j = (task / ns) % nt;
    const std::size_t k = task % ns;
    const auto cloud = ball_samples(n, radii[i * nt + j], setup.samples);
    return run_annotated(task_label(seeds[i], pullback_times[j], k), [&] {
      return run_nullity_sample(noises[i].ou, pullback_times[j], cloud[k], setup, cut, c1);
    });
  });

  NullityReport report;
  report.epsilon = epsilon;
  report.cutoff_width = cut;
  const double target = epsilon * epsilon;
  for (std::size_t i = 0; i < seeds.size(); ++i) {
    std::vector<int> i0s;
    for (std::size_t j = 0; j < nt; ++j) {
      NullityRow row;
      row.seed = seeds[i];
      row.t = pullback_times[j];
      row.radius = radii[i * nt + j];
      std::vector<double> sup_tail(static_cast<std::size_t>(n) + 1, 0.0);
      for (std::size_t k = 0; k < ns; ++k) {
        const NullitySample& s = results[(i * nt + j) * ns + k];
        double acc = 0.0;
        for (int m = n; m >= 0; --m) {
          sup_tail[static_cast<std::size_t>(m)] = std::max(sup_tail[static_cast<std::size_t>(m)], acc);
          acc += s.final_state[m] * s.final_state[m] + (m > 0 ? s.final_state[-m] * s.final_state[-m] : 0.0);
        }
        row.decay_term = std::max(row.decay_term, s.decay_term);
        row.dissipation_terms = std::max(row.dissipation_terms, s.dissipation_terms);
        row.forcing_tail = std::max(row.forcing_tail, s.forcing_tail);
        row.cutoff_tail = std::max(row.cutoff_tail, s.cutoff_tail);
      }
      row.min_i0 = n;
      for (int m = 0; m <= n; ++m) {
        if (sup_tail[static_cast<std::size_t>(m)] <= target) {
          row.min_i0 = m;
          break;
        }
      }
      row.sup_tail = sup_tail[static_cast<std::size_t>(row.min_i0)];
      i0s.push_back(row.min_i0);
      report.rows.push_back(row);
    }
    NullitySeedSummary summary;
    summary.seed = seeds[i];
    summary.n_tilde = i0s.back();
    summary.non_increasing = std::is_sorted(i0s.rbegin(), i0s.rend());
    summary.stabilized = summary.non_increasing && i0s.back() < n && (i0s.size() < 2 || i0s[nt - 1] == i0s[nt - 2]);
    std::size_t first = nt - 1;
    while (first > 0 && i0s[first - 1] <= summary.n_tilde) --first;
    summary.t_tilde = pullback_times[first];
    report.seeds.push_back(summary);
  }
  return report;
}

// ---------------------------------------------------------------------------

PullbackReport pullback_attraction(const ExperimentSetup& setup, std::span<const LatticeVector> set_a,
                                   std::span<const LatticeVector> set_b, const std::vector<double>& pullback_times,
                                   std::uint64_t seed) {
  require_times(pullback_times, "pullback_attraction");
  if (set_a.empty() || set_b.empty()) throw DomainError("pullback_attraction: empty sample set");
  const ModelParams& params = setup.params;
  params.validate();
  const double span = required_backward_span(setup, pullback_times.back());
  const NoiseRealization noise = realize_noise(seed, setup.dt, span, setup.dt);

  const std::size_t nt = pullback_times.size();
  const std::size_t na = set_a.size();
  const std::size_t per_t = na + set_b.size();
  const auto images = parallel_map(nt * per_t, [&](std::size_t task) {
    const std::size_t j = task / per_t;
    const std::size_t k = task % per_t;
    const LatticeVector& v0 = k < na ? set_a[k] : set_b[k - na];
    return run_annotated(task_label(seed, pullback_times[j], k),
                         [&] { return pullback_state(noise.ou, pullback_times[j], v0, params, setup.integrator); });
  });

  PullbackReport report;
  report.seed = seed;
  report.noise_floor = 10.0 * setup.integrator.tol;
  for (std::size_t j = 0; j < nt; ++j) {
    const auto first = images.begin() + static_cast<std::ptrdiff_t>(j * per_t);
    const std::span<const LatticeVector> a(&*first, na);
    const std::span<const LatticeVector> b(&*(first + static_cast<std::ptrdiff_t>(na)), per_t - na);
    PullbackRow row;
    row.t = pullback_times[j];
    row.dist_ab = hausdorff_semidistance(a, b);
    row.dist_ba = hausdorff_semidistance(b, a);
    row.mutual = std::max(row.dist_ab, row.dist_ba);
    report.rows.push_back(row);
  }
  const auto peak = std::max_element(report.rows.begin(), report.rows.end(),
                                     [](const PullbackRow& x, const PullbackRow& y) { return x.mutual < y.mutual; });
  bool ok = report.rows.back().mutual < report.rows.front().mutual;
  for (auto it = peak; it + 1 != report.rows.end(); ++it)
    if ((it + 1)->mutual > it->mutual + report.noise_floor) ok = false;
  report.eventually_decreasing = ok;
  return report;
}

}  // namespace plab
