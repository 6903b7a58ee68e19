#include "plab/energy.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "plab/errors.hpp"

namespace plab {

double EnergyReport::min_residual() const {
  double m = std::numeric_limits<double>::infinity();
  for (double r : residual) m = std::min(m, r);
  return m;
}

EnergyReport energy_report(const Trajectory& traj, const ModelParams& params) {
  if (traj.times.empty() || traj.times.front() != 0.0) throw DomainError("energy_report: trajectory must start at t=0");
  const bool fine = !traj.step_times.empty();
  const std::vector<double>& grid = fine ? traj.step_times : traj.times;
  const std::vector<LatticeVector>& states = fine ? traj.step_states : traj.states;
  const double lambda = params.lambda;
  const double alpha = params.alpha;
  const double forcing = params.forcing_constant();
  const OUView& ou = traj.ou;

  EnergyReport r;
  auto integrands = [&](std::size_t k, double& f_l2, double& f_pow, double& f_force, double& y) {
    const double z = ou.z(grid[k]);
    y = norm_l2_squared(states[k]);
    f_l2 = 0.875 * lambda * y;
    f_pow = 2.0 * lambda * std::exp(alpha * (params.p - 1.0) * z) * sum_abs_pow(states[k], params.p + 1.0);
    f_force = std::exp(-2.0 * alpha * z);
  };

  double f_l2 = 0.0, f_pow = 0.0, f_force = 0.0, y = 0.0;
  integrands(0, f_l2, f_pow, f_force, y);
  const double y0 = y;
  double weight_from_zero = 1.0;  // W(0, t)
  double diss_l2 = 0.0, diss_pow = 0.0;
  double forcing_integral = 0.0;  // int_0^t W(s,t) e^{-2 alpha z} ds
  double max_forcing_integral = 0.0;
  std::size_t next = 0;
  auto emit = [&](double t) {
    r.times.push_back(t);
    r.norm2.push_back(y);
    r.dissipation_l2.push_back(diss_l2);
    r.dissipation_power.push_back(diss_pow);
    r.majorant.push_back(weight_from_zero * y0 + forcing * forcing_integral);
    r.lhs.push_back(y + diss_l2 + diss_pow);
    ++next;
  };
  emit(0.0);
  for (std::size_t k = 0; k + 1 < grid.size(); ++k) {
    const double t0 = grid[k];
    const double t1 = grid[k + 1];
    const double h = t1 - t0;
    const double w = std::exp(-lambda * h + 2.0 * alpha * ou.integral(t0, t1));
    double g_l2 = 0.0, g_pow = 0.0, g_force = 0.0;
    integrands(k + 1, g_l2, g_pow, g_force, y);
    weight_from_zero *= w;
    diss_l2 = w * diss_l2 + 0.5 * h * (w * f_l2 + g_l2);
    diss_pow = w * diss_pow + 0.5 * h * (w * f_pow + g_pow);
    forcing_integral = w * forcing_integral + 0.5 * h * (w * f_force + g_force);
    max_forcing_integral = std::max(max_forcing_integral, forcing_integral);
    f_l2 = g_l2;
    f_pow = g_pow;
    f_force = g_force;
    if (next < traj.times.size() && t1 == traj.times[next]) emit(t1);
  }
  if (r.times.size() != traj.times.size()) throw DomainError("energy_report: step record misses a checkpoint");
  r.residual.resize(r.times.size());
  for (std::size_t k = 0; k < r.times.size(); ++k) r.residual[k] = r.majorant[k] - r.lhs[k];

  r.eta = forcing * max_forcing_integral;
  r.xi = 2.0 * alpha * ou.integral_abs(0.0, traj.times.back());
  r.crude_bound_excess = -std::numeric_limits<double>::infinity();
  const double crude = y0 * std::exp(r.xi) + r.eta;
  for (double v : r.norm2) r.crude_bound_excess = std::max(r.crude_bound_excess, v - crude);
  return r;
}

double gronwall_integral(const Trajectory& traj, double lambda, double alpha, const std::vector<double>& f) {
  if (f.size() != traj.times.size()) throw DomainError("gronwall_integral: one value per checkpoint expected");
  double acc = 0.0;
  for (std::size_t k = 0; k + 1 < f.size(); ++k) {
    const double t0 = traj.times[k];
    const double t1 = traj.times[k + 1];
    const double w = std::exp(-lambda * (t1 - t0) + 2.0 * alpha * traj.ou.integral(t0, t1));
    acc = w * acc + 0.5 * (t1 - t0) * (w * f[k] + f[k + 1]);
  }
  return acc;
}

}  // namespace plab
