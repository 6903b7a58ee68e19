#pragma once

#include <vector>

#include "plab/integrator.hpp"
#include "plab/model.hpp"

namespace plab {

/// Gronwall energy balance along a trajectory, on its checkpoint grid.
///
/// With y = ||v||^2, W(s,t) = exp(-lambda (t-s) + 2 alpha int_s^t z) and
/// C = 8||g||^2/lambda + 2||a||_1:
///
///   lhs(t)      = y(t) + int_0^t W(s,t) [ (7/8) lambda y(s)
///                                        + 2 lambda e^{alpha(p-1) z(s)} ||v(s)||_{p+1}^{p+1} ] ds
///   majorant(t) = W(0,t) y(0) + C int_0^t W(s,t) e^{-2 alpha z(s)} ds
///
/// The 7/8 is what remains of the lambda y dissipation after Young's
/// inequality absorbs 2 e^{-alpha z}(g, v) into lambda/8 y + C_g e^{-2 alpha z}.
/// The integrals are accumulated interval by interval with the trapezoidal
/// rule, the W factors from exact integrals of the interpolated z. The
/// intervals are the accepted integrator steps when the trajectory was run
/// with record_steps, the checkpoint intervals otherwise; rows are reported
/// at the checkpoints either way.
struct EnergyReport {
  std::vector<double> times;
  std::vector<double> norm2;
  std::vector<double> dissipation_l2;
  std::vector<double> dissipation_power;
  std::vector<double> lhs;
  std::vector<double> majorant;
  std::vector<double> residual;  // majorant - lhs

  /// eta = C max_t int_0^t W(s,t) e^{-2 alpha z(s)} ds, xi = 2 alpha int_0^T |z|.
  double eta = 0.0;
  double xi = 0.0;
  /// max_t (||v(t)||^2 - ||v0||^2 e^xi - eta); <= 0 when the crude bound holds.
  double crude_bound_excess = 0.0;

  double min_residual() const;
  bool holds(double tolerance) const { return min_residual() >= -tolerance; }
};

EnergyReport energy_report(const Trajectory& traj, const ModelParams& params);

/// int_0^T W(s,T) f(s) ds on the trajectory's checkpoint grid (trapezoidal),
/// f given at the checkpoints.
double gronwall_integral(const Trajectory& traj, double lambda, double alpha, const std::vector<double>& f);

}  // namespace plab
