#include "plab/dynamics.hpp"

#include <algorithm>
#include <cmath>

#include "plab/errors.hpp"
#include "plab/kernels.hpp"

namespace plab {

LatticeVector rhs(double t, const LatticeVector& v, const ModelParams& params, const OUView& ou) {
  if (v.half_width() != params.half_width) throw DomainError("rhs: state half-width does not match the model");
  const double z = ou.z(t);
  const double scale = params.alpha * std::abs(z) * std::max(1.0, params.p - 1.0);
  if (!std::isfinite(std::exp(scale))) throw BlowUpError("exponential weight overflows in rhs", t);
  LatticeVector out(params.half_width);
  std::vector<double> scratch(v.size());
  rhs_serial(params, z, v.values(), out.values(), scratch);
  if (!out.all_finite()) throw BlowUpError("non-finite right-hand side", t);
  return out;
}

LatticeVector to_original(const LatticeVector& v, double z, double alpha) { return std::exp(alpha * z) * v; }

CocycleState cocycle(double t, const OUView& ou, const LatticeVector& v0, const ModelParams& params,
                     const IntegratorOptions& options) {
  if (!(t >= 0.0)) throw DomainError("cocycle: t must be >= 0");
  IntegratorOptions opts = options;
  opts.checkpoints.clear();
  Trajectory traj = integrate(v0, ou, params, t, opts);
  CocycleState s;
  s.t = t;
  s.z_end = ou.z(t);
  s.v = traj.final_state();
  s.u = to_original(s.v, s.z_end, params.alpha);
  return s;
}

CocycleState cocycle(double t, const WienerPath& omega, const LatticeVector& v0, const ModelParams& params,
                     const IntegratorOptions& options) {
  const OUPath ou = ou_path(omega);
  return cocycle(t, OUView(ou), v0, params, options);
}

ContinuityReport check_continuous_dependence(const LatticeVector& u0, const LatticeVector& v0, const OUView& ou,
                                             const ModelParams& params, double T, IntegratorOptions options) {
  if (!(T > 0.0)) throw DomainError("check_continuous_dependence: T must be > 0");
  require_same_width(u0, v0, "check_continuous_dependence");
  if (options.checkpoints.empty()) options.checkpoints = uniform_checkpoints(T, std::min(ou.dt(), T / 100.0));
  const Trajectory x = integrate(u0, ou, params, T, options);
  const Trajectory y = integrate(v0, ou, params, T, options);

  ContinuityReport r;
  r.T = T;
  r.initial_gap2 = norm_l2_squared(u0 - v0);
  for (std::size_t k = 0; k < x.states.size(); ++k) {
    r.sup_gap2 = std::max(r.sup_gap2, norm_l2_squared(x.states[k] - y.states[k]));
    r.state_bound = std::max({r.state_bound, norm_sup(x.states[k]), norm_sup(y.states[k])});
  }
  r.max_abs_z = ou.max_abs(0.0, T);
  // On |v_i| <= M the weighted argument e^{alpha z} v stays within e^{alpha max|z|} M;
  // ||A|| <= 4 and the reaction term has slope p |.|^{p-1} there.
  const double reach = std::exp(params.alpha * r.max_abs_z) * r.state_bound;
  r.lipschitz = 4.0 * phi_max_slope(params.phi, reach) + params.lambda * params.p * std::pow(reach, params.p - 1.0);
  r.rho = 2.0 * (r.lipschitz + params.alpha * r.max_abs_z);
  r.bound = r.initial_gap2 == 0.0 ? 0.0 : std::exp(r.rho * T) * r.initial_gap2;
  r.holds = r.sup_gap2 <= r.bound;
  return r;
}

}  // namespace plab
