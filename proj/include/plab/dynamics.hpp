#pragma once

#include "plab/integrator.hpp"
#include "plab/lattice.hpp"
#include "plab/model.hpp"
#include "plab/noise.hpp"

namespace plab {

/// Right-hand side of the transformed equation at local time t of the view.
/// Throws BlowUpError when an exponential weight or the result is not finite.
LatticeVector rhs(double t, const LatticeVector& v, const ModelParams& params, const OUView& ou);

struct CocycleState {
  double t = 0.0;
  double z_end = 0.0;
  LatticeVector v;  // phi(t, omega, v0)
  LatticeVector u;  // e^{alpha z(theta_t omega)} v, the original variable
};

/// phi(t, omega, v0) along the OU path of omega (computed here).
CocycleState cocycle(double t, const WienerPath& omega, const LatticeVector& v0, const ModelParams& params,
                     const IntegratorOptions& options = {});

/// Same along an existing OU view (shifted omegas reuse one stored path).
CocycleState cocycle(double t, const OUView& ou, const LatticeVector& v0, const ModelParams& params,
                     const IntegratorOptions& options = {});

/// u = e^{alpha z} v at the OU value z.
LatticeVector to_original(const LatticeVector& v, double z, double alpha);

struct ContinuityReport {
  double T = 0.0;
  double initial_gap2 = 0.0;  // ||u0 - v0||^2
  double sup_gap2 = 0.0;      // sup_t ||X(t) - Y(t)||^2 over checkpoints
  double state_bound = 0.0;   // sup-norm ball containing both trajectories
  double max_abs_z = 0.0;
  double lipschitz = 0.0;     // L
  double rho = 0.0;           // 2 (L + alpha max|z|)
  double bound = 0.0;         // e^{rho T} ||u0 - v0||^2
  bool holds = false;
};

/// Integrates from u0 and from v0 along the same view and checks
/// sup ||X - Y||^2 <= e^{rho T} ||u0 - v0||^2 with rho computed a posteriori:
/// L bounds the Lipschitz constant of the full nonlinearity on the sup-norm
/// ball reached by both trajectories.
ContinuityReport check_continuous_dependence(const LatticeVector& u0, const LatticeVector& v0, const OUView& ou,
                                             const ModelParams& params, double T, IntegratorOptions options = {});

}  // namespace plab
