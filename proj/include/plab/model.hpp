#pragma once

#include "plab/lattice.hpp"
#include "plab/nonlinearity.hpp"

namespace plab {

/// Coefficients of the transformed lattice equation
///   dv/dt = -e^{-az} A(Phi(e^{az} v)) + (az - lambda) v
///           - lambda e^{a(p-1)z} |v|^{p-1} v + e^{-az} g,
/// with a = alpha and z = z(theta_t omega). The sequence `a_defect` holds the
/// a_i of the monotonicity condition; it never enters the dynamics, only the
/// energy and absorbing-radius bounds.
struct ModelParams {
  double lambda = 1.0;
  double p = 2.0;
  double alpha = 0.5;
  int half_width = 16;
  SiteSequence g{16};
  SiteSequence a_defect{16};
  PhiSpec phi = PhiSpec::power_law(2.0);

  /// Throws DomainError unless lambda > 0, p > 1, alpha >= 0, a_i >= 0,
  /// g and a are finite with the model's half-width.
  void validate() const;

  /// 8 ||g||^2 / lambda + 2 ||a||_1, the forcing constant of the energy bound.
  double forcing_constant() const;

  /// Zero forcing, zero defects, power-law Phi with the model's p.
  static ModelParams make(double lambda, double p, double alpha, int half_width);
};

}  // namespace plab
