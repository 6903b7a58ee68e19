#include "plab/model.hpp"

#include <cmath>

#include "plab/errors.hpp"

namespace plab {

void ModelParams::validate() const {
  if (!(lambda > 0.0) || !std::isfinite(lambda)) throw DomainError("ModelParams: lambda must be > 0");
  if (!(p > 1.0) || !std::isfinite(p)) throw DomainError("ModelParams: p must be > 1");
  if (!(alpha >= 0.0) || !std::isfinite(alpha)) throw DomainError("ModelParams: alpha must be >= 0");
  if (half_width < 0) throw DomainError("ModelParams: half_width must be >= 0");
  if (g.half_width() != half_width || a_defect.half_width() != half_width)
    throw DomainError("ModelParams: g and a must have the model half-width");
  if (!g.all_finite() || !a_defect.all_finite()) throw DomainError("ModelParams: g and a must be finite");
  if (!a_defect.is_nonnegative()) throw DomainError("ModelParams: a_i must be >= 0");
  phi.validate();
}

double ModelParams::forcing_constant() const {
  return 8.0 * norm_l2_squared(g) / lambda + 2.0 * norm_l1(a_defect);
}

ModelParams ModelParams::make(double lambda, double p, double alpha, int half_width) {
  ModelParams m;
  m.lambda = lambda;
  m.p = p;
  m.alpha = alpha;
  m.half_width = half_width;
  m.g = SiteSequence(half_width);
  m.a_defect = SiteSequence(half_width);
  m.phi = PhiSpec::power_law(p);
  m.validate();
  return m;
}

}  // namespace plab
