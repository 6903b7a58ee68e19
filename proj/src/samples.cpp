#include "plab/samples.hpp"

#include <cmath>
#include <random>

#include "plab/errors.hpp"

namespace plab {

std::vector<LatticeVector> ball_samples(int half_width, double radius, const BallSampleSpec& spec) {
  if (!(radius >= 0.0) || spec.unit_sites < 0 || spec.random_directions < 0)
    throw DomainError("ball_samples: radius and counts must be non-negative");
  std::vector<LatticeVector> out;
  if (spec.include_zero) out.emplace_back(half_width);

  const int width = 2 * half_width + 1;
  for (int j = 0; j < spec.unit_sites; ++j) {
    const int site = -half_width + static_cast<int>(std::floor((j + 0.5) * width / spec.unit_sites));
    out.push_back(radius * LatticeVector::unit(half_width, site));
    out.push_back(-radius * LatticeVector::unit(half_width, site));
  }

  std::seed_seq seq{static_cast<std::uint32_t>(spec.seed), static_cast<std::uint32_t>(spec.seed >> 32), 0xBA11u};
  std::mt19937_64 rng(seq);
  std::normal_distribution<double> gauss;
  for (int d = 0; d < spec.random_directions; ++d) {
    LatticeVector v(half_width);
    for (double& x : v.values()) x = gauss(rng);
    const double n = norm_l2(v);
    out.push_back((n > 0.0 ? radius / n : 0.0) * v);
  }
  if (out.empty()) throw DomainError("ball_samples: empty sample");
  return out;
}

}  // namespace plab
