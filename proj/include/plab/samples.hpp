#pragma once

#include <cstdint>
#include <vector>

#include "plab/lattice.hpp"

namespace plab {

/// Deterministic finite sample of the closed ball of a given radius:
/// 0 (optional), +-radius e_i for `unit_sites` evenly spread sites, and
/// `random_directions` seeded Gaussian directions scaled to the radius.
struct BallSampleSpec {
  int unit_sites = 3;
  int random_directions = 6;
  std::uint64_t seed = 1;
  bool include_zero = true;
};

std::vector<LatticeVector> ball_samples(int half_width, double radius, const BallSampleSpec& spec = {});

}  // namespace plab
