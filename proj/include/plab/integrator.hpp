#pragma once

#include <cstddef>
#include <limits>
#include <vector>

#include "plab/kernels.hpp"
#include "plab/lattice.hpp"
#include "plab/model.hpp"
#include "plab/noise.hpp"

namespace plab {

struct IntegratorOptions {
  /// Local error target per unit time, mixed absolute/relative:
  /// |err_i| <= tol * h * (1 + |v_i|).
  double tol = 1e-8;
  /// Output times in (0, T]; T is always added. Empty means endpoint only.
  std::vector<double> checkpoints;
  double max_step = std::numeric_limits<double>::infinity();
  double blowup_norm = 1e8;
  std::size_t max_steps = 100'000'000;
  KernelPolicy kernel = KernelPolicy::automatic;
  /// Keep the state after every accepted step (for step-level quadrature).
  bool record_steps = false;
};

/// Checkpointed solution of the transformed equation along one OU view.
/// Holds a view into an OUPath that the caller keeps alive.
struct Trajectory {
  std::vector<double> times;
  std::vector<LatticeVector> states;
  OUView ou;

  std::size_t accepted_steps = 0;
  std::size_t rejected_steps = 0;
  std::size_t rhs_evaluations = 0;
  /// Accepted steps and largest accepted error ratio in each checkpoint interval.
  std::vector<std::size_t> steps_per_interval;
  std::vector<double> max_error_ratio;
  /// Every accepted step, starting at t = 0; filled only with record_steps.
  std::vector<double> step_times;
  std::vector<LatticeVector> step_states;

  const LatticeVector& final_state() const { return states.back(); }
};

/// Uniform checkpoints spacing, 2*spacing, ... up to T (T included).
std::vector<double> uniform_checkpoints(double T, double spacing);

/// Dormand-Prince 5(4) with PI step control on the transformed equation.
///
/// Steps never straddle an OU grid node, so z is linear inside every step
/// and the rhs is smooth there. Checkpoints are hit exactly.
/// Throws BlowUpError when ||v|| exceeds blowup_norm or the exponentials
/// overflow, StepSizeUnderflow when the controller collapses.
Trajectory integrate(const LatticeVector& v0, const OUView& ou, const ModelParams& params, double T,
                     const IntegratorOptions& options = {});

}  // namespace plab
