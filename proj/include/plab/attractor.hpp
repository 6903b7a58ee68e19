#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "plab/integrator.hpp"
#include "plab/lattice.hpp"
#include "plab/model.hpp"
#include "plab/noise.hpp"
#include "plab/samples.hpp"

namespace plab {

// ---------------------------------------------------------------------------
// Absorbing radius

/// R^2(omega) = 1 + C int_{-inf}^0 exp(-2 alpha z(s) + lambda s + 2 alpha int_s^0 z) ds
/// with C = 8||g||^2/lambda + 2||a||_1, truncated to [-horizon, 0].
struct AbsorbingRadius {
  double r_squared = 1.0;
  double horizon = 0.0;
  double quad_dt = 0.0;
  /// Heuristic size of the omitted part beyond -horizon.
  double tail_estimate = 0.0;

  double radius() const;
};

/// Composite 5-point Gauss-Legendre on panels of width quad_dt (which must
/// divide the OU step, so z is linear on every panel); the inner integral
/// int_s^0 z is carried exactly panel to panel. quad_dt = 0 uses the OU step.
AbsorbingRadius absorbing_radius(const OUView& ou, const ModelParams& params, double horizon, double quad_dt = 0.0);

// ---------------------------------------------------------------------------
// Set diagnostics

/// sum_{|i| > I0} v_i^2; throws DomainError for I0 outside [0, N].
double tail_energy(const LatticeVector& v, int I0);

/// sup_{x in X} inf_{y in Y} ||x - y|| over finite sets (OpenMP over X).
double hausdorff_semidistance(std::span<const LatticeVector> xs, std::span<const LatticeVector> ys);

/// C^1 cut-off: 0 on [0,1], 1 on [2, inf), smoothstep in between (|rho'| <= 3/2).
double cutoff(double s);
inline constexpr double kCutoffSlopeBound = 2.0;

// ---------------------------------------------------------------------------
// Experiments

struct ExperimentSetup {
  ModelParams params;
  double dt = 0.01;  // OU grid step; pullback times must be multiples of it
  IntegratorOptions integrator;
  double radius_horizon = 50.0;
  BallSampleSpec samples;
};

struct NoiseRealization {
  WienerPath omega;
  OUPath ou;
};

/// Path on [-backward_span, forward_span] and its OU process.
NoiseRealization realize_noise(std::uint64_t seed, double dt, double backward_span, double forward_span);

/// Backward span needed to pull back over max_time and still evaluate R
/// at theta_{-max_time} omega after an OU warm-up.
double required_backward_span(const ExperimentSetup& setup, double max_time);

/// phi(t, theta_{-t} omega, v0) with theta_{-t} realized as a view shift.
LatticeVector pullback_state(const OUPath& ou, double t, const LatticeVector& v0, const ModelParams& params,
                             const IntegratorOptions& options);

struct AbsorptionRow {
  std::uint64_t seed = 0;
  double t = 0.0;
  double max_norm = 0.0;
  double radius = 0.0;
  bool inside = false;
};

struct AbsorptionSeedSummary {
  std::uint64_t seed = 0;
  double radius = 0.0;
  /// First tested time from which every later tested time has all samples
  /// inside; NaN if the last tested time is not absorbed.
  double observed_time = 0.0;
  /// First time (OU grid) from which the energy bound
  /// e^{-lambda t + 2 alpha int_{-t}^0 z} B^2 <= 1 holds for the rest of the
  /// scanned range; NaN if not reached.
  double bound_time = 0.0;
};

struct AbsorptionReport {
  double ball_radius = 0.0;
  std::vector<AbsorptionRow> rows;
  std::vector<AbsorptionSeedSummary> seeds;

  bool all_absorbed_at_last() const;
};

AbsorptionReport absorption_experiment(const ExperimentSetup& setup, double ball_radius,
                                       const std::vector<double>& pullback_times,
                                       const std::vector<std::uint64_t>& seeds);

struct RadiusTemperRow {
  std::uint64_t seed = 0;
  double gamma = 0.0;
  double t = 0.0;
  double r_squared = 0.0;
  double weighted = 0.0;  // e^{-gamma t} R^2(theta_{-t} omega)
};

struct RadiusTemperSummary {
  std::uint64_t seed = 0;
  double gamma = 0.0;
  double decades = 0.0;  // log10(first / last)
  bool decreasing = false;
  bool below_threshold = false;
};

struct RadiusTemperReport {
  double threshold = 1e-2;
  std::vector<RadiusTemperRow> rows;
  std::vector<RadiusTemperSummary> summaries;
};

/// e^{-gamma t} R^2(theta_{-t} omega) over t_list for each seed and gamma.
/// Verdict: trend decreasing (last < first, least-squares log slope < 0)
/// and last <= threshold * first.
RadiusTemperReport temperedness_of_R(const ExperimentSetup& setup, const std::vector<std::uint64_t>& seeds,
                                     const std::vector<double>& gammas, const std::vector<double>& t_list,
                                     double threshold = 1e-2);

struct NullityRow {
  std::uint64_t seed = 0;
  double t = 0.0;
  double radius = 0.0;       // R(theta_{-t} omega), radius of the initial cloud
  int min_i0 = 0;            // minimal I0 with sup tail <= eps^2
  double sup_tail = 0.0;     // sup over samples of the tail beyond min_i0
  // Cut-off bound components at the final time (max over samples).
  double decay_term = 0.0;
  double dissipation_terms = 0.0;
  double forcing_tail = 0.0;
  double cutoff_tail = 0.0;  // observed sum rho(|i|/cut) v_i^2
};

struct NullitySeedSummary {
  std::uint64_t seed = 0;
  double t_tilde = 0.0;
  int n_tilde = 0;
  bool non_increasing = false;
  bool stabilized = false;
};

struct NullityReport {
  double epsilon = 0.0;
  int cutoff_width = 1;
  std::vector<NullityRow> rows;
  std::vector<NullitySeedSummary> seeds;
};

/// Pulls back a sample of K(theta_{-t} omega) and finds the smallest I0 with
/// sup tail_energy <= eps^2. cutoff_width is the N of the cut-off rho(|i|/N)
/// used for the bound comparison; 0 picks max(1, half_width / 4).
NullityReport nullity_experiment(const ExperimentSetup& setup, double epsilon,
                                 const std::vector<double>& pullback_times,
                                 const std::vector<std::uint64_t>& seeds, int cutoff_width = 0);

struct PullbackRow {
  double t = 0.0;
  double dist_ab = 0.0;
  double dist_ba = 0.0;
  double mutual = 0.0;  // max of both
};

struct PullbackReport {
  std::uint64_t seed = 0;
  std::vector<PullbackRow> rows;
  /// After the largest mutual distance, the sequence never rises by more
  /// than noise_floor, and ends below its start.
  bool eventually_decreasing = false;
  double noise_floor = 0.0;
};

PullbackReport pullback_attraction(const ExperimentSetup& setup, std::span<const LatticeVector> set_a,
                                   std::span<const LatticeVector> set_b, const std::vector<double>& pullback_times,
                                   std::uint64_t seed);

}  // namespace plab
