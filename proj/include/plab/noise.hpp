#pragma once

#include <cstdint>
#include <span>
#include <vector>

namespace plab {

/// Two-sided Brownian path on the grid t_k = k * dt, k in [k_min, k_max],
/// with omega(0) = 0.
///
/// The increments are the primary data. Values are their cumulative sums
/// outward from the origin, so two paths sharing increments and origin are
/// bitwise identical.
class WienerPath {
 public:
  WienerPath(std::uint64_t seed, double dt, std::int64_t k_min, std::int64_t k_max,
             std::vector<double> increments);

  std::uint64_t seed() const noexcept { return seed_; }
  double dt() const noexcept { return dt_; }
  std::int64_t k_min() const noexcept { return k_min_; }
  std::int64_t k_max() const noexcept { return k_max_; }
  double t_min() const noexcept { return static_cast<double>(k_min_) * dt_; }
  double t_max() const noexcept { return static_cast<double>(k_max_) * dt_; }
  std::size_t nodes() const noexcept { return values_.size(); }

  double time(std::int64_t k) const noexcept { return static_cast<double>(k) * dt_; }
  double value(std::int64_t k) const { return values_.at(static_cast<std::size_t>(k - k_min_)); }
  /// omega(t_{k+1}) - omega(t_k).
  double increment(std::int64_t k) const { return increments_.at(static_cast<std::size_t>(k - k_min_)); }

  std::span<const double> values() const noexcept { return values_; }
  std::span<const double> increments() const noexcept { return increments_; }

  /// Grid index of t; throws DomainError when t is not a grid multiple.
  std::int64_t index_of(double t) const;
  /// Total shift (in grid steps) applied since sampling.
  std::int64_t origin_offset() const noexcept { return origin_offset_; }

  double sup_abs() const noexcept;

 private:
  friend WienerPath shift(const WienerPath& path, double s);

  std::uint64_t seed_;
  double dt_;
  std::int64_t k_min_;
  std::int64_t k_max_;
  std::int64_t origin_offset_ = 0;
  std::vector<double> increments_;
  std::vector<double> values_;
};

/// Seeded path on [t_min, t_max] (extended outward to the grid). Forward
/// and backward increments come from two independent streams, each drawn
/// outward from 0, so enlarging the domain keeps the common part intact.
WienerPath sample_wiener(std::uint64_t seed, double t_min, double t_max, double dt);

/// Wiener shift: (theta_s omega)(tau) = omega(tau + s) - omega(s).
/// s must be a grid multiple inside [t_min, t_max].
WienerPath shift(const WienerPath& path, double s);

/// Default backward horizon for the OU warm-up: max(50, 10 T).
double default_backward_horizon(double experiment_length);

/// z(theta_t omega) on the grid of a Wiener path.
///
/// Realized as the exact solution of dz = -z dt + d omega for the piecewise
/// linear interpolant of omega, started at z = 0 at the earliest node:
///   z_{k+1} = e^{-dt} z_k + (1 - e^{-dt}) (omega_{k+1} - omega_k) / dt.
/// Between nodes z is interpolated linearly.
class OUPath {
 public:
  OUPath(double dt, std::int64_t k_min, std::vector<double> z, double path_sup_abs = 0.0);

  double dt() const noexcept { return dt_; }
  std::int64_t k_min() const noexcept { return k_min_; }
  std::int64_t k_max() const noexcept { return k_min_ + static_cast<std::int64_t>(z_.size()) - 1; }
  double t_min() const noexcept { return static_cast<double>(k_min_) * dt_; }
  double t_max() const noexcept { return static_cast<double>(k_max()) * dt_; }

  double z_node(std::int64_t k) const { return z_.at(static_cast<std::size_t>(k - k_min_)); }
  std::span<const double> values() const noexcept { return z_; }

  /// Linear interpolation at absolute time t.
  double z(double t) const;
  /// Exact integral of the interpolant over [a, b] (absolute times).
  double integral(double a, double b) const;
  /// Exact integral of |z| over [a, b].
  double integral_abs(double a, double b) const;
  double max_abs(double a, double b) const;

  /// Distance between the recursion value at t and the stationary integral
  /// truncated at t_min: at most e^{t_min - t} * 2 sup|omega|.
  double truncation_bound(double t) const;

  bool all_finite() const noexcept;

 private:
  // Position in node units relative to k_min; clamps into the domain or throws.
  double position(double t) const;
  double primitive(double x) const;

  double dt_;
  std::int64_t k_min_;
  std::vector<double> z_;
  std::vector<double> prefix_;  // prefix_[j] = integral from t_min to t_min + j dt
  double path_sup_abs_;
};

OUPath ou_path(const WienerPath& path);

/// Direct evaluation of -int_{t_min - t}^0 e^tau (omega(t + tau) - omega(t)) d tau
/// for the piecewise linear path. Independent of the recursion; used to
/// cross-check it.
double stationary_integral(const WienerPath& path, double t);

/// z(theta_{offset} omega) viewed in local time: z_local(t) = z(t + offset dt).
/// Offsets are whole grid steps so shifted views reuse the stored path.
class OUView {
 public:
  OUView(const OUPath& path, std::int64_t offset = 0) : path_(&path), offset_(offset) {}

  const OUPath& path() const noexcept { return *path_; }
  std::int64_t offset() const noexcept { return offset_; }
  double dt() const noexcept { return path_->dt(); }
  double origin() const noexcept { return static_cast<double>(offset_) * path_->dt(); }

  double z(double t) const { return path_->z(origin() + t); }
  double integral(double a, double b) const { return path_->integral(origin() + a, origin() + b); }
  double integral_abs(double a, double b) const { return path_->integral_abs(origin() + a, origin() + b); }
  double max_abs(double a, double b) const { return path_->max_abs(origin() + a, origin() + b); }
  bool covers(double a, double b) const;

  /// View of theta_s applied on top of this one; s must be a grid multiple.
  OUView shifted(double s) const;

 private:
  const OUPath* path_;
  std::int64_t offset_;
};

struct TemperednessReport {
  std::vector<double> times;             // dyadic, positive then negative
  std::vector<double> z_over_t;          // |z(theta_t omega)| / |t|
  std::vector<double> running_mean;      // (1/t) int_0^t z ds
  double threshold = 0.05;
  bool vanishing = false;
};

/// Samples the two temperedness diagnostics at t = +-2^j inside the domain.
/// Verdict, taken on the longer time direction: the final value of each
/// diagnostic is below threshold and not above the median of the earlier
/// samples.
TemperednessReport temperedness_diag(const OUPath& ou, double threshold = 0.05);

}  // namespace plab
