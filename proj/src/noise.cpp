#include "plab/noise.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <string>

#include "plab/errors.hpp"

namespace plab {

namespace {

constexpr double kGridTol = 1e-7;

std::int64_t grid_index(double t, double dt, const char* where) {
  const double x = t / dt;
  const double k = std::round(x);
  if (!std::isfinite(x) || std::abs(x - k) > kGridTol * std::max(1.0, std::abs(x)))
    throw DomainError(std::string(where) + ": time " + std::to_string(t) + " is not a multiple of dt=" +
                      std::to_string(dt));
  return static_cast<std::int64_t>(k);
}

std::vector<double> cumulative_values(std::int64_t k_min, std::int64_t k_max, const std::vector<double>& inc) {
  std::vector<double> v(static_cast<std::size_t>(k_max - k_min + 1), 0.0);
  const auto origin = static_cast<std::size_t>(-k_min);
  for (std::size_t j = origin; j + 1 < v.size(); ++j) v[j + 1] = v[j] + inc[j];
  for (std::size_t j = origin; j > 0; --j) v[j - 1] = v[j] - inc[j - 1];
  return v;
}

}  // namespace

WienerPath::WienerPath(std::uint64_t seed, double dt, std::int64_t k_min, std::int64_t k_max,
                       std::vector<double> increments)
    : seed_(seed), dt_(dt), k_min_(k_min), k_max_(k_max), increments_(std::move(increments)) {
  if (!(dt > 0.0) || k_min > 0 || k_max < 0 || k_max - k_min < 1)
    throw DomainError("WienerPath: degenerate grid");
  if (increments_.size() != static_cast<std::size_t>(k_max - k_min))
    throw DomainError("WienerPath: increment count does not match the grid");
  values_ = cumulative_values(k_min_, k_max_, increments_);
}

std::int64_t WienerPath::index_of(double t) const {
  const std::int64_t k = grid_index(t, dt_, "WienerPath::index_of");
  if (k < k_min_ || k > k_max_) throw DomainError("WienerPath: time " + std::to_string(t) + " outside the path domain");
  return k;
}

double WienerPath::sup_abs() const noexcept {
  double m = 0.0;
  for (double x : values_) m = std::max(m, std::abs(x));
  return m;
}

WienerPath sample_wiener(std::uint64_t seed, double t_min, double t_max, double dt) {
  if (!(dt > 0.0) || !std::isfinite(t_min) || !std::isfinite(t_max) || t_min > 0.0 || t_max < 0.0)
    throw DomainError("sample_wiener: need t_min <= 0 <= t_max and dt > 0");
  const auto k_min = -static_cast<std::int64_t>(std::ceil(-t_min / dt - kGridTol));
  const auto k_max = static_cast<std::int64_t>(std::ceil(t_max / dt - kGridTol));
  if (k_max - k_min < 1) throw DomainError("sample_wiener: degenerate grid");

  const auto lo = static_cast<std::uint32_t>(seed);
  const auto hi = static_cast<std::uint32_t>(seed >> 32);
  std::seed_seq fwd_seq{lo, hi, 0u};
  std::seed_seq bwd_seq{lo, hi, 1u};
  std::mt19937_64 fwd(fwd_seq);
  std::mt19937_64 bwd(bwd_seq);
  std::normal_distribution<double> gauss(0.0, std::sqrt(dt));

  std::vector<double> inc(static_cast<std::size_t>(k_max - k_min));
  const auto origin = static_cast<std::size_t>(-k_min);
  for (std::size_t j = origin; j < inc.size(); ++j) inc[j] = gauss(fwd);
  gauss.reset();
  for (std::size_t j = origin; j > 0; --j) inc[j - 1] = gauss(bwd);
  return WienerPath(seed, dt, k_min, k_max, std::move(inc));
}

WienerPath shift(const WienerPath& path, double s) {
  const std::int64_t m = grid_index(s, path.dt(), "shift");
  if (m < path.k_min() || m > path.k_max())
    throw DomainError("shift: s=" + std::to_string(s) + " outside the path domain [" + std::to_string(path.t_min()) +
                      ", " + std::to_string(path.t_max()) + "]");
  std::vector<double> inc(path.increments().begin(), path.increments().end());
  const std::int64_t new_min = path.k_min() - m;
  const std::int64_t new_max = path.k_max() - m;
  if (new_max - new_min < 1 || new_min > 0 || new_max < 0) throw DomainError("shift: shifted domain is degenerate");
  WienerPath out(path.seed(), path.dt(), new_min, new_max, std::move(inc));
  out.origin_offset_ = path.origin_offset() + m;
  return out;
}

double default_backward_horizon(double experiment_length) { return std::max(50.0, 10.0 * experiment_length); }

// ---------------------------------------------------------------------------

OUPath::OUPath(double dt, std::int64_t k_min, std::vector<double> z, double path_sup_abs)
    : dt_(dt), k_min_(k_min), z_(std::move(z)), path_sup_abs_(path_sup_abs) {
  if (!(dt > 0.0) || z_.size() < 2) throw DomainError("OUPath: degenerate grid");
  prefix_.assign(z_.size(), 0.0);
  for (std::size_t j = 1; j < z_.size(); ++j) prefix_[j] = prefix_[j - 1] + 0.5 * dt_ * (z_[j - 1] + z_[j]);
}

double OUPath::position(double t) const {
  const double x = t / dt_ - static_cast<double>(k_min_);
  const double last = static_cast<double>(z_.size() - 1);
  if (x < -1e-9 || x > last + 1e-9 || !std::isfinite(x))
    throw DomainError("OU path queried at t=" + std::to_string(t) + " outside [" + std::to_string(t_min()) + ", " +
                      std::to_string(t_max()) + "]");
  return std::clamp(x, 0.0, last);
}

double OUPath::z(double t) const {
  const double x = position(t);
  auto j = static_cast<std::size_t>(x);
  if (j + 1 >= z_.size()) return z_.back();
  const double f = x - static_cast<double>(j);
  return z_[j] + f * (z_[j + 1] - z_[j]);
}

double OUPath::primitive(double x) const {
  auto j = static_cast<std::size_t>(x);
  if (j + 1 >= z_.size()) return prefix_.back();
  const double f = x - static_cast<double>(j);
  return prefix_[j] + dt_ * (f * z_[j] + 0.5 * f * f * (z_[j + 1] - z_[j]));
}

double OUPath::integral(double a, double b) const { return primitive(position(b)) - primitive(position(a)); }

double OUPath::integral_abs(double a, double b) const {
  double sign = 1.0;
  if (b < a) {
    std::swap(a, b);
    sign = -1.0;
  }
  const double xa = position(a);
  const double xb = position(b);
  double total = 0.0;
  auto j = static_cast<std::size_t>(xa);
  while (static_cast<double>(j) < xb && j + 1 < z_.size()) {
    const double u0 = std::max(xa - static_cast<double>(j), 0.0);
    const double u1 = std::min(xb - static_cast<double>(j), 1.0);
    if (u1 > u0) {
      const double d = z_[j + 1] - z_[j];
      const double za = z_[j] + u0 * d;
      const double zb = z_[j] + u1 * d;
      const double len = (u1 - u0) * dt_;
      if (za * zb >= 0.0) {
        total += 0.5 * (std::abs(za) + std::abs(zb)) * len;
      } else {
        const double r = za / (za - zb);
        total += 0.5 * len * (std::abs(za) * r + std::abs(zb) * (1.0 - r));
      }
    }
    ++j;
  }
  return sign * total;
}

double OUPath::max_abs(double a, double b) const {
  if (b < a) std::swap(a, b);
  double m = std::max(std::abs(z(a)), std::abs(z(b)));
  const double xa = position(a);
  const double xb = position(b);
  for (auto j = static_cast<std::size_t>(std::ceil(xa)); static_cast<double>(j) <= xb && j < z_.size(); ++j)
    m = std::max(m, std::abs(z_[j]));
  return m;
}

double OUPath::truncation_bound(double t) const { return std::exp(t_min() - t) * 2.0 * path_sup_abs_; }

bool OUPath::all_finite() const noexcept {
  return std::all_of(z_.begin(), z_.end(), [](double x) { return std::isfinite(x); });
}

OUPath ou_path(const WienerPath& path) {
  const double dt = path.dt();
  const double decay = std::exp(-dt);
  const double gain = -std::expm1(-dt) / dt;
  const auto inc = path.increments();
  std::vector<double> z(path.nodes(), 0.0);
  for (std::size_t j = 0; j < inc.size(); ++j) z[j + 1] = decay * z[j] + gain * inc[j];
  return OUPath(dt, path.k_min(), std::move(z), path.sup_abs());
}

double stationary_integral(const WienerPath& path, double t) {
  const std::int64_t kt = path.index_of(t);
  const double h = path.dt();
  const double eh = std::exp(h);
  const double wt = path.value(kt);
  double acc = 0.0;
  for (std::int64_t k = kt - 1; k >= path.k_min(); --k) {
    const double w0 = path.value(k);
    const double slope = (path.value(k + 1) - w0) / h;
    const double weight = std::exp(static_cast<double>(k - kt) * h);
    if (weight == 0.0) break;
    acc += weight * ((w0 - wt) * (eh - 1.0) + slope * (h * eh - eh + 1.0));
  }
  return -acc;
}

bool OUView::covers(double a, double b) const {
  const double lo = origin() + std::min(a, b);
  const double hi = origin() + std::max(a, b);
  const double tol = 1e-9 * path_->dt();
  return lo >= path_->t_min() - tol && hi <= path_->t_max() + tol;
}

OUView OUView::shifted(double s) const { return OUView(*path_, offset_ + grid_index(s, path_->dt(), "OUView::shifted")); }

// ---------------------------------------------------------------------------

namespace {

bool trend_vanishes(const std::vector<double>& seq, double threshold) {
  if (seq.empty()) return false;
  const double last = seq.back();
  if (!(last < threshold)) return false;
  if (seq.size() == 1) return true;
  std::vector<double> earlier(seq.begin(), seq.end() - 1);
  std::nth_element(earlier.begin(), earlier.begin() + static_cast<std::ptrdiff_t>(earlier.size() / 2), earlier.end());
  return last <= earlier[earlier.size() / 2];
}

}  // namespace

TemperednessReport temperedness_diag(const OUPath& ou, double threshold) {
  TemperednessReport r;
  r.threshold = threshold;
  std::vector<double> fwd_z, fwd_mean, bwd_z, bwd_mean;
  for (double t = 1.0; t <= ou.t_max() + 1e-12; t *= 2.0) {
    const double zt = std::abs(ou.z(t)) / t;
    const double mean = std::abs(ou.integral(0.0, t) / t);
    r.times.push_back(t);
    r.z_over_t.push_back(zt);
    r.running_mean.push_back(mean);
    fwd_z.push_back(zt);
    fwd_mean.push_back(mean);
  }
  for (double t = -1.0; t >= ou.t_min() - 1e-12; t *= 2.0) {
    const double zt = std::abs(ou.z(t)) / -t;
    const double mean = std::abs(ou.integral(0.0, t) / t);
    r.times.push_back(t);
    r.z_over_t.push_back(zt);
    r.running_mean.push_back(mean);
    bwd_z.push_back(zt);
    bwd_mean.push_back(mean);
  }
  // Judge on the longer direction(s); a short warm-up side says nothing about the limit.
  bool ok = !r.times.empty();
  if (!fwd_z.empty() && fwd_z.size() >= bwd_z.size())
    ok = ok && trend_vanishes(fwd_z, threshold) && trend_vanishes(fwd_mean, threshold);
  if (!bwd_z.empty() && bwd_z.size() >= fwd_z.size())
    ok = ok && trend_vanishes(bwd_z, threshold) && trend_vanishes(bwd_mean, threshold);
  for (double x : ou.values())
    if (!std::isfinite(x)) ok = false;
  r.vanishing = ok;
  return r;
}

}  // namespace plab
