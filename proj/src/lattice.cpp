#include "plab/lattice.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "plab/errors.hpp"

namespace plab {

LatticeVector::LatticeVector(int half_width, double fill) : half_width_(half_width) {
  if (half_width < 0) throw DomainError("LatticeVector: negative half-width");
  values_.assign(static_cast<std::size_t>(2 * half_width + 1), fill);
}

LatticeVector::LatticeVector(int half_width, std::vector<double> values)
    : half_width_(half_width), values_(std::move(values)) {
  if (half_width < 0) throw DomainError("LatticeVector: negative half-width");
  if (values_.size() != static_cast<std::size_t>(2 * half_width + 1))
    throw DomainError("LatticeVector: expected " + std::to_string(2 * half_width + 1) +
                      " values, got " + std::to_string(values_.size()));
}

LatticeVector LatticeVector::unit(int half_width, int site) {
  if (site < -half_width || site > half_width) throw DomainError("LatticeVector::unit: site outside lattice");
  LatticeVector e(half_width);
  e[site] = 1.0;
  return e;
}

double LatticeVector::at_or_zero(int site) const noexcept {
  if (site < -half_width_ || site > half_width_) return 0.0;
  return (*this)[site];
}

bool LatticeVector::all_finite() const noexcept {
  return std::all_of(values_.begin(), values_.end(), [](double x) { return std::isfinite(x); });
}

void require_same_width(const LatticeVector& a, const LatticeVector& b, const char* where) {
  if (a.half_width() != b.half_width())
    throw DomainError(std::string(where) + ": half-width mismatch (" + std::to_string(a.half_width()) +
                      " vs " + std::to_string(b.half_width()) + ")");
}

LatticeVector& LatticeVector::operator+=(const LatticeVector& other) {
  require_same_width(*this, other, "LatticeVector::operator+=");
  for (std::size_t k = 0; k < values_.size(); ++k) values_[k] += other.values_[k];
  return *this;
}

LatticeVector& LatticeVector::operator-=(const LatticeVector& other) {
  require_same_width(*this, other, "LatticeVector::operator-=");
  for (std::size_t k = 0; k < values_.size(); ++k) values_[k] -= other.values_[k];
  return *this;
}

LatticeVector& LatticeVector::operator*=(double s) {
  for (double& x : values_) x *= s;
  return *this;
}

bool SiteSequence::is_nonnegative() const noexcept {
  const auto v = values();
  return std::all_of(v.begin(), v.end(), [](double x) { return x >= 0.0; });
}

LatticeVector apply_B(const LatticeVector& u) {
  const int n = u.half_width();
  LatticeVector out(n);
  for (int i = -n; i <= n; ++i) out[i] = u.at_or_zero(i + 1) - u[i];
  return out;
}

LatticeVector apply_Bstar(const LatticeVector& u) {
  const int n = u.half_width();
  LatticeVector out(n);
  for (int i = -n; i <= n; ++i) out[i] = u.at_or_zero(i - 1) - u[i];
  return out;
}

LatticeVector apply_A(const LatticeVector& u) {
  const int n = u.half_width();
  LatticeVector out(n);
  for (int i = -n; i <= n; ++i) out[i] = -u.at_or_zero(i - 1) + 2.0 * u[i] - u.at_or_zero(i + 1);
  return out;
}

LatticeVector apply_B_extended(const LatticeVector& u) {
  const int n = u.half_width();
  LatticeVector out(n + 1);
  for (int i = -n - 1; i <= n + 1; ++i) out[i] = u.at_or_zero(i + 1) - u.at_or_zero(i);
  return out;
}

double inner_product(const LatticeVector& u, const LatticeVector& w) {
  require_same_width(u, w, "inner_product");
  const auto a = u.values();
  const auto b = w.values();
  double s = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) s += a[k] * b[k];
  return s;
}

double norm_l2_squared(const LatticeVector& u) {
  double s = 0.0;
  for (double x : u.values()) s += x * x;
  return s;
}

double norm_l2(const LatticeVector& u) { return std::sqrt(norm_l2_squared(u)); }

double sum_abs_pow(const LatticeVector& u, double q) {
  if (!(q >= 1.0)) throw DomainError("norm exponent must satisfy q >= 1, got " + std::to_string(q));
  double s = 0.0;
  if (q == 2.0) return norm_l2_squared(u);
  if (q == 3.0) {
    for (double x : u.values()) s += std::abs(x) * x * x;
    return s;
  }
  for (double x : u.values()) s += std::pow(std::abs(x), q);
  return s;
}

double norm_lp(const LatticeVector& u, double q) {
  const double s = sum_abs_pow(u, q);
  if (q == 1.0) return s;
  if (q == 2.0) return std::sqrt(s);
  return std::pow(s, 1.0 / q);
}

double norm_l1(const LatticeVector& u) {
  double s = 0.0;
  for (double x : u.values()) s += std::abs(x);
  return s;
}

double norm_sup(const LatticeVector& u) {
  double m = 0.0;
  for (double x : u.values()) m = std::max(m, std::abs(x));
  return m;
}

}  // namespace plab
