#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace plab {

/// Finite truncation of an l^2(Z) sequence on the sites -N..N.
///
/// The vector stands for its zero extension: every site with |i| > N is
/// implicitly 0. All operators below use that convention, so the
/// truncated problem is the homogeneous Dirichlet problem on {-N..N}.
class LatticeVector {
 public:
  LatticeVector() = default;
  explicit LatticeVector(int half_width, double fill = 0.0);
  LatticeVector(int half_width, std::vector<double> values);

  static LatticeVector unit(int half_width, int site);

  int half_width() const noexcept { return half_width_; }
  std::size_t size() const noexcept { return values_.size(); }

  /// Site-indexed access, site in [-N, N].
  double& operator[](int site) { return values_[static_cast<std::size_t>(site + half_width_)]; }
  double operator[](int site) const { return values_[static_cast<std::size_t>(site + half_width_)]; }

  /// Zero-extended read: 0 for |site| > N.
  double at_or_zero(int site) const noexcept;

  std::span<double> values() noexcept { return values_; }
  std::span<const double> values() const noexcept { return values_; }
  const std::vector<double>& storage() const noexcept { return values_; }

  bool all_finite() const noexcept;

  LatticeVector& operator+=(const LatticeVector& other);
  LatticeVector& operator-=(const LatticeVector& other);
  LatticeVector& operator*=(double s);

  friend LatticeVector operator+(LatticeVector a, const LatticeVector& b) { return a += b; }
  friend LatticeVector operator-(LatticeVector a, const LatticeVector& b) { return a -= b; }
  friend LatticeVector operator*(double s, LatticeVector a) { return a *= s; }
  friend LatticeVector operator*(LatticeVector a, double s) { return a *= s; }

  friend bool operator==(const LatticeVector&, const LatticeVector&) = default;

 private:
  int half_width_ = 0;
  std::vector<double> values_ = std::vector<double>(1, 0.0);
};

/// Per-site coefficient sequence (forcing g, monotonicity defects a_i).
class SiteSequence : public LatticeVector {
 public:
  using LatticeVector::LatticeVector;
  explicit SiteSequence(LatticeVector v) : LatticeVector(std::move(v)) {}

  bool is_nonnegative() const noexcept;
};

// Operators. Outputs have the same half-width as the input.

/// (Bu)_i = u_{i+1} - u_i.
LatticeVector apply_B(const LatticeVector& u);
/// (B*u)_i = u_{i-1} - u_i.
LatticeVector apply_Bstar(const LatticeVector& u);
/// (Au)_i = -u_{i-1} + 2u_i - u_{i+1}.
LatticeVector apply_A(const LatticeVector& u);

/// B applied to the zero extension of u, kept on its full support: the
/// result has half-width N+1 (site N+1 is always 0). With this form
/// (Au, u) = ||B u||^2 holds exactly, since the edge (-N-1, -N) is kept.
LatticeVector apply_B_extended(const LatticeVector& u);

double inner_product(const LatticeVector& u, const LatticeVector& w);
double norm_l2(const LatticeVector& u);
double norm_l2_squared(const LatticeVector& u);
/// (sum |u_i|^q)^(1/q); throws DomainError for q < 1.
double norm_lp(const LatticeVector& u, double q);
/// sum |u_i|^q, without the root.
double sum_abs_pow(const LatticeVector& u, double q);
double norm_l1(const LatticeVector& u);
double norm_sup(const LatticeVector& u);

void require_same_width(const LatticeVector& a, const LatticeVector& b, const char* where);

}  // namespace plab
