#pragma once

#include <cmath>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

namespace plab {

/// The diffusion nonlinearity Phi inside the discrete Laplacian.
///
/// power_law: Phi(u) = u |u|^{p-1}.
/// user_table: monotone piecewise-linear interpolant through (u_k, Phi_k),
/// extended linearly with the end slopes. Must pass through (0, 0).
struct PhiSpec {
  enum class Kind { power_law, user_table };

  Kind kind = Kind::power_law;
  double p = 2.0;
  std::vector<std::pair<double, double>> table;

  static PhiSpec power_law(double p);
  static PhiSpec user_table(std::vector<std::pair<double, double>> points, double p);

  /// Throws DomainError when the spec breaks Phi(0)=0, monotonicity or p > 1.
  void validate() const;
};

double phi_eval(const PhiSpec& spec, double u);
double phi_prime(const PhiSpec& spec, double u);

/// sup_{|u| <= bound} Phi'(u).
double phi_max_slope(const PhiSpec& spec, double bound);

/// Signed power |u|^{p-1} u, with fast paths for p = 2 and p = 3.
inline double signed_power(double u, double p);

struct ConditionWitness {
  double u = 0.0;
  double v = 0.0;  // unused by the growth check
  double margin = 0.0;
  std::string bound;  // "lower" / "upper" for growth, "pair" for monotonicity
};

struct ConditionReport {
  enum class Condition { growth, monotonicity };

  Condition condition = Condition::growth;
  double c1 = 0.0;
  double c2 = 0.0;
  double k = 0.0;
  double a_bound = 0.0;
  std::size_t samples = 0;
  /// Smallest margin seen (with the rounding allowance added). pass() <=> >= 0.
  double worst_margin = 0.0;
  ConditionWitness worst;
  /// Violating points, most negative first, capped at max_witnesses.
  std::vector<ConditionWitness> violations;

  bool pass() const noexcept { return violations.empty(); }
};

std::string to_string(ConditionReport::Condition c);

/// Sample grid for the growth condition: magnitudes 10^{j/per_decade}
/// covering [u_min, u_max], both signs, plus 0.
struct GrowthGrid {
  double u_min = 1e-3;
  double u_max = 100.0;
  int per_decade = 200;
  /// Relative rounding allowance added to every margin.
  double rel_tol = 1e-12;
  std::size_t max_witnesses = 32;
};

/// Pair grid for the monotonicity condition: all pairs drawn from the
/// symmetric magnitude grid, plus seeded uniform random pairs.
struct PairGrid {
  double u_min = 1e-3;
  double u_max = 100.0;
  int per_decade = 4;
  std::size_t random_pairs = 2000;
  std::uint64_t seed = 20240601;
  double rel_tol = 1e-12;
  std::size_t max_witnesses = 32;
};

/// Checks ((p+1)^2/4) c2 |u|^{p-1} <= Phi'(u) <= c1 (1 + |u|^{p-1}).
ConditionReport verify_growth(const PhiSpec& spec, double c1, double c2, const GrowthGrid& grid = {});

/// Checks (Phi(u)-Phi(v))(u-v) >= k |u-v|^{p+1} - a_bound.
ConditionReport verify_monotonicity(const PhiSpec& spec, double k, double a_bound, const PairGrid& grid = {});

struct PhiConstants {
  double c1;
  double c2;
  double k;
};

/// c1 = p, c2 = 4p/(p+1)^2, k = 2^{1-p}. Power law only.
PhiConstants suggested_constants(const PhiSpec& spec);

// ---------------------------------------------------------------------------

inline double signed_power(double u, double p) {
  if (p == 2.0) return u * (u < 0.0 ? -u : u);
  if (p == 3.0) return u * u * u;
  const double a = u < 0.0 ? -u : u;
  return a == 0.0 ? 0.0 : u * std::pow(a, p - 1.0);
}

}  // namespace plab
