#include "plab/nonlinearity.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "plab/errors.hpp"

namespace plab {

PhiSpec PhiSpec::power_law(double p) {
  PhiSpec s;
  s.kind = Kind::power_law;
  s.p = p;
  s.validate();
  return s;
}

PhiSpec PhiSpec::user_table(std::vector<std::pair<double, double>> points, double p) {
  PhiSpec s;
  s.kind = Kind::user_table;
  s.p = p;
  std::sort(points.begin(), points.end());
  s.table = std::move(points);
  s.validate();
  return s;
}

void PhiSpec::validate() const {
  if (!(p > 1.0) || !std::isfinite(p)) throw DomainError("PhiSpec: p must be > 1");
  if (kind == Kind::power_law) return;
  if (table.size() < 2) throw DomainError("PhiSpec: table needs at least two points");
  for (std::size_t k = 1; k < table.size(); ++k) {
    if (!(table[k].first > table[k - 1].first)) throw DomainError("PhiSpec: table abscissae must be distinct");
    if (!(table[k].second > table[k - 1].second)) throw DomainError("PhiSpec: table must be strictly increasing");
  }
  if (std::abs(phi_eval(*this, 0.0)) > 1e-14) throw DomainError("PhiSpec: table must satisfy Phi(0) = 0");
}

namespace {

// Index of the segment [t[k], t[k+1]] used for u; end segments extend.
std::size_t table_segment(const std::vector<std::pair<double, double>>& t, double u) {
  auto it = std::upper_bound(t.begin(), t.end(), u, [](double x, const auto& pt) { return x < pt.first; });
  std::size_t k = static_cast<std::size_t>(it - t.begin());
  if (k == 0) return 0;
  return std::min(k - 1, t.size() - 2);
}

double table_slope(const std::vector<std::pair<double, double>>& t, std::size_t k) {
  return (t[k + 1].second - t[k].second) / (t[k + 1].first - t[k].first);
}

}  // namespace

double phi_eval(const PhiSpec& spec, double u) {
  if (spec.kind == PhiSpec::Kind::power_law) return signed_power(u, spec.p);
  const std::size_t k = table_segment(spec.table, u);
  return spec.table[k].second + table_slope(spec.table, k) * (u - spec.table[k].first);
}

double phi_prime(const PhiSpec& spec, double u) {
  if (spec.kind == PhiSpec::Kind::power_law) {
    const double a = std::abs(u);
    if (a == 0.0) return 0.0;
    return spec.p * std::pow(a, spec.p - 1.0);
  }
  return table_slope(spec.table, table_segment(spec.table, u));
}

double phi_max_slope(const PhiSpec& spec, double bound) {
  bound = std::abs(bound);
  if (spec.kind == PhiSpec::Kind::power_law) return spec.p * std::pow(bound, spec.p - 1.0);
  const auto& t = spec.table;
  double m = std::max(table_slope(t, table_segment(t, -bound)), table_slope(t, table_segment(t, bound)));
  for (std::size_t k = 0; k + 1 < t.size(); ++k) {
    if (t[k + 1].first >= -bound && t[k].first <= bound) m = std::max(m, table_slope(t, k));
  }
  return m;
}

std::string to_string(ConditionReport::Condition c) {
  return c == ConditionReport::Condition::growth ? "growth" : "monotonicity";
}

namespace {

std::vector<double> magnitude_grid(double u_min, double u_max, int per_decade) {
  if (!(u_min > 0.0) || !(u_max > u_min) || per_decade < 1)
    throw DomainError("condition grid: need 0 < u_min < u_max and per_decade >= 1");
  const int j_lo = static_cast<int>(std::ceil(std::log10(u_min) * per_decade - 1e-9));
  const int j_hi = static_cast<int>(std::floor(std::log10(u_max) * per_decade + 1e-9));
  std::vector<double> out;
  out.reserve(static_cast<std::size_t>(j_hi - j_lo + 1));
  for (int j = j_lo; j <= j_hi; ++j) out.push_back(std::pow(10.0, static_cast<double>(j) / per_decade));
  return out;
}

std::vector<double> symmetric_grid(double u_min, double u_max, int per_decade) {
  const auto mags = magnitude_grid(u_min, u_max, per_decade);
  std::vector<double> out;
  out.reserve(2 * mags.size() + 1);
  for (auto it = mags.rbegin(); it != mags.rend(); ++it) out.push_back(-*it);
  out.push_back(0.0);
  out.insert(out.end(), mags.begin(), mags.end());
  return out;
}

void finish(ConditionReport& r, std::size_t max_witnesses) {
  std::sort(r.violations.begin(), r.violations.end(),
            [](const ConditionWitness& a, const ConditionWitness& b) { return a.margin < b.margin; });
  if (r.violations.size() > max_witnesses) r.violations.resize(max_witnesses);
}

void record(ConditionReport& r, const ConditionWitness& w, bool first) {
  if (first || w.margin < r.worst_margin) {
    r.worst_margin = w.margin;
    r.worst = w;
  }
  if (w.margin < 0.0) r.violations.push_back(w);
}

}  // namespace

ConditionReport verify_growth(const PhiSpec& spec, double c1, double c2, const GrowthGrid& grid) {
  spec.validate();
  if (!(c1 > 0.0) || !(c2 > 0.0)) throw DomainError("verify_growth: constants must be positive");
  ConditionReport r;
  r.condition = ConditionReport::Condition::growth;
  r.c1 = c1;
  r.c2 = c2;
  const double p = spec.p;
  const double lower_coeff = (p + 1.0) * (p + 1.0) / 4.0 * c2;
  for (double u : symmetric_grid(grid.u_min, grid.u_max, grid.per_decade)) {
    const double a = std::pow(std::abs(u), p - 1.0);
    const double d = phi_prime(spec, u);
    const double lo = lower_coeff * a;
    const double hi = c1 * (1.0 + a);
    const double scale = std::max({1.0, std::abs(d), lo, hi});
    const double m_lo = d - lo + grid.rel_tol * scale;
    const double m_hi = hi - d + grid.rel_tol * scale;
    record(r, {u, 0.0, m_lo, "lower"}, r.samples == 0);
    record(r, {u, 0.0, m_hi, "upper"}, false);
    ++r.samples;
  }
  finish(r, grid.max_witnesses);
  return r;
}

ConditionReport verify_monotonicity(const PhiSpec& spec, double k, double a_bound, const PairGrid& grid) {
  spec.validate();
  if (!(k > 0.0)) throw DomainError("verify_monotonicity: k must be positive");
  if (!(a_bound >= 0.0)) throw DomainError("verify_monotonicity: a_bound must be >= 0");
  ConditionReport r;
  r.condition = ConditionReport::Condition::monotonicity;
  r.k = k;
  r.a_bound = a_bound;
  const double p = spec.p;

  auto check = [&](double u, double v) {
    const double lhs = (phi_eval(spec, u) - phi_eval(spec, v)) * (u - v);
    const double rhs = k * std::pow(std::abs(u - v), p + 1.0) - a_bound;
    const double scale = std::max({1.0, std::abs(lhs), std::abs(rhs)});
    record(r, {u, v, lhs - rhs + grid.rel_tol * scale, "pair"}, r.samples == 0);
    ++r.samples;
  };

  const auto pts = symmetric_grid(grid.u_min, grid.u_max, grid.per_decade);
  for (double u : pts)
    for (double v : pts) check(u, v);

  std::mt19937_64 rng(grid.seed);
  std::uniform_real_distribution<double> dist(-grid.u_max, grid.u_max);
  for (std::size_t n = 0; n < grid.random_pairs; ++n) {
    const double u = dist(rng);
    const double v = dist(rng);
    check(u, v);
  }
  finish(r, grid.max_witnesses);
  return r;
}

PhiConstants suggested_constants(const PhiSpec& spec) {
  if (spec.kind != PhiSpec::Kind::power_law)
    throw UnsupportedError("suggested_constants: only the power law ships with constants");
  const double p = spec.p;
  return {p, 4.0 * p / ((p + 1.0) * (p + 1.0)), std::pow(2.0, 1.0 - p)};
}

}  // namespace plab
