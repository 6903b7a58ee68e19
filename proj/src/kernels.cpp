#include "plab/kernels.hpp"

#include <omp.h>

#include <algorithm>
#include <cmath>
#include <limits>

#include "plab/errors.hpp"

namespace plab {

LatticeVector rhs_reference(const ModelParams& params, double z, const LatticeVector& v) {
  const double az = params.alpha * z;
  LatticeVector w = std::exp(az) * v;
  for (double& x : w.values()) x = phi_eval(params.phi, x);
  LatticeVector out = -std::exp(-az) * apply_A(w);
  out += (az - params.lambda) * v;
  LatticeVector reaction = v;
  for (double& x : reaction.values()) x = signed_power(x, params.p);
  out -= params.lambda * std::exp(params.alpha * (params.p - 1.0) * z) * reaction;
  out += std::exp(-az) * static_cast<const LatticeVector&>(params.g);
  return out;
}

namespace {

struct Coefficients {
  double up;        // e^{az}
  double down;      // e^{-az}
  double linear;    // az - lambda
  double reaction;  // lambda e^{a(p-1)z}
  bool reuse_phi;   // power-law Phi with the reaction exponent
};

Coefficients coefficients(const ModelParams& params, double z) {
  const double az = params.alpha * z;
  return {std::exp(az), std::exp(-az), az - params.lambda,
          params.lambda * std::exp(params.alpha * (params.p - 1.0) * z),
          params.phi.kind == PhiSpec::Kind::power_law && params.phi.p == params.p};
}

inline double site_value(const Coefficients& c, const ModelParams& params, std::span<const double> v,
                         std::span<const double> phi, std::span<const double> g, std::size_t i) {
  const std::size_t n = v.size();
  const double left = i > 0 ? phi[i - 1] : 0.0;
  const double right = i + 1 < n ? phi[i + 1] : 0.0;
  const double lap = 2.0 * phi[i] - left - right;
  const double react = c.reuse_phi ? params.lambda * c.down * phi[i] : c.reaction * signed_power(v[i], params.p);
  return -c.down * lap + c.linear * v[i] - react + c.down * g[i];
}

}  // namespace

void rhs_serial(const ModelParams& params, double z, std::span<const double> v, std::span<double> out,
                std::span<double> scratch) {
  const Coefficients c = coefficients(params, z);
  const std::size_t n = v.size();
  const auto g = params.g.values();
  if (c.reuse_phi) {
    for (std::size_t i = 0; i < n; ++i) scratch[i] = signed_power(c.up * v[i], params.p);
  } else {
    for (std::size_t i = 0; i < n; ++i) scratch[i] = phi_eval(params.phi, c.up * v[i]);
  }
  const std::span<const double> phi(scratch.data(), n);
  for (std::size_t i = 0; i < n; ++i) out[i] = site_value(c, params, v, phi, g, i);
}

void rhs_parallel(const ModelParams& params, double z, std::span<const double> v, std::span<double> out,
                  std::span<double> scratch) {
  const Coefficients c = coefficients(params, z);
  const auto n = static_cast<std::ptrdiff_t>(v.size());
  const auto g = params.g.values();
  const std::span<const double> phi(scratch.data(), v.size());
#pragma omp parallel
  {
    if (c.reuse_phi) {
#pragma omp for schedule(static)
      for (std::ptrdiff_t i = 0; i < n; ++i) scratch[i] = signed_power(c.up * v[i], params.p);
    } else {
#pragma omp for schedule(static)
      for (std::ptrdiff_t i = 0; i < n; ++i) scratch[i] = phi_eval(params.phi, c.up * v[i]);
    }
#pragma omp for schedule(static)
    for (std::ptrdiff_t i = 0; i < n; ++i)
      out[i] = site_value(c, params, v, phi, g, static_cast<std::size_t>(i));
  }
}

void rhs_dispatch(KernelPolicy policy, const ModelParams& params, double z, std::span<const double> v,
                  std::span<double> out, std::span<double> scratch) {
  switch (policy) {
    case KernelPolicy::reference: {
      const LatticeVector in(params.half_width, std::vector<double>(v.begin(), v.end()));
      const LatticeVector r = rhs_reference(params, z, in);
      std::copy(r.values().begin(), r.values().end(), out.begin());
      return;
    }
    case KernelPolicy::serial:
      rhs_serial(params, z, v, out, scratch);
      return;
    case KernelPolicy::parallel:
      rhs_parallel(params, z, v, out, scratch);
      return;
    case KernelPolicy::automatic:
      if (v.size() >= kParallelSiteThreshold && omp_get_max_threads() > 1 && !omp_in_parallel())
        rhs_parallel(params, z, v, out, scratch);
      else
        rhs_serial(params, z, v, out, scratch);
      return;
  }
}

namespace {

double distance(const LatticeVector& x, const LatticeVector& y) {
  const auto a = x.values();
  const auto b = y.values();
  double s = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) {
    const double d = a[k] - b[k];
    s += d * d;
  }
  return std::sqrt(s);
}

void check_sets(std::span<const LatticeVector> xs, std::span<const LatticeVector> ys) {
  if (xs.empty() || ys.empty()) throw DomainError("hausdorff_semidistance: empty set");
  const int n = xs.front().half_width();
  for (const auto& x : xs)
    if (x.half_width() != n) throw DomainError("hausdorff_semidistance: mixed half-widths");
  for (const auto& y : ys)
    if (y.half_width() != n) throw DomainError("hausdorff_semidistance: mixed half-widths");
}

double nearest(const LatticeVector& x, std::span<const LatticeVector> ys) {
  double best = std::numeric_limits<double>::infinity();
  for (const auto& y : ys) best = std::min(best, distance(x, y));
  return best;
}

}  // namespace

double semidistance_serial(std::span<const LatticeVector> xs, std::span<const LatticeVector> ys) {
  check_sets(xs, ys);
  double worst = 0.0;
  for (const auto& x : xs) worst = std::max(worst, nearest(x, ys));
  return worst;
}

double semidistance_parallel(std::span<const LatticeVector> xs, std::span<const LatticeVector> ys) {
  check_sets(xs, ys);
  const auto n = static_cast<std::ptrdiff_t>(xs.size());
  double worst = 0.0;
#pragma omp parallel for reduction(max : worst) schedule(static)
  for (std::ptrdiff_t k = 0; k < n; ++k) worst = std::max(worst, nearest(xs[static_cast<std::size_t>(k)], ys));
  return worst;
}

}  // namespace plab
