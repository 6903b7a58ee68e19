#include "plab/integrator.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "plab/errors.hpp"

namespace plab {

namespace {

// Dormand-Prince 5(4) tableau.
constexpr double c2 = 1.0 / 5.0, c3 = 3.0 / 10.0, c4 = 4.0 / 5.0, c5 = 8.0 / 9.0;
constexpr double a21 = 1.0 / 5.0;
constexpr double a31 = 3.0 / 40.0, a32 = 9.0 / 40.0;
constexpr double a41 = 44.0 / 45.0, a42 = -56.0 / 15.0, a43 = 32.0 / 9.0;
constexpr double a51 = 19372.0 / 6561.0, a52 = -25360.0 / 2187.0, a53 = 64448.0 / 6561.0, a54 = -212.0 / 729.0;
constexpr double a61 = 9017.0 / 3168.0, a62 = -355.0 / 33.0, a63 = 46732.0 / 5247.0, a64 = 49.0 / 176.0,
                 a65 = -5103.0 / 18656.0;
constexpr double a71 = 35.0 / 384.0, a73 = 500.0 / 1113.0, a74 = 125.0 / 192.0, a75 = -2187.0 / 6784.0,
                 a76 = 11.0 / 84.0;
constexpr double e1 = 71.0 / 57600.0, e3 = -71.0 / 16695.0, e4 = 71.0 / 1920.0, e5 = -17253.0 / 339200.0,
                 e6 = 22.0 / 525.0, e7 = -1.0 / 40.0;

// PI controller on the error-per-unit-step ratio (err/h = O(h^4)).
constexpr double kSafety = 0.9;
constexpr double kBeta = 0.04;
constexpr double kExpo = 0.25 - 0.75 * kBeta;
constexpr double kFacMin = 0.2;
constexpr double kFacMax = 10.0;
constexpr double kMaxExponent = 700.0;

class Stepper {
 public:
  Stepper(const OUView& ou, const ModelParams& params, KernelPolicy kernel)
      : ou_(ou), params_(params), kernel_(kernel), n_(static_cast<std::size_t>(2 * params.half_width + 1)) {
    for (auto* v : {&k1_, &k2_, &k3_, &k4_, &k5_, &k6_, &k7_, &stage_, &ynew_, &err_, &scratch_}) v->assign(n_, 0.0);
  }

  std::size_t evaluations() const noexcept { return evaluations_; }

  // Returns false when the output is not finite.
  bool eval(double t, const std::vector<double>& y, std::vector<double>& out) {
    const double z = ou_.z(t);
    const double az = params_.alpha * std::abs(z);
    if (az > kMaxExponent || az * std::max(1.0, params_.p - 1.0) > kMaxExponent)
      throw BlowUpError("exponential weight e^{alpha z} overflows (z=" + std::to_string(z) + ")", t);
    rhs_dispatch(kernel_, params_, z, y, out, scratch_);
    ++evaluations_;
    return std::all_of(out.begin(), out.end(), [](double x) { return std::isfinite(x); });
  }

  // One trial step from (t, y) with k1 = f(t, y) already in place.
  // Returns the error ratio (err per unit step over tol), or +inf on a
  // non-finite stage.
  double trial(double t, const std::vector<double>& y, double h, double tol) {
    auto combine = [&](auto&& coeffs) {
      for (std::size_t i = 0; i < n_; ++i) stage_[i] = y[i] + h * coeffs(i);
    };
    combine([&](std::size_t i) { return a21 * k1_[i]; });
    if (!eval(t + c2 * h, stage_, k2_)) return inf();
    combine([&](std::size_t i) { return a31 * k1_[i] + a32 * k2_[i]; });
    if (!eval(t + c3 * h, stage_, k3_)) return inf();
    combine([&](std::size_t i) { return a41 * k1_[i] + a42 * k2_[i] + a43 * k3_[i]; });
    if (!eval(t + c4 * h, stage_, k4_)) return inf();
    combine([&](std::size_t i) { return a51 * k1_[i] + a52 * k2_[i] + a53 * k3_[i] + a54 * k4_[i]; });
    if (!eval(t + c5 * h, stage_, k5_)) return inf();
    combine([&](std::size_t i) { return a61 * k1_[i] + a62 * k2_[i] + a63 * k3_[i] + a64 * k4_[i] + a65 * k5_[i]; });
    if (!eval(t + h, stage_, k6_)) return inf();
    for (std::size_t i = 0; i < n_; ++i)
      ynew_[i] = y[i] + h * (a71 * k1_[i] + a73 * k3_[i] + a74 * k4_[i] + a75 * k5_[i] + a76 * k6_[i]);
    if (!eval(t + h, ynew_, k7_)) return inf();

    double worst = 0.0;
    for (std::size_t i = 0; i < n_; ++i) {
      const double e = h * (e1 * k1_[i] + e3 * k3_[i] + e4 * k4_[i] + e5 * k5_[i] + e6 * k6_[i] + e7 * k7_[i]);
      const double scale = 1.0 + std::max(std::abs(y[i]), std::abs(ynew_[i]));
      worst = std::max(worst, std::abs(e) / scale);
    }
    return worst / (tol * h);
  }

  std::vector<double>& k1() { return k1_; }
  void accept(std::vector<double>& y) {
    y.swap(ynew_);
    k1_.swap(k7_);
  }

 private:
  static double inf() { return std::numeric_limits<double>::infinity(); }

  OUView ou_;
  const ModelParams& params_;
  KernelPolicy kernel_;
  std::size_t n_;
  std::size_t evaluations_ = 0;
  std::vector<double> k1_, k2_, k3_, k4_, k5_, k6_, k7_, stage_, ynew_, err_, scratch_;
};

double sup_norm(const std::vector<double>& v) {
  double m = 0.0;
  for (double x : v) m = std::max(m, std::abs(x));
  return m;
}

double l2_norm(const std::vector<double>& v) {
  double s = 0.0;
  for (double x : v) s += x * x;
  return std::sqrt(s);
}

}  // namespace

std::vector<double> uniform_checkpoints(double T, double spacing) {
  if (!(T > 0.0) || !(spacing > 0.0)) throw DomainError("uniform_checkpoints: need T > 0 and spacing > 0");
  std::vector<double> out;
  const auto count = static_cast<std::size_t>(std::floor(T / spacing + 1e-9));
  out.reserve(count + 1);
  for (std::size_t k = 1; k <= count; ++k) out.push_back(static_cast<double>(k) * spacing);
  if (out.empty() || T - out.back() > 1e-9 * spacing) out.push_back(T);
  else out.back() = T;
  return out;
}

Trajectory integrate(const LatticeVector& v0, const OUView& ou, const ModelParams& params, double T,
                     const IntegratorOptions& options) {
  params.validate();
  if (v0.half_width() != params.half_width) throw DomainError("integrate: v0 half-width does not match the model");
  if (!v0.all_finite()) throw DomainError("integrate: v0 has non-finite entries");
  if (!(T >= 0.0)) throw DomainError("integrate: T must be >= 0");
  if (!(options.tol > 0.0)) throw DomainError("integrate: tol must be > 0");
  if (!ou.covers(0.0, T)) throw DomainError("integrate: OU path does not cover [0, T]");

  Trajectory traj{{0.0}, {v0}, ou, 0, 0, 0, {}, {}, {}, {}};
  if (options.record_steps) {
    traj.step_times.push_back(0.0);
    traj.step_states.push_back(v0);
  }
  if (T == 0.0) return traj;

  std::vector<double> stops;
  for (double c : options.checkpoints) {
    if (!(c > 0.0) || c > T * (1.0 + 1e-12)) throw DomainError("integrate: checkpoint outside (0, T]");
    stops.push_back(std::min(c, T));
  }
  stops.push_back(T);
  std::sort(stops.begin(), stops.end());
  stops.erase(std::unique(stops.begin(), stops.end(), [](double a, double b) { return b - a <= 1e-12 * (1.0 + b); }),
              stops.end());
  stops.back() = T;

  const double dt_ou = ou.dt();
  const double tol = options.tol;
  Stepper stepper(ou, params, options.kernel);
  std::vector<double> y(v0.values().begin(), v0.values().end());
  if (!stepper.eval(0.0, y, stepper.k1())) throw BlowUpError("non-finite right-hand side at the initial state", 0.0);

  double t = 0.0;
  double h = std::min({dt_ou, options.max_step,
                       0.01 * (1.0 + sup_norm(y)) / (sup_norm(stepper.k1()) + 1e-300)});
  h = std::max(h, 1e-6 * dt_ou);
  double ratio_old = 1e-4;
  std::size_t stop_index = 0;
  std::size_t interval_steps = 0;
  double interval_ratio = 0.0;

  while (stop_index < stops.size()) {
    const double stop = stops[stop_index];
    const double node = (std::floor(t / dt_ou + 1e-9) + 1.0) * dt_ou;
    // A checkpoint within rounding of a node replaces it.
    const bool to_stop = stop <= node + 1e-9 * dt_ou;
    const double barrier = to_stop ? stop : node;
    double step = std::min({h, barrier - t, options.max_step});
    bool hits_barrier = barrier - (t + step) <= 1e-9 * dt_ou;
    if (hits_barrier) step = barrier - t;

    if (traj.accepted_steps + traj.rejected_steps >= options.max_steps)
      throw StepSizeUnderflow("step budget exhausted", t);
    if (step <= 1e-14 * std::max(1.0, t)) throw StepSizeUnderflow("step size underflow", t);

    const double ratio = stepper.trial(t, y, step, tol);
    if (ratio <= 1.0) {
      stepper.accept(y);
      t = hits_barrier ? barrier : t + step;
      ++traj.accepted_steps;
      ++interval_steps;
      interval_ratio = std::max(interval_ratio, ratio);
      if (l2_norm(y) > options.blowup_norm) throw BlowUpError("state norm exceeded the blow-up guard", t);
      if (options.record_steps) {
        traj.step_times.push_back(t);
        traj.step_states.emplace_back(params.half_width, y);
      }

      double fac = kSafety * std::pow(std::max(ratio, 1e-10), -kExpo) * std::pow(ratio_old, kBeta);
      fac = std::clamp(fac, kFacMin, kFacMax);
      const double proposal = step * fac;
      // A step shortened by a barrier says little about the attainable size.
      h = (step < h && fac >= 1.0) ? std::max(h, proposal) : proposal;
      ratio_old = std::max(ratio, 1e-4);

      if (hits_barrier && to_stop) {
        traj.times.push_back(stop);
        traj.states.emplace_back(params.half_width, y);
        traj.steps_per_interval.push_back(interval_steps);
        traj.max_error_ratio.push_back(interval_ratio);
        interval_steps = 0;
        interval_ratio = 0.0;
        ++stop_index;
      }
    } else {
      ++traj.rejected_steps;
      const double fac = std::isfinite(ratio) ? std::max(kFacMin, kSafety * std::pow(ratio, -0.25)) : kFacMin;
      h = step * std::min(fac, 1.0);
    }
  }
  traj.rhs_evaluations = stepper.evaluations();
  return traj;
}

}  // namespace plab
