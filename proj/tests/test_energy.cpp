#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "plab/energy.hpp"
#include "plab/errors.hpp"

using namespace plab;

TEST_CASE("gronwall integral against closed forms") {
  const WienerPath w = sample_wiener(1, -60.0, 5.0, 0.01);
  const OUPath ou = ou_path(w);
  const ModelParams m = ModelParams::make(1.5, 2.0, 0.0, 0);
  IntegratorOptions opts;
  opts.checkpoints = uniform_checkpoints(4.0, 0.01);
  const Trajectory traj = integrate(LatticeVector(0), OUView(ou), m, 4.0, opts);
  // alpha = 0, f = 1: (1 - e^{-lambda T}) / lambda.
  const std::vector<double> ones(traj.times.size(), 1.0);
  CHECK(gronwall_integral(traj, 1.5, 0.0, ones) == doctest::Approx((1 - std::exp(-6.0)) / 1.5).epsilon(1e-4));
  // f(s) = e^{lambda (T - s)}: W f = 1, integral T.
  std::vector<double> growing;
  for (double t : traj.times) growing.push_back(std::exp(1.5 * (4.0 - t)));
  CHECK(gronwall_integral(traj, 1.5, 0.0, growing) == doctest::Approx(4.0).epsilon(1e-4));
  CHECK(gronwall_integral(traj, 1.5, 0.7, std::vector<double>(traj.times.size(), 0.0)) == 0.0);
  CHECK_THROWS_AS(gronwall_integral(traj, 1.5, 0.0, std::vector<double>{1.0}), DomainError);
}

TEST_CASE("gronwall weight uses the OU integral") {
  // Recursive accumulation vs. the trapezoid of W(s,T) f(s) with W from exact OU integrals.
  const WienerPath w = sample_wiener(2, -60.0, 5.0, 0.01);
  const OUPath ou = ou_path(w);
  const ModelParams m = ModelParams::make(1.0, 2.0, 0.5, 0);
  IntegratorOptions opts;
  opts.checkpoints = uniform_checkpoints(3.0, 0.01);
  const Trajectory traj = integrate(LatticeVector(0), OUView(ou), m, 3.0, opts);
  std::vector<double> f;
  for (double t : traj.times) f.push_back(std::cos(t));
  double direct = 0.0;
  for (std::size_t k = 0; k + 1 < traj.times.size(); ++k) {
    auto integrand = [&](double s) {
      return std::exp(-1.0 * (3.0 - s) + 2.0 * 0.5 * ou.integral(s, 3.0)) * std::cos(s);
    };
    const double a = traj.times[k], b = traj.times[k + 1];
    direct += 0.5 * (b - a) * (integrand(a) + integrand(b));
  }
  CHECK(gronwall_integral(traj, 1.0, 0.5, f) == doctest::Approx(direct).epsilon(1e-12));
}

TEST_CASE("energy inequality over randomized runs") {
  std::mt19937_64 rng(77);
  std::uniform_real_distribution<double> uni(0.0, 1.0);
  std::normal_distribution<double> gauss(0.0, 1.0);
  for (int run = 0; run < 12; ++run) {
    const double p = 1.5 + 2.0 * uni(rng);
    const int n = 4 + static_cast<int>(12 * uni(rng));
    ModelParams m = ModelParams::make(0.5 + uni(rng), p, uni(rng), n);
    for (int i = -n; i <= n; ++i) {
      m.g[i] = gauss(rng) * std::exp(-0.3 * std::abs(i));
      m.a_defect[i] = 0.1 * uni(rng);
    }
    LatticeVector v0(n);
    for (double& x : v0.values()) x = 2.0 * gauss(rng);
    const WienerPath w = sample_wiener(1000 + run, -60.0, 5.0, 0.01);
    const OUPath ou = ou_path(w);
    IntegratorOptions opts;
    opts.checkpoints = uniform_checkpoints(4.0, 0.05);
    opts.record_steps = true;
    const Trajectory traj = integrate(v0, OUView(ou), m, 4.0, opts);
    const EnergyReport r = energy_report(traj, m);
    CHECK(r.times == traj.times);
    CHECK(r.holds(1e-6));
    CHECK(r.crude_bound_excess <= 1e-6);
    CHECK(r.residual.front() == 0.0);
    CHECK(r.lhs.front() == doctest::Approx(norm_l2_squared(v0)));
  }
}

TEST_CASE("step-level and checkpoint-level accumulation agree on smooth runs") {
  ModelParams m = ModelParams::make(1.0, 2.0, 0.5, 6);
  for (int i = -6; i <= 6; ++i) m.g[i] = 0.3;
  const WienerPath w = sample_wiener(4, -60.0, 3.0, 0.01);
  const OUPath ou = ou_path(w);
  IntegratorOptions opts;
  opts.checkpoints = uniform_checkpoints(3.0, 0.001);
  const EnergyReport dense = energy_report(integrate(LatticeVector(6, 0.1), OUView(ou), m, 3.0, opts), m);
  opts.checkpoints = uniform_checkpoints(3.0, 0.5);
  opts.record_steps = true;
  const EnergyReport stepped = energy_report(integrate(LatticeVector(6, 0.1), OUView(ou), m, 3.0, opts), m);
  CHECK(stepped.times.size() == 7);
  CHECK(stepped.lhs.back() == doctest::Approx(dense.lhs.back()).epsilon(2e-3));
  CHECK(stepped.majorant.back() == doctest::Approx(dense.majorant.back()).epsilon(2e-3));
}

TEST_CASE("energy report needs a trajectory from t = 0") {
  const WienerPath w = sample_wiener(3, -60.0, 2.0, 0.01);
  const OUPath ou = ou_path(w);
  const ModelParams m = ModelParams::make(1.0, 2.0, 0.5, 1);
  Trajectory traj = integrate(LatticeVector(1), OUView(ou), m, 1.0);
  traj.times.front() = 0.5;
  CHECK_THROWS_AS(energy_report(traj, m), DomainError);
}
