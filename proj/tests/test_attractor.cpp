#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "plab/attractor.hpp"
#include "plab/dynamics.hpp"
#include "plab/errors.hpp"
#include "plab/kernels.hpp"

using namespace plab;

namespace {

ModelParams bump_model(double alpha, int n) {
  ModelParams m = ModelParams::make(1.0, 2.0, alpha, n);
  for (int i = -n; i <= n; ++i) m.g[i] = std::exp(-0.125 * i * i);
  return m;
}

}  // namespace

TEST_CASE("absorbing radius: trivial and closed-form cases") {
  const NoiseRealization nr = realize_noise(4, 0.01, 120.0, 1.0);
  const OUView view(nr.ou);
  ModelParams m = ModelParams::make(1.0, 2.0, 0.5, 8);
  CHECK(absorbing_radius(view, m, 50.0).r_squared == 1.0);

  m = bump_model(0.0, 8);
  m.a_defect[0] = 0.3;
  m.lambda = 0.8;
  const double closed = 1.0 + m.forcing_constant() * (1.0 - std::exp(-0.8 * 100.0)) / 0.8;
  CHECK(std::abs(absorbing_radius(view, m, 100.0).r_squared - closed) <= 1e-10 * closed);
  CHECK(m.forcing_constant() == doctest::Approx(8.0 * norm_l2_squared(m.g) / 0.8 + 0.6));
}

TEST_CASE("absorbing radius: horizon and panel refinement") {
  const NoiseRealization nr = realize_noise(5, 0.01, 160.0, 1.0);
  const OUView view(nr.ou);
  const ModelParams m = bump_model(0.5, 8);
  const AbsorbingRadius r50 = absorbing_radius(view, m, 50.0);
  const AbsorbingRadius r100 = absorbing_radius(view, m, 100.0);
  CHECK(std::abs(r100.r_squared - r50.r_squared) < 1e-8 * r100.r_squared);
  CHECK(r100.r_squared > 1.0);
  CHECK(r50.tail_estimate >= 0.0);
  const AbsorbingRadius fine = absorbing_radius(view, m, 50.0, 0.0025);
  CHECK(fine.r_squared == doctest::Approx(r50.r_squared).epsilon(1e-12));
  CHECK_THROWS_AS(absorbing_radius(view, m, 50.0, 0.003), DomainError);
  CHECK_THROWS_AS(absorbing_radius(view, m, 500.0), DomainError);
}

TEST_CASE("absorbing radius against brute-force quadrature") {
  const NoiseRealization nr = realize_noise(6, 0.01, 80.0, 1.0);
  const OUView view(nr.ou);
  const ModelParams m = bump_model(0.7, 4);
  // Midpoint rule with inner integral from the OU path directly.
  const int steps = 400000;
  const double h = 40.0 / steps;
  double acc = 0.0;
  for (int k = 0; k < steps; ++k) {
    const double s = -40.0 + (k + 0.5) * h;
    acc += std::exp(m.lambda * s - 2.0 * m.alpha * view.z(s) + 2.0 * m.alpha * view.integral(s, 0.0)) * h;
  }
  const double brute = 1.0 + m.forcing_constant() * acc;
  CHECK(absorbing_radius(view, m, 40.0).r_squared == doctest::Approx(brute).epsilon(1e-7));
}

TEST_CASE("tail energy, cut-off and semi-distance") {
  LatticeVector v(3, std::vector<double>{1, 2, 3, 4, 5, 6, 7});
  CHECK(tail_energy(v, 0) == 1 + 4 + 9 + 25 + 36 + 49);
  CHECK(tail_energy(v, 2) == 1 + 49);
  CHECK(tail_energy(v, 3) == 0.0);
  CHECK_THROWS_AS(tail_energy(v, 4), DomainError);
  CHECK_THROWS_AS(tail_energy(v, -1), DomainError);

  CHECK(cutoff(0.0) == 0.0);
  CHECK(cutoff(1.0) == 0.0);
  CHECK(cutoff(1.5) == doctest::Approx(0.5));
  CHECK(cutoff(2.0) == 1.0);
  CHECK(cutoff(7.0) == 1.0);
  double max_slope = 0.0;
  for (int k = 0; k < 1000; ++k) {
    const double s = 1.0 + k / 1000.0;
    max_slope = std::max(max_slope, (cutoff(s + 1e-6) - cutoff(s)) / 1e-6);
  }
  CHECK(max_slope <= kCutoffSlopeBound);

  std::vector<LatticeVector> xs{LatticeVector(1, 0.0), LatticeVector(1, 1.0)};
  std::vector<LatticeVector> ys{LatticeVector(1, 0.0)};
  CHECK(hausdorff_semidistance(xs, ys) == doctest::Approx(std::sqrt(3.0)));
  CHECK(hausdorff_semidistance(ys, xs) == 0.0);
}

TEST_CASE("ball samples") {
  const auto s = ball_samples(10, 2.0);
  CHECK(s.size() == 1 + 2 * 3 + 6);
  for (const auto& v : s) CHECK(norm_l2(v) <= 2.0 * (1 + 1e-14));
  CHECK(norm_l2(s.back()) == doctest::Approx(2.0));
  CHECK(ball_samples(10, 2.0) == s);
  BallSampleSpec other;
  other.seed = 2;
  CHECK(ball_samples(10, 2.0, other).back() != s.back());
}

TEST_CASE("pullback states reuse one path") {
  const NoiseRealization nr = realize_noise(7, 0.01, 30.0, 0.01);
  const ModelParams m = bump_model(0.5, 6);
  const LatticeVector v0 = LatticeVector::unit(6, 1) * 2.0;
  // phi(t, theta_{-t} omega) computed via a view equals integrating on [-t, 0] of the base path.
  const LatticeVector a = pullback_state(nr.ou, 2.0, v0, m, {});
  const LatticeVector b = cocycle(2.0, OUView(nr.ou, -200), v0, m).v;
  CHECK(a == b);
}

TEST_CASE("deterministic absorption matches the decay time") {
  ExperimentSetup setup;
  setup.params = ModelParams::make(1.0, 2.0, 0.0, 16);
  setup.radius_horizon = 10.0;
  const std::vector<double> times{0.5, 1.0, 2.0, 4.0, 6.0};
  const AbsorptionReport r = absorption_experiment(setup, 10.0, times, {1});
  CHECK(r.all_absorbed_at_last());
  const double closed = 2.0 * std::log(10.0);
  CHECK(std::abs(r.seeds[0].bound_time - closed) <= 0.01 + 1e-9);
  CHECK(r.seeds[0].observed_time <= 1.1 * closed);
  CHECK(r.seeds[0].radius == 1.0);
  CHECK(r.rows.size() == times.size());
}

TEST_CASE("stochastic absorption and radius temperedness, small scale") {
  ExperimentSetup setup;
  setup.params = bump_model(0.5, 8);
  setup.radius_horizon = 30.0;
  const AbsorptionReport r = absorption_experiment(setup, 5.0, {2.0, 8.0}, {1, 2});
  CHECK(r.seeds.size() == 2);
  CHECK(r.all_absorbed_at_last());
  const RadiusTemperReport t = temperedness_of_R(setup, {1}, {0.5}, {1.0, 10.0, 20.0});
  CHECK(t.summaries.size() == 1);
  CHECK(t.summaries[0].decreasing);
  CHECK(t.rows.size() == 3);
}

TEST_CASE("tail nullity, small scale") {
  ExperimentSetup setup;
  setup.params = ModelParams::make(1.0, 2.0, 0.5, 16);
  for (int i = -2; i <= 2; ++i) setup.params.g[i] = 1.0;
  setup.radius_horizon = 30.0;
  const NullityReport r = nullity_experiment(setup, 1e-3, {5.0, 10.0, 20.0, 30.0}, {3});
  CHECK(r.rows.size() == 4);
  CHECK(r.cutoff_width == 4);
  CHECK(r.seeds[0].stabilized);
  CHECK(r.seeds[0].n_tilde < 16);
  for (const auto& row : r.rows) CHECK(row.sup_tail <= 1e-6);
}

TEST_CASE("pullback attraction, small scale") {
  ExperimentSetup setup;
  setup.params = bump_model(0.5, 8);
  const auto a = ball_samples(8, 1.0);
  const auto b = ball_samples(8, 5.0);
  const PullbackReport r = pullback_attraction(setup, a, b, {0.0, 2.0, 5.0, 10.0}, 11);
  CHECK(r.rows.front().mutual == doctest::Approx(4.0));
  CHECK(r.eventually_decreasing);
  CHECK(r.rows.back().mutual < 1e-2);
  const PullbackReport same = pullback_attraction(setup, a, a, {1.0}, 11);
  CHECK(same.rows[0].mutual == 0.0);
}

TEST_CASE("experiment argument checks") {
  ExperimentSetup setup;
  CHECK_THROWS_AS(absorption_experiment(setup, 1.0, {}, {1}), DomainError);
  CHECK_THROWS_AS(absorption_experiment(setup, 1.0, {2.0, 1.0}, {1}), DomainError);
  CHECK_THROWS_AS(absorption_experiment(setup, 1.0, {1.0}, {}), DomainError);
  CHECK_THROWS_AS(nullity_experiment(setup, 0.0, {1.0}, {1}), DomainError);
  CHECK_THROWS_AS(pullback_state(realize_noise(1, 0.01, 5.0, 0.01).ou, 0.005, LatticeVector(16), setup.params, {}),
                  DomainError);
}
