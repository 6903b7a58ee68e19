#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "plab/errors.hpp"
#include "plab/lattice.hpp"

using namespace plab;

namespace {

LatticeVector random_vector(int n, std::mt19937_64& rng) {
  std::normal_distribution<double> d(0.0, 1.0);
  LatticeVector v(n);
  for (double& x : v.values()) x = d(rng);
  return v;
}

}  // namespace

TEST_CASE("site indexing and zero extension") {
  LatticeVector v(2, std::vector<double>{1, 2, 3, 4, 5});
  CHECK(v[-2] == 1);
  CHECK(v[0] == 3);
  CHECK(v[2] == 5);
  CHECK(v.at_or_zero(3) == 0.0);
  CHECK(v.at_or_zero(-3) == 0.0);
  CHECK(LatticeVector::unit(3, -1)[-1] == 1.0);
  CHECK_THROWS_AS(LatticeVector(1, std::vector<double>{1, 2}), DomainError);
}

TEST_CASE("operators on a hand-computed example") {
  LatticeVector u(2, std::vector<double>{1, -2, 0, 4, 3});
  // B: u_{i+1} - u_i with u_3 = 0.
  CHECK(apply_B(u).storage() == std::vector<double>{-3, 2, 4, -1, -3});
  // B*: u_{i-1} - u_i with u_{-3} = 0.
  CHECK(apply_Bstar(u).storage() == std::vector<double>{-1, 3, -2, -4, 1});
  // A: -u_{i-1} + 2u_i - u_{i+1}.
  CHECK(apply_A(u).storage() == std::vector<double>{4, -5, -2, 5, 2});
  const LatticeVector be = apply_B_extended(u);
  CHECK(be.half_width() == 3);
  CHECK(be.storage() == std::vector<double>{1, -3, 2, 4, -1, -3, 0});
}

TEST_CASE("B*B equals A away from the left edge") {
  std::mt19937_64 rng(7);
  const LatticeVector u = random_vector(6, rng);
  const LatticeVector bb = apply_Bstar(apply_B(u));
  const LatticeVector a = apply_A(u);
  for (int i = -5; i <= 6; ++i) CHECK(bb[i] == doctest::Approx(a[i]).epsilon(1e-14));
  // The truncated B drops the edge (-N-1, -N).
  CHECK(a[-6] - bb[-6] == doctest::Approx(u[-6]));
}

TEST_CASE("adjointness and energy identity") {
  std::mt19937_64 rng(11);
  for (int n : {0, 1, 4, 16, 64}) {
    for (int rep = 0; rep < 20; ++rep) {
      const LatticeVector u = random_vector(n, rng);
      const LatticeVector w = random_vector(n, rng);
      const double lhs = inner_product(apply_B(u), w);
      const double rhs = inner_product(u, apply_Bstar(w));
      CHECK(std::abs(lhs - rhs) <= 1e-12 * (1.0 + norm_l2(u) * norm_l2(w)));
      const double au = inner_product(apply_A(u), u);
      const double bu = norm_l2_squared(apply_B_extended(u));
      CHECK(std::abs(au - bu) <= 1e-12 * (1.0 + bu));
      CHECK(au <= 4.0 * norm_l2_squared(u) * (1.0 + 1e-12));
      CHECK(au >= 0.0);
    }
  }
}

TEST_CASE("norms against closed forms") {
  const int n = 20;
  const double r = 0.7;
  LatticeVector u(n);
  for (int i = -n; i <= n; ++i) u[i] = std::pow(r, std::abs(i));
  const double r2 = r * r;
  const double l2sq = 1.0 + 2.0 * r2 * (1.0 - std::pow(r2, n)) / (1.0 - r2);
  CHECK(norm_l2_squared(u) == doctest::Approx(l2sq).epsilon(1e-13));
  CHECK(norm_l2(u) == doctest::Approx(std::sqrt(l2sq)).epsilon(1e-13));
  const double l1 = 1.0 + 2.0 * r * (1.0 - std::pow(r, n)) / (1.0 - r);
  CHECK(norm_l1(u) == doctest::Approx(l1).epsilon(1e-13));
  const double r3 = r * r * r;
  const double l3 = 1.0 + 2.0 * r3 * (1.0 - std::pow(r3, n)) / (1.0 - r3);
  CHECK(sum_abs_pow(u, 3.0) == doctest::Approx(l3).epsilon(1e-13));
  CHECK(norm_lp(u, 3.0) == doctest::Approx(std::cbrt(l3)).epsilon(1e-13));
  const double r25 = std::pow(r, 2.5);
  const double l25 = 1.0 + 2.0 * r25 * (1.0 - std::pow(r25, n)) / (1.0 - r25);
  CHECK(sum_abs_pow(u, 2.5) == doctest::Approx(l25).epsilon(1e-13));
  CHECK(norm_sup(u) == 1.0);
  CHECK_THROWS_AS(norm_lp(u, 0.5), DomainError);
}

TEST_CASE("arithmetic and width checks") {
  LatticeVector a(1, std::vector<double>{1, 2, 3});
  LatticeVector b(1, std::vector<double>{1, 1, 1});
  CHECK((a + b).storage() == std::vector<double>{2, 3, 4});
  CHECK((a - b).storage() == std::vector<double>{0, 1, 2});
  CHECK((2.0 * a).storage() == std::vector<double>{2, 4, 6});
  LatticeVector c(2);
  CHECK_THROWS_AS(a += c, DomainError);
  CHECK_THROWS_AS(inner_product(a, c), DomainError);
  a[0] = std::nan("");
  CHECK_FALSE(a.all_finite());
  SiteSequence s(1, std::vector<double>{0, 1, -1});
  CHECK_FALSE(s.is_nonnegative());
}
