#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "fraclap/core.hpp"
#include "fraclap/error.hpp"
#include "fraclap/gamma.hpp"

using namespace fraclap;
using std::numbers::pi;

TEST_CASE("gamma matches libm across positive and negative arguments") {
  for (double x = -4.75; x < 12; x += 0.173) {
    if (std::abs(x - std::round(x)) < 1e-9 && x <= 0) continue;
    double ref = std::tgamma(x);
    CHECK(std::abs(gamma_fn(x) - ref) <= 1e-13 * std::abs(ref));
  }
  CHECK(gamma_fn(0.5) == doctest::Approx(std::sqrt(pi)).epsilon(1e-15));
  CHECK(gamma_fn(5.0) == 24.0);
  CHECK_THROWS_AS(gamma_fn(0.0), Error);
  CHECK_THROWS_AS(gamma_fn(-2.0), Error);
}

TEST_CASE("frac_split") {
  auto a = frac_split(1.5);
  CHECK(a.m == 1);
  CHECK(a.sigma == 0.5);
  auto b = frac_split(2.0);
  CHECK(b.m == 1);
  CHECK(b.sigma == 1.0);
  CHECK(b.integer());
  auto c = frac_split(0.3);
  CHECK(c.m == 0);
  CHECK(c.sigma == doctest::Approx(0.3));
  CHECK_THROWS_AS(frac_split(0.0), Error);
  CHECK_THROWS_AS(frac_split(-1.0), Error);
  CHECK_THROWS_AS(frac_split(NAN), Error);
}

TEST_CASE("bracket and rho") {
  Point o{0.0, 0.0};
  CHECK(bracket(o, Point{0.3, -0.8}) == doctest::Approx(1.0));
  Point th{0.6, 0.8};
  CHECK(bracket(th, th) == doctest::Approx(0.0));
  CHECK(rho(Point{0.0}, Point{0.5}) == doctest::Approx(3.0));
  CHECK(rho(Point{0.2}, Point{1.0}) == 0.0);
  CHECK_THROWS_AS(rho(Point{0.2}, Point{0.2}), Error);

  std::mt19937_64 gen(7);
  std::uniform_real_distribution<double> U(-0.57, 0.57);
  for (int i = 0; i < 200; ++i) {
    Point x{U(gen), U(gen), U(gen)}, y{U(gen), U(gen), U(gen)};
    double b = bracket(x, y);
    CHECK(std::abs(b * b - dist2(x, y) - (1 - x.norm2()) * (1 - y.norm2())) < 1e-12);
    CHECK(std::abs(rho(x, y) + 1 - b * b / dist2(x, y)) < 1e-12 * (1 + rho(x, y)));
    CHECK(bracket(x, y) == bracket(y, x));
    CHECK(rho(x, y) == doctest::Approx(rho(y, x)).epsilon(1e-15));
  }
}

TEST_CASE("constants: closed-form values") {
  auto c = constants(1, frac_split(0.5));
  CHECK(*c.c_frac == doctest::Approx(1 / pi).epsilon(1e-14));
  CHECK(c.k_green == doctest::Approx(1 / (2 * pi)).epsilon(1e-14));
  CHECK(constants(1, frac_split(1.0)).gamma_ball == doctest::Approx(0.5).epsilon(1e-14));
  CHECK(constants(3, frac_split(1.0)).kappa_fund == doctest::Approx(1 / (4 * pi)).epsilon(1e-14));
  CHECK(constants(2, frac_split(1.0)).kappa_fund == doctest::Approx(-1 / (2 * pi)).epsilon(1e-14));
  CHECK(constants(2, frac_split(1.0)).kappa_log_branch);
  CHECK(constants(1, frac_split(1.0)).kappa_fund == doctest::Approx(-0.5).epsilon(1e-14));
  CHECK_FALSE(constants(1, frac_split(1.0)).kappa_log_branch);
  CHECK_FALSE(constants(1, frac_split(1.0)).c_frac.has_value());
}

TEST_CASE("constants: log branch of the 1D order-1/2 fundamental solution is -ln|x|/pi") {
  auto c = constants(1, frac_split(0.5));
  CHECK(c.kappa_log_branch);
  CHECK(c.kappa_fund == doctest::Approx(-1 / pi).epsilon(1e-14));
}

TEST_CASE("constants: interaction constant") {
  // c_{1,1/2} * (1 + 1) * (1 + 2)
  auto c = constants(1, frac_split(1.5));
  CHECK(*c.C_interaction == doctest::Approx(6 / pi).epsilon(1e-14));
  CHECK(*constants(2, frac_split(0.3)).C_interaction == doctest::Approx(c_frac(2, 0.3)).epsilon(1e-15));
  for (int N = 1; N <= 3; ++N)
    for (double s : {0.25, 0.5, 1.5, 2.75, 3.5}) CHECK(*constants(N, frac_split(s)).C_interaction > 0);
}

TEST_CASE("constants: Gamma-ratio recursions and positivity") {
  for (int N = 1; N <= 5; ++N) {
    for (double s = 0.1; s < 4; s += 0.137) {
      double h = 0.5 * N;
      CHECK(gamma_ball(N, s + 1) / gamma_ball(N, s) == doctest::Approx(1 / (4 * (s + 1) * (h + s))).epsilon(1e-12));
      CHECK(k_green(N, s + 1) / k_green(N, s) == doctest::Approx(1 / (4 * s * s)).epsilon(1e-12));
      CHECK(gamma_ball(N, s) > 0);
      CHECK(k_green(N, s) > 0);
    }
  }
}

TEST_CASE("constants: kappa branch selection") {
  CHECK(log_branch(2, 1.0));
  CHECK(log_branch(2, 2.0));
  CHECK(log_branch(3, 1.5));
  CHECK(log_branch(1, 1.5));
  CHECK_FALSE(log_branch(3, 1.0));
  CHECK_FALSE(log_branch(3, 1.25));
  CHECK_FALSE(log_branch(2, 0.5));
  // (2,2): C2 = -4 kappa
  auto c = constants(2, frac_split(2.0));
  CHECK(c.C2_fund == doctest::Approx(-4 * c.kappa_fund));
  CHECK(c.kappa_fund == doctest::Approx(1 / (8 * pi)).epsilon(1e-14));
}
