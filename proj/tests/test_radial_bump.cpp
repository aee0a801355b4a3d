#include <doctest.h>

#include <cmath>
#include <vector>

#include "fraclap/core.hpp"
#include "fraclap/error.hpp"
#include "fraclap/radial_bump.hpp"

using namespace fraclap;

namespace {

// monomial coefficients of (1 - x^2)^n
std::vector<double> poly_one_minus_x2(int n) {
  std::vector<double> c(2 * n + 1, 0.0);
  double b = 1;
  for (int k = 0; k <= n; ++k) {
    c[2 * k] = ((k % 2) ? -1.0 : 1.0) * b;
    b = b * (n - k) / (k + 1);
  }
  return c;
}

std::vector<double> deriv(const std::vector<double>& c) {
  std::vector<double> d(c.size() > 1 ? c.size() - 1 : 1, 0.0);
  for (size_t k = 1; k < c.size(); ++k) d[k - 1] = k * c[k];
  return d;
}

std::vector<double> add_scaled(std::vector<double> a, const std::vector<double>& b, double s) {
  if (b.size() > a.size()) a.resize(b.size(), 0.0);
  for (size_t i = 0; i < b.size(); ++i) a[i] += s * b[i];
  return a;
}

// sixth-order central second derivative along each axis, negated
double fd_neg_lap(const RadialPolyBump& u, const Point& x, double h) {
  static const double w[4] = {-49.0 / 18, 3.0 / 2, -3.0 / 20, 1.0 / 90};
  double s = 0;
  for (int i = 0; i < x.dim(); ++i) {
    double acc = w[0] * u.evaluate(x);
    for (int k = 1; k <= 3; ++k) {
      Point e = Point::axis(x.dim(), i, k * h);
      acc += w[k] * (u.evaluate(x + e) + u.evaluate(x - e));
    }
    s -= acc / (h * h);
  }
  return s;
}

}  // namespace

TEST_CASE("laplacian of a quadratic is the constant 2N") {
  for (int N = 1; N <= 3; ++N) {
    auto u = RadialPolyBump::single(Point::zero(N), 1.3, 1.0);
    auto v = laplacian_exact(u, false);
    REQUIRE(v.terms().size() == 1);
    CHECK(v.terms()[0].coef == doctest::Approx(2.0 * N));
    CHECK(v.terms()[0].exponent == 0.0);
  }
}

TEST_CASE("-Delta (1-x^2)^2 = 4 - 12 x^2 in 1D") {
  auto u = RadialPolyBump::single(Point{0.0}, 1.0, 2.0);
  auto v = laplacian_exact(u);
  for (double x : {-0.7, -0.2, 0.0, 0.4, 0.9}) CHECK(v.evaluate(Point{x}) == doctest::Approx(4 - 12 * x * x));
}

TEST_CASE("strict mode refuses exponents below two") {
  auto u = RadialPolyBump::single(Point{0.0}, 1.0, 1.5);
  CHECK_THROWS_AS(laplacian_exact(u), Error);
  CHECK_NOTHROW(laplacian_exact(u, false));
  auto w = RadialPolyBump::single(Point{0.0}, 1.0, 3.0);
  CHECK_THROWS_AS(iterate_laplacian(w, 2), Error);
}

TEST_CASE("iterate_laplacian on fractional powers agrees with a finite-difference oracle") {
  for (int N = 1; N <= 3; ++N) {
    for (double s : {1.5, 2.5, 3.25}) {
      int m = static_cast<int>(std::floor(s));
      auto u = RadialPolyBump::single(Point::zero(N), 1.0, s);
      auto lm1 = iterate_laplacian(u, m - 1, false);
      auto lm = iterate_laplacian(u, m, false);
      Point x = Point::zero(N);
      for (int i = 0; i < N; ++i) x[i] = 0.31 - 0.17 * i;
      double fd = fd_neg_lap(lm1, x, 1e-3);
      double ex = lm.evaluate(x);
      CHECK(std::abs(fd - ex) <= 1e-6 * std::abs(ex));
    }
  }
}

TEST_CASE("iterate_laplacian: identity, torsion and polynomial oracle") {
  auto u = RadialPolyBump::single(Point{0.0}, 1.0, 6.0);
  auto same = iterate_laplacian(u, 0);
  CHECK(same.terms().size() == 1);
  CHECK(same.terms()[0].coef == 1.0);

  double g11 = gamma_ball(1, 1.0);
  auto psi = RadialPolyBump::single(Point{0.0}, 1.0, 1.0, g11);
  auto lp = iterate_laplacian(psi, 1, false);
  CHECK(lp.evaluate(Point{0.3}) == doctest::Approx(1.0));

  // (1-x^2)^6 twice: (-Delta)^2 = d^4/dx^4 in 1D
  auto l2 = iterate_laplacian(u, 2);
  auto ref = deriv(deriv(deriv(deriv(poly_one_minus_x2(6)))));
  std::vector<double> got;
  for (const auto& t : l2.terms()) {
    int n = static_cast<int>(std::round(t.exponent));
    CHECK(t.exponent == n);
    got = add_scaled(got, poly_one_minus_x2(n), t.coef);
  }
  got.resize(ref.size(), 0.0);
  for (size_t i = 0; i < ref.size(); ++i) CHECK(std::abs(got[i] - ref[i]) <= 1e-12 * (1 + std::abs(ref[i])));
}

TEST_CASE("evaluate") {
  auto u = RadialPolyBump::single(Point{0.5, 0.0}, 0.5, 2.5);
  CHECK(u.evaluate(Point{2.0, 0.0}) == 0.0);
  CHECK(u.evaluate(Point{1.0, 0.0}) == 0.0);
  CHECK(u.evaluate(Point{0.5, 0.0}) == doctest::Approx(std::pow(0.5, 5.0)));
  auto psi = RadialPolyBump::single(Point{0.0}, 1.0, 1.0, gamma_ball(1, 1.0));
  CHECK(psi.evaluate(Point{0.0}) == doctest::Approx(0.5));
}

TEST_CASE("terms are merged and sorted") {
  RadialPolyBump u(Point{0.0}, 1.0, {{1.0, 2.0}, {2.0, 5.0}, {3.0, 2.0}, {-2.0, 5.0}});
  REQUIRE(u.terms().size() == 1);
  CHECK(u.terms()[0].exponent == 2.0);
  CHECK(u.terms()[0].coef == 4.0);
  RadialPolyBump w(Point{0.0}, 1.0, {{1.0, 2.0}, {1.0, 7.0}});
  CHECK(w.terms()[0].exponent == 7.0);
}

TEST_CASE("smoothness bookkeeping") {
  CHECK(smoothness_of_exponent(1.5) == 1.0);
  CHECK(smoothness_of_exponent(6.0) == 5.0);
  CHECK(smoothness_of_exponent(1.0) == 0.0);
  auto u = RadialPolyBump::single(Point{0.0}, 1.0, 6.0);
  CHECK(u.smoothness().global_order == 5.0);
  CHECK(laplacian_exact(u).smoothness().global_order == 3.0);
  auto v = RadialPolyBump::single(Point{0.0}, 1.0, 4.5);
  CHECK(laplacian_exact(v).smoothness().global_order == v.smoothness().global_order - 2);
}

TEST_CASE("JSON round trip") {
  RadialPolyBump u(Point{0.1, -0.2}, 0.7, {{1.5, 3.0}, {-0.25, 2.5}});
  auto v = bump_from_json(to_json(u));
  CHECK(v.center() == u.center());
  CHECK(v.radius() == u.radius());
  REQUIRE(v.terms().size() == 2);
  CHECK(v.evaluate(Point{0.2, 0.1}) == u.evaluate(Point{0.2, 0.1}));
  CHECK_THROWS_AS(bump_from_json("{\"radius\": 1}"), Error);
  CHECK_THROWS_AS(bump_from_json("not json"), Error);
}
