#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <numbers>
#include <random>

#include "fraclap/error.hpp"
#include "fraclap/kernels.hpp"

using namespace fraclap;
using std::numbers::pi;

namespace {

Point random_in_ball(std::mt19937_64& gen, int N, double rmax) {
  std::uniform_real_distribution<double> U(-1, 1);
  for (;;) {
    Point p = Point::zero(N);
    for (int i = 0; i < N; ++i) p[i] = U(gen);
    if (p.norm() < rmax) return p;
  }
}

double image_charge(const Point& x, const Point& y) {
  double ny = y.norm();
  Point ystar = y * (1 / (ny * ny));
  return (1 / dist(x, y) - 1 / (ny * dist(x, ystar))) / (4 * pi);
}

}  // namespace

TEST_CASE("boggio_inner closed forms") {
  KernelContext c21(2, 1.0), c1h(1, 0.5);
  CHECK(boggio_inner(0.0, c21) == 0.0);
  for (double r : {1e-8, 1e-3, 0.3, 1.0, 3.0, 47.0, 1e4, 1e9}) {
    CHECK(boggio_inner(r, c21) == doctest::Approx(std::log1p(r)).epsilon(1e-13));
    CHECK(boggio_inner(r, c1h) == doctest::Approx(2 * std::asinh(std::sqrt(r))).epsilon(1e-13));
  }
}

TEST_CASE("boggio_inner: series route agrees with the raw v-integral") {
  for (int N = 1; N <= 3; ++N) {
    for (double s : {0.25, 0.5, 0.75, 1.0, 1.25, 1.5, 2.0, 2.5, 3.0, 3.7}) {
      KernelContext ctx(N, s);
      double prev = 0;
      for (double r = 1e-6; r < 1e9; r *= 7.3) {
        double a = boggio_inner(r, ctx), b = boggio_inner_raw(r, ctx);
        CHECK(std::abs(a - b) <= 1e-10 * std::abs(b));
        CHECK(a > prev);
        prev = a;
      }
    }
  }
}

TEST_CASE("green: 1D order-1/2 closed form") {
  KernelContext ctx(1, 0.5);
  double g = green(Point{0.0}, Point{0.5}, ctx);
  CHECK(std::abs(g - std::log(2 + std::sqrt(3.0)) / pi) <= 1e-9 * g);
  CHECK(g == doctest::Approx(0.4192007).epsilon(1e-7));
  std::mt19937_64 gen(3);
  for (int i = 0; i < 100; ++i) {
    double x = random_in_ball(gen, 1, 0.99)[0], y = random_in_ball(gen, 1, 0.99)[0];
    double ref = std::log((1 - x * y + std::sqrt((1 - x * x) * (1 - y * y))) / std::abs(x - y)) / pi;
    CHECK(green(Point{x}, Point{y}, ctx) == doctest::Approx(ref).epsilon(1e-12));
  }
}

TEST_CASE("green: outside the ball, coincident points") {
  KernelContext ctx(2, 1.5);
  CHECK(green(Point{0.1, 0.2}, Point{1.0, 0.0}, ctx) == 0.0);
  CHECK(green(Point{0.1, 0.2}, Point{1.5, 0.0}, ctx) == 0.0);
  CHECK_THROWS_AS(green(Point{0.1, 0.2}, Point{0.1, 0.2}, ctx), Error);
}

TEST_CASE("green: 3D order-1 is the image-charge Green function") {
  KernelContext ctx(3, 1.0);
  std::mt19937_64 gen(11);
  for (int i = 0; i < 100; ++i) {
    Point x = random_in_ball(gen, 3, 0.98), y = random_in_ball(gen, 3, 0.98);
    double ref = image_charge(x, y);
    CHECK(std::abs(green(x, y, ctx) - ref) <= 1e-8 * ref);
    CHECK(std::abs(green_integer_form(x, y, ctx) - ref) <= 1e-8 * ref);
  }
}

TEST_CASE("green: symmetry and positivity") {
  std::mt19937_64 gen(5);
  for (int N = 1; N <= 3; ++N) {
    for (double s : {0.3, 0.5, 1.25, 1.5, 2.0, 2.5}) {
      KernelContext ctx(N, s);
      for (int i = 0; i < 30; ++i) {
        Point x = random_in_ball(gen, N, 0.999), y = random_in_ball(gen, N, 0.999);
        double a = green(x, y, ctx), b = green(y, x, ctx);
        CHECK(a > 0);
        CHECK(std::abs(a - b) <= 1e-12 * a);
      }
    }
  }
}

TEST_CASE("green_integer_form agrees with the rho form for s = 2") {
  std::mt19937_64 gen(9);
  for (int N = 1; N <= 3; ++N) {
    KernelContext ctx(N, 2.0);
    for (int i = 0; i < 100; ++i) {
      Point x = random_in_ball(gen, N, 0.97), y = random_in_ball(gen, N, 0.97);
      double a = green(x, y, ctx), b = green_integer_form(x, y, ctx);
      CHECK(std::abs(a - b) <= 1e-9 * a);
    }
    CHECK(green_integer_form(Point::zero(N), Point::axis(N, 0, 1.2), ctx) == 0.0);
  }
  CHECK_THROWS_AS(green_integer_form(Point{0.1}, Point{0.2}, KernelContext(1, 1.5)), Error);
}

TEST_CASE("poly_P special cases") {
  KernelContext ctx(2, 1.5);
  Point x{0.3, -0.4}, y{0.1, 0.5};
  CHECK(poly_P(x, Point{0.0, 0.0}, ctx) == doctest::Approx(std::pow(1 - x.norm2(), -0.5)));
  CHECK(poly_P(Point{0.0, 0.0}, y, ctx) == doctest::Approx(std::pow(1 - y.norm2(), 0.5)));
  CHECK(poly_P(x, y, ctx) > 0);
  CHECK_THROWS_AS(poly_P(Point{1.0, 0.0}, y, ctx), Error);
  CHECK(poly_P(Point{1.0, 0.0}, y, KernelContext(2, 2.5)) == 0.0);
  CHECK_THROWS_AS(poly_P(x, y, KernelContext(2, 0.5)), Error);
}

TEST_CASE("martin and poisson kernels") {
  for (int N = 1; N <= 3; ++N) {
    KernelContext ctx(N, 1.5);
    Point th = Point::axis(N, 0);
    CHECK(martin(Point::zero(N), th, ctx) == doctest::Approx(ctx.consts.k_green / 1.5));
    CHECK(martin(Point::axis(N, N - 1, -1.0), th, ctx) == 0.0);
    CHECK_THROWS_AS(martin(th, th, ctx), Error);
    CHECK_THROWS_AS(martin(Point::zero(N), th * 1.1, ctx), Error);
    CHECK(poisson(Point::zero(N), th, N) == doctest::Approx(2 * k_green(N, 1.0)));
  }
  for (double x : {-0.8, -0.1, 0.0, 0.5, 0.95}) CHECK(poisson(Point{x}, Point{1.0}, 1) == doctest::Approx((1 + x) / 2));
  CHECK_THROWS_AS(poisson(Point{1.0}, Point{1.0}, 1), Error);
}

TEST_CASE("fundamental solutions") {
  CHECK(fundamental(Point{1.0, 0.0, 0.0}, KernelContext(3, 1.0)) == doctest::Approx(1 / (4 * pi)));
  CHECK(fundamental(Point{std::exp(1.0), 0.0}, KernelContext(2, 1.0)) == doctest::Approx(-1 / (2 * pi)));
  CHECK(fundamental(Point{0.5}, KernelContext(1, 1.0)) == doctest::Approx(-0.25));
  CHECK(fundamental(Point{-0.5}, KernelContext(1, 1.0)) == doctest::Approx(-0.25));
  CHECK_THROWS_AS(fundamental(Point{0.0}, KernelContext(1, 1.0)), Error);
  CHECK(fundamental_remainder(Point{0.7, 0.1}, KernelContext(2, 2.0)) == doctest::Approx(-1 / (2 * pi)));
  CHECK(fundamental_remainder(Point{0.7, 0.1, 0.0}, KernelContext(3, 2.0)) == 0.0);
  CHECK(fundamental_remainder(Point{0.7, 0.1}, KernelContext(2, 1.0)) == 0.0);
  CHECK(fundamental_remainder(Point{0.7}, KernelContext(1, 1.5)) == doctest::Approx(-3 / (2 * pi) ));
}

TEST_CASE("two-sided Green bounds: empirical constant") {
  std::mt19937_64 gen(21);
  for (auto [N, s] : {std::pair{1, 1.5}, std::pair{2, 1.5}, std::pair{3, 1.25}}) {
    KernelContext ctx(N, s);
    double lo = 1e300, hi = 0;
    for (int i = 0; i < 1000; ++i) {
      Point x = random_in_ball(gen, N, 0.999), y = random_in_ball(gen, N, 0.999);
      double q = green(x, y, ctx) / green_comparator(x, y, N, s);
      lo = std::min(lo, q);
      hi = std::max(hi, q);
    }
    double c = std::max(hi, 1 / lo);
    std::printf("two-sided bound (N=%d, s=%.2f): ratio in [%.4g, %.4g], c = %.4g\n", N, s, lo, hi, c);
    CHECK(c < 100);
  }
}

TEST_CASE("auxiliary bound on the truncated Boggio integral") {
  std::mt19937_64 gen(33);
  std::uniform_real_distribution<double> U(0, 1);
  QuadSpec sp;
  int violations = 0;
  for (int i = 0; i < 10000; ++i) {
    int N = 1 + static_cast<int>(3 * U(gen));
    double s = 0.05 + 3.95 * U(gen);
    double R = std::exp(-3 + 6 * U(gen));
    double r = std::exp(-4 + 8 * U(gen));
    double eps = (0.01 + 0.98 * U(gen)) * std::min<double>(N, s);
    KernelContext ctx(N, s, sp);
    double lhs = std::pow(R, 2 * s - N) * boggio_inner(r / (R * R), ctx);
    double rhs = 2 / s * std::pow(R, eps - N) * std::pow(r, s - eps / 2);
    if (lhs > rhs * (1 + 1e-12)) ++violations;
  }
  CHECK(violations == 0);
}
