#include <doctest.h>

#include <cmath>
#include <numbers>

#include "fraclap/frac_op.hpp"
#include "fraclap/freespace_solver.hpp"

using namespace fraclap;
using std::numbers::pi;

TEST_CASE("shell theorem outside the support") {
  // steep radial bump: outside it the potential is mass * F
  auto f = RadialPolyBump::single(Point{0.1, 0.0, -0.2}, 0.5, 8.0, 100.0);
  FreeProblem p{KernelContext(3, 1.0), f};
  double mass = 100.0 * std::pow(0.25, 8.0) * 4 * pi * std::pow(0.5, 3) * 0.5 * std::beta(1.5, 9.0);
  for (Point x : {Point{2.0, 0.0, 0.0}, Point{0.3, -1.1, 0.9}}) {
    double r = dist(x, f.center());
    CHECK(solve_free(p, x) == doctest::Approx(mass / (4 * pi * r)).epsilon(1e-8));
  }
  // 2D log branch
  auto f2 = RadialPolyBump::single(Point{0.0, 0.0}, 1.0, 4.0);
  FreeProblem p2{KernelContext(2, 1.0), f2};
  double m2 = 2 * pi * 0.5 / 5.0;  // int_0^1 (1-r^2)^4 r dr = 1/10
  CHECK(p2.ctx.consts.kappa_log_branch);
  CHECK(solve_free(p2, Point{3.0, 0.0}) == doctest::Approx(-m2 * std::log(3.0) / (2 * pi)).epsilon(1e-8));
  CHECK(solve_free(FreeProblem{KernelContext(3, 1.0), RadialPolyBump(Point{0.0, 0.0, 0.0}, 1.0, {})},
                   Point{1.0, 0.0, 0.0}) == 0.0);
}

TEST_CASE("classical 1D case: u'' = -f inside the support") {
  FreeProblem p{KernelContext(1, 1.0), RadialPolyBump::single(Point{0.0}, 1.0, 2.0)};
  auto err = [&](double h) {
    double x = 0.3;
    double d2 = (solve_free(p, Point{x + h}) - 2 * solve_free(p, Point{x}) + solve_free(p, Point{x - h})) / (h * h);
    return std::abs(d2 + p.rhs.evaluate(Point{x}));
  };
  double e1 = err(0.02), e2 = err(0.01);
  CHECK(e1 < 1e-3);
  CHECK(e1 / e2 == doctest::Approx(4.0).epsilon(0.1));
}

TEST_CASE("positivity scan in the 2s < N regime") {
  FreeProblem p{KernelContext(3, 1.25), RadialPolyBump::single(Point{0.0, 0.0, 0.0}, 1.0, 4.0)};
  CHECK(p.regime() == "2s<N");
  auto grid = cube_grid(3, 3.0, 5);
  CHECK(grid.size() == 125);
  CHECK(positivity_scan(p, grid) > 0);
  CHECK(solve_free(p, Point{3.0, 0.0, 0.0}) < solve_free(p, Point{2.0, 0.0, 0.0}));
  FreeProblem z{KernelContext(3, 1.25), RadialPolyBump(Point{0.0, 0.0, 0.0}, 1.0, {})};
  CHECK(positivity_scan(z, grid) == 0.0);
  FreeProblem wrong{KernelContext(1, 1.25), RadialPolyBump::single(Point{0.0}, 1.0, 4.0)};
  CHECK(wrong.regime() == "2s>N");
  CHECK_THROWS_AS(positivity_scan(wrong, cube_grid(1, 3.0, 5)), Error);
  FreeProblem neg{KernelContext(3, 1.25), RadialPolyBump::single(Point{0.0, 0.0, 0.0}, 1.0, 4.0, -1.0)};
  CHECK_THROWS_AS(positivity_scan(neg, grid), Error);
}

TEST_CASE("polynomials of degree < 2s are invisible to the pairing") {
  KernelContext ctx(1, 1.25);
  auto phi = RadialPolyBump::single(Point{0.2}, 0.7, 6.0);
  auto L = [&](double y) { return frac_s_smooth(phi, Point{y}, ctx); };
  const double R = 200, q = 1 + 2 * 1.25;
  // beyond R, L ~ A_pm |y|^-q; the tails of y^k L are integrated with that profile
  double Ap = L(R) * std::pow(R, q), Am = L(-R) * std::pow(R, q);
  auto tail = [&](int k) {
    double t = std::pow(R, k + 1 - q) / (q - k - 1);
    return Ap * t + (k % 2 ? -Am : Am) * t;
  };
  double mom[3], absmom[3];
  for (int k = 0; k < 3; ++k) {
    auto f = [&](double y) { return std::pow(y, k) * L(y); };
    std::vector<double> pts{-R, -10, -1, 0.2 - 0.7, 0.2, 0.2 + 0.7, 1, 10, R};
    mom[k] = quad_interval(f, pts, ctx.spec).value + tail(k);
    absmom[k] = quad_interval([&](double y) { return std::abs(f(y)); }, pts, ctx.spec).value;
  }
  // 1, y and y^2 all have degree < 2s = 2.5
  for (int k = 0; k < 3; ++k) CHECK(std::abs(mom[k]) < 1e-4 * absmom[k]);
  double pairing = mom[0] - 2 * mom[1] + 3 * mom[2];
  CHECK(std::abs(pairing) < 1e-4 * (absmom[0] + 2 * absmom[1] + 3 * absmom[2]));
}
