// One PASS/FAIL line per acceptance criterion. Exit status 0 iff all pass.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <random>
#include <string>
#include <vector>

#include "fraclap/ball_solver.hpp"
#include "fraclap/counterexample.hpp"
#include "fraclap/freespace_solver.hpp"
#include "fraclap/verify.hpp"

using namespace fraclap;

namespace {

struct Outcome {
  bool pass;
  std::string detail;
};

int failures = 0;

void criterion(int id, const char* title, const std::function<Outcome()>& body) {
  auto t0 = std::chrono::steady_clock::now();
  Outcome o;
  try {
    o = body();
  } catch (const std::exception& e) {
    o = {false, std::string("exception: ") + e.what()};
  }
  double dt = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  if (!o.pass) ++failures;
  std::printf("%s %2d %s: %s [%.1fs]\n", o.pass ? "PASS" : "FAIL", id, title, o.detail.c_str(), dt);
  std::fflush(stdout);
}

std::string fmt(const char* f, double a, double b = 0, double c = 0) {
  char buf[256];
  std::snprintf(buf, sizeof buf, f, a, b, c);
  return buf;
}

Point random_in_ball(std::mt19937_64& rng, int N, double rmax) {
  std::uniform_real_distribution<double> U(-1, 1);
  for (;;) {
    Point p = Point::zero(N);
    for (int d = 0; d < N; ++d) p[d] = rmax * U(rng);
    if (p.norm() < rmax) return p;
  }
}

}  // namespace

int main() {
  std::mt19937_64 rng(20240607);

  criterion(1, "closed-form Green value", [] {
    KernelContext ctx(1, 0.5);
    double G = green(Point{0.0}, Point{0.5}, ctx);
    double want = std::log(2 + std::sqrt(3.0)) / std::numbers::pi;
    double rel = std::abs(G - want) / want;
    return Outcome{rel < 1e-9, fmt("G=%.12g want=%.12g rel=%.2e (tol 1e-9)", G, want, rel)};
  });

  criterion(2, "torsion identity", [&] {
    bool ok = true;
    std::string d;
    for (auto [N, s] : {std::pair{1, 0.5}, {1, 1.0}, {1, 1.5}, {2, 1.5}, {3, 1.25}}) {
      KernelContext ctx(N, s);
      std::vector<Point> xs;
      for (int k = 0; k < 20; ++k) xs.push_back(random_in_ball(rng, N, 0.95));
      auto r = check_mass_identity(ctx, xs, 1e-5);
      ok = ok && r.passed;
      d += fmt("(%g,%g) %.1e; ", N, s, r.residual);
    }
    return Outcome{ok, d + "tol 1e-5"};
  });

  criterion(3, "Green recurrence", [&] {
    bool ok = true;
    double worst = 0, ord_lo = 10, ord_hi = -10;
    for (auto [N, s] : {std::pair{1, 1.5}, {2, 1.5}, {2, 2.0}, {3, 2.5}}) {
      KernelContext ctx(N, s);
      for (int k = 0; k < 5; ++k) {
        Point x, y;
        do {
          x = random_in_ball(rng, N, 0.7);
          y = random_in_ball(rng, N, 0.7);
        } while (dist(x, y) < 0.3);
        auto r = check_green_recurrence(ctx, x, y, 1e-3, 1e-4);
        double o = green_recurrence_order(ctx, x, y, 1e-3);
        worst = std::max(worst, r.residual);
        ord_lo = std::min(ord_lo, o);
        ord_hi = std::max(ord_hi, o);
        ok = ok && r.passed && std::abs(o - 2) <= 0.3;
      }
    }
    return Outcome{ok, fmt("max residual %.2e (tol 1e-4), order in [%.3f, %.3f] (2 +- 0.3)", worst, ord_lo, ord_hi)};
  });

  criterion(4, "fundamental solution recurrence", [&] {
    bool ok = true;
    std::string d;
    for (auto [N, s] : {std::pair{2, 2.0}, {3, 2.0}, {1, 1.5}}) {
      KernelContext ctx(N, s);
      double worst = 0;
      for (int k = 0; k < 5; ++k) {
        Point x;
        do x = random_in_ball(rng, N, 1.5);
        while (x.norm() < 0.5);
        auto r = check_fund_recurrence(ctx, x, 1e-3, 1e-4);
        worst = std::max(worst, r.residual);
        ok = ok && r.passed;
      }
      d += fmt("(%g,%g) %.1e", N, s, worst) + (ctx.consts.kappa_log_branch ? " log; " : "; ");
    }
    return Outcome{ok, d + "tol 1e-4"};
  });

  criterion(5, "Martin representation", [&] {
    KernelContext c2(2, 1.5), c1(1, 1.5);
    double w2 = 0, w1 = 0;
    for (int k = 0; k < 10; ++k)
      w2 = std::max(w2, check_martin_rep(c2, random_in_ball(rng, 2, 0.9), random_in_ball(rng, 2, 0.9)).residual);
    for (int k = 0; k < 10; ++k)
      w1 = std::max(w1, check_martin_rep(c1, random_in_ball(rng, 1, 0.9), random_in_ball(rng, 1, 0.9)).residual);
    return Outcome{w2 < 1e-7 && w1 < 1e-10, fmt("N=2 %.2e (tol 1e-7), N=1 %.2e (tol 1e-10)", w2, w1)};
  });

  criterion(6, "counterexample N=1 s=1.5", [] {
    auto cfg = CEConfig::standard(1, 1.5);
    cfg.grid = 201;
    auto res = build(cfg);
    auto rep = verify_ce(res);
    bool ok = rep.f_min > 0 && rep.u_pos_on_A && rep.u_neg_where_g_pos && rep.pairing_D < 1e-3 && rep.pairing_A < 1e-3;
    return Outcome{ok, fmt("f_min=%.3e, pairing D %.1e A %.1e (tol 1e-3)", rep.f_min, rep.pairing_D, rep.pairing_A) +
                           (rep.u_pos_on_A ? ", u>0 on A" : ", u>0 on A violated") +
                           (rep.u_neg_where_g_pos ? ", u<0 on supp g" : ", u<0 on supp g violated")};
  });

  criterion(7, "exterior sign law", [] {
    bool ok = true;
    std::string d;
    for (double s : {0.5, 1.5, 2.5}) {
      KernelContext ctx(1, s);
      int m = ctx.order.m;
      auto g = RadialPolyBump::single(Point{0.0}, 0.25, 2.0 * m + 3);
      std::vector<Point> pts{Point{0.4}, Point{-0.7}, Point{1.3}, Point{-3.0}, Point{12.0}};
      int good = 0;
      for (const auto& r : exterior_sign_check(g, ctx, pts)) good += r.ok;
      ok = ok && good == 5;
      d += fmt("s=%g sign %+g: %g/5; ", s, m % 2 ? 1.0 : -1.0, good);
    }
    return Outcome{ok, d};
  });

  criterion(8, "sigma-first FD reproduces f = 1", [] {
    KernelContext ctx(1, 1.5);
    auto u = solution_field(BallProblem::constant(ctx, 1.0));
    double worst = 0;
    for (double x : {-0.6, -0.3, 0.0, 0.25, 0.5}) worst = std::max(worst, std::abs(frac_s_sigma_first(u, Point{x}, ctx, 0.05) - 1));
    return Outcome{worst < 1e-2, fmt("max |Lu - 1| = %.2e at 5 points, h = 0.05 (tol 1e-2)", worst)};
  });

  criterion(9, "free-space positivity N=3 s=1.25", [] {
    FreeProblem p{KernelContext(3, 1.25), RadialPolyBump::single(Point{0.2, -0.1, 0.0}, 0.8, 3.0)};
    double mn = positivity_scan(p, cube_grid(3, 3.0, 11));
    return Outcome{mn > 0, fmt("min u over 11^3 grid on [-3,3]^3 = %.4e", mn)};
  });

  criterion(10, "mass identity and decay bound", [&] {
    KernelContext ctx(2, 1.5);
    std::vector<Point> xs;
    for (int k = 0; k < 20; ++k) xs.push_back(random_in_ball(rng, 2, 0.95));
    auto mass = check_mass_identity(ctx, xs, 1e-5);
    double bound = 10 * gamma_ball(2, 1.5) * std::pow(2.0, 1.5);
    std::vector<Point> grid;
    for (int i = 1; i < 20; ++i) {
      double r = -1 + 0.1 * i;
      grid.push_back(Point{r, 0.0});
      grid.push_back(Point{0.0, r * 0.95});
    }
    std::uniform_real_distribution<double> U(-1, 1);
    double worst = 0;
    bool finite = true;
    for (int t = 0; t < 5; ++t) {
      double a = 4 * U(rng), b = 4 * U(rng), sg = U(rng) < 0 ? -1.0 : 1.0;
      // sup norm 1, attained at the origin
      BallProblem p = BallProblem::constant(ctx, 1.0);
      p.rhs.fn = [=](const Point& y) { return sg * std::cos(a * y[0] + b * y[1]); };
      p.rhs.radial_center.reset();
      double d = decay_norm(p, grid);
      finite = finite && std::isfinite(d);
      worst = std::max(worst, d);
    }
    bool ok = mass.passed && finite && worst <= bound;
    return Outcome{ok, fmt("mass %.2e (tol 1e-5), max decay norm %.4f <= %.4f", mass.residual, worst, bound)};
  });

  std::printf("%s: %d failing\n", failures ? "FAIL" : "PASS", failures);
  return failures ? 1 : 0;
}
