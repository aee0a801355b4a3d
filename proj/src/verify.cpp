#include "fraclap/verify.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>
#include <random>

#include "fraclap/counterexample.hpp"
#include "fraclap/error.hpp"
#include "fraclap/parallel.hpp"

namespace fraclap {

namespace {

nlohmann::json pt_json(const Point& p) {
  auto a = nlohmann::json::array();
  for (int i = 0; i < p.dim(); ++i) a.push_back(p[i]);
  return a;
}

double rel_scale(double a, double b) { return std::max({std::abs(a), std::abs(b), 1e-8}); }

double neg_fd_laplacian(const std::function<double(const Point&)>& f, const Point& x, double h) {
  const int N = x.dim();
  double c = f(x), acc = 0;
  for (int d = 0; d < N; ++d) {
    Point e = Point::axis(N, d, h);
    acc += f(x + e) + f(x - e) - 2 * c;
  }
  return -acc / (h * h);
}

struct Pair {
  double left, right;
};

Pair green_recurrence_sides(const KernelContext& ctx, const Point& x, const Point& y, double h) {
  if (!(ctx.s() > 1)) throw Error(ErrorKind::InvalidOrder, "the recurrence needs s > 1");
  if (x.dim() != ctx.N || y.dim() != ctx.N) throw Error(ErrorKind::Domain, "dimension mismatch");
  if (!(x.norm() + h < 1) || !(y.norm() < 1)) throw Error(ErrorKind::Geometry, "stencil leaves the ball");
  if (!(dist(x, y) > 2 * h)) throw Error(ErrorKind::Geometry, "stencil touches the pole y");
  double left = neg_fd_laplacian([&](const Point& p) { return green(p, y, ctx); }, x, h);
  double right = green(x, y, ctx.with_order(ctx.s() - 1)) - 4 * ctx.consts.k_green * (ctx.s() - 1) * poly_P(x, y, ctx);
  return {left, right};
}

Pair fund_recurrence_sides(const KernelContext& ctx, const Point& x, double h) {
  if (!(ctx.s() > 1)) throw Error(ErrorKind::InvalidOrder, "the recurrence needs s > 1");
  if (x.dim() != ctx.N) throw Error(ErrorKind::Domain, "dimension mismatch");
  if (!(x.norm() > 2 * h)) throw Error(ErrorKind::Geometry, "stencil touches the origin");
  double left = neg_fd_laplacian([&](const Point& p) { return fundamental(p, ctx); }, x, h);
  double right = fundamental(x, ctx.with_order(ctx.s() - 1)) + fundamental_remainder(x, ctx);
  return {left, right};
}

}  // namespace

nlohmann::json to_json(const CheckReport& r) {
  return {{"name", r.name}, {"residual", r.residual}, {"tolerance", r.tolerance}, {"passed", r.passed},
          {"context", r.context}};
}

CheckReport check_green_recurrence(const KernelContext& ctx, const Point& x, const Point& y, double h, double tol) {
  auto [l, r] = green_recurrence_sides(ctx, x, y, h);
  CheckReport rep{"green_recurrence", std::abs(l - r) / rel_scale(l, r), tol};
  rep.context = {{"N", ctx.N}, {"s", ctx.s()}, {"x", pt_json(x)}, {"y", pt_json(y)}, {"h", h},
                 {"left", l}, {"right", r}};
  rep.finish();
  return rep;
}

double green_recurrence_order(const KernelContext& ctx, const Point& x, const Point& y, double h) {
  auto a = green_recurrence_sides(ctx, x, y, h), b = green_recurrence_sides(ctx, x, y, h / 2);
  return std::log2(std::abs(a.left - a.right) / std::abs(b.left - b.right));
}

CheckReport check_fund_recurrence(const KernelContext& ctx, const Point& x, double h, double tol) {
  auto [l, r] = fund_recurrence_sides(ctx, x, h);
  CheckReport rep{"fund_recurrence", std::abs(l - r) / rel_scale(l, r), tol};
  rep.context = {{"N", ctx.N}, {"s", ctx.s()}, {"x", pt_json(x)}, {"h", h}, {"left", l}, {"right", r},
                 {"log_branch", ctx.consts.kappa_log_branch}};
  rep.finish();
  return rep;
}

double fund_recurrence_order(const KernelContext& ctx, const Point& x, double h) {
  auto a = fund_recurrence_sides(ctx, x, h), b = fund_recurrence_sides(ctx, x, h / 2);
  return std::log2(std::abs(a.left - a.right) / std::abs(b.left - b.right));
}

CheckReport check_martin_limit(const KernelContext& ctx, const Point& x, const Point& theta, int kmax, double tol) {
  if (!(x.norm() < 1)) throw Error(ErrorKind::Domain, "x must be interior");
  double M = martin(x, theta, ctx);
  std::vector<double> res;
  for (int k = 1; k <= kmax; ++k) {
    Point z = (1 - std::ldexp(1.0, -k)) * theta;
    double ratio = green(x, z, ctx) / std::pow(1 - z.norm2(), ctx.s());
    res.push_back(std::abs(ratio - M) / std::abs(M));
  }
  bool mono = true;
  for (int k = 5; k < kmax; ++k)
    if (res[k - 1] > 1e-12 && !(res[k] < res[k - 1])) mono = false;
  CheckReport rep{"martin_limit", res.back(), tol};
  rep.context = {{"N", ctx.N}, {"s", ctx.s()}, {"x", pt_json(x)}, {"theta", pt_json(theta)}, {"martin", M},
                 {"residuals", res}, {"monotone_from_k5", mono}};
  rep.finish();
  rep.passed = rep.passed && mono;
  return rep;
}

CheckReport check_martin_rep(const KernelContext& ctx, const Point& x, const Point& y, double tol) {
  const double s = ctx.s();
  if (!(s > 1)) throw Error(ErrorKind::InvalidOrder, "the representation needs s > 1");
  KernelContext lower = ctx.with_order(s - 1);
  double left = poly_P(x, y, ctx);
  double I = quad_sphere([&](const Point& th) { return martin(x, th, lower) * martin(y, th, ctx); }, ctx.N, ctx.spec).value;
  double right = 2 * k_green(ctx.N, 1.0) * (s - 1) * s / (lower.consts.k_green * ctx.consts.k_green) * I;
  CheckReport rep{"martin_rep", std::abs(left - right) / rel_scale(left, right), tol};
  rep.context = {{"N", ctx.N}, {"s", s}, {"x", pt_json(x)}, {"y", pt_json(y)}, {"left", left}, {"right", right}};
  rep.finish();
  return rep;
}

CheckReport check_distributional(const EvaluableField& u, const RhsData& f, const KernelContext& ctx,
                                 const std::vector<RadialPolyBump>& bumps, const std::vector<SupportBall>& omega,
                                 double tol) {
  CheckReport rep{"distributional", 0.0, tol};
  auto per = nlohmann::json::array();
  for (const auto& phi : bumps) {
    bool inside = false;
    for (const auto& b : omega)
      if (dist(phi.center(), b.center) + phi.radius() <= b.radius * (1 + 1e-12)) inside = true;
    if (!inside) throw Error(ErrorKind::Domain, "test bump leaves the domain");
    if (phi.smoothness().global_order < 2 * ctx.order.m + 2)
      throw Error(ErrorKind::Smoothness, "test bump must be C^{2m+2}");
  }
  for (const auto& phi : bumps) {
    auto left = pair_with_bump(u, phi, ctx);
    double right = f.f ? pair_rhs(f.f, phi, ctx.spec, f.f_support) : 0.0;
    for (const auto& [p, w] : f.atoms) right += w * phi.evaluate(p);
    double scale = std::max({std::abs(left.value), std::abs(right), left.abs_value, 1e-8});
    double r = std::abs(left.value - right) / scale;
    rep.residual = std::max(rep.residual, r);
    per.push_back({{"center", pt_json(phi.center())}, {"radius", phi.radius()}, {"left", left.value},
                   {"right", right}, {"scale", scale}, {"residual", r}});
  }
  rep.context = {{"N", ctx.N}, {"s", ctx.s()}, {"bumps", per}};
  rep.finish();
  return rep;
}

CheckReport check_mass_identity(const KernelContext& ctx, const std::vector<Point>& xs, double tol) {
  auto p = BallProblem::constant(ctx, 1.0);
  std::vector<double> r(xs.size(), 0.0);
  parallel_for(xs.size(), [&](std::size_t i) {
    double left = solve_ball(p, xs[i]);
    double right = ctx.consts.gamma_ball * pos_pow(1 - xs[i].norm2(), ctx.s());
    r[i] = std::abs(left - right) / rel_scale(left, right);
  });
  CheckReport rep{"mass_identity", r.empty() ? 0.0 : *std::max_element(r.begin(), r.end()), tol};
  rep.context = {{"N", ctx.N}, {"s", ctx.s()}, {"points", xs.size()}};
  rep.finish();
  return rep;
}

namespace {

Point random_in_ball(std::mt19937_64& rng, int N, double rmin, double rmax) {
  std::normal_distribution<double> n01;
  std::uniform_real_distribution<double> u01(0.0, 1.0);
  Point p = Point::zero(N);
  double nn = 0;
  while (nn < 1e-8) {
    for (int d = 0; d < N; ++d) p[d] = n01(rng);
    nn = p.norm();
  }
  double r = std::pow(std::pow(rmin, N) + u01(rng) * (std::pow(rmax, N) - std::pow(rmin, N)), 1.0 / N);
  return (r / nn) * p;
}

// interior pairs with |x|, |y| <= 0.7 and |x - y| >= 0.3
std::pair<Point, Point> random_pair(std::mt19937_64& rng, int N) {
  for (;;) {
    Point x = random_in_ball(rng, N, 0.0, 0.7), y = random_in_ball(rng, N, 0.0, 0.7);
    if (dist(x, y) >= 0.3) return {x, y};
  }
}

struct NS {
  int N;
  double s;
};

using Runner = std::function<std::vector<CheckReport>(const SuiteConfig&, std::mt19937_64&)>;

std::vector<NS> pick(const SuiteConfig& cfg, std::vector<NS> defaults, const std::function<bool(NS)>& ok) {
  if (cfg.dim || cfg.order) {
    NS p{cfg.dim.value_or(defaults.front().N), cfg.order.value_or(defaults.front().s)};
    if (ok(p)) return {p};
    return {};
  }
  return defaults;
}

CheckReport tag(CheckReport r, const std::string& name) {
  r.name = name;
  return r;
}

CheckReport order_report(const std::string& name, double order, nlohmann::json ctx) {
  CheckReport r{name, std::abs(order - 2.0), 0.3};
  ctx["observed_order"] = order;
  r.context = std::move(ctx);
  r.finish();
  return r;
}

const std::vector<std::pair<std::string, Runner>>& registry() {
  static const std::vector<std::pair<std::string, Runner>> reg = {
      {"green_recurrence",
       [](const SuiteConfig& cfg, std::mt19937_64& rng) {
         std::vector<CheckReport> out;
         for (auto p : pick(cfg, {{1, 1.5}, {2, 1.5}, {2, 2.0}, {3, 2.5}}, [](NS q) { return q.s > 1; })) {
           KernelContext ctx(p.N, p.s, cfg.spec);
           for (int k = 0; k < 5; ++k) {
             auto [x, y] = random_pair(rng, p.N);
             out.push_back(check_green_recurrence(ctx, x, y));
             double ord = green_recurrence_order(ctx, x, y, 1e-2);
             out.push_back(order_report("green_recurrence_order", ord, out.back().context));
           }
         }
         return out;
       }},
      {"fund_recurrence",
       [](const SuiteConfig& cfg, std::mt19937_64& rng) {
         std::vector<CheckReport> out;
         for (auto p : pick(cfg, {{3, 2.0}, {2, 2.0}, {1, 1.5}}, [](NS q) { return q.s > 1; })) {
           KernelContext ctx(p.N, p.s, cfg.spec);
           for (int k = 0; k < 3; ++k) {
             Point x = random_in_ball(rng, p.N, 0.5, 1.5);
             out.push_back(check_fund_recurrence(ctx, x));
             double ord = fund_recurrence_order(ctx, x, 1e-2);
             out.push_back(order_report("fund_recurrence_order", ord, out.back().context));
           }
         }
         return out;
       }},
      {"martin_limit",
       [](const SuiteConfig& cfg, std::mt19937_64& rng) {
         std::vector<CheckReport> out;
         for (auto p : pick(cfg, {{2, 1.5}, {1, 1.5}, {3, 0.75}}, [](NS q) { return q.s > 0; })) {
           KernelContext ctx(p.N, p.s, cfg.spec);
           Point th = Point::axis(p.N, 0);
           out.push_back(check_martin_limit(ctx, Point::axis(p.N, 0, 0.3), th));
           out.push_back(check_martin_limit(ctx, random_in_ball(rng, p.N, 0.0, 0.6), th));
           auto origin = check_martin_limit(ctx, Point::zero(p.N), th);
           origin.context["expected"] = ctx.consts.k_green / p.s;
           out.push_back(tag(origin, "martin_limit_origin"));
         }
         return out;
       }},
      {"martin_rep",
       [](const SuiteConfig& cfg, std::mt19937_64& rng) {
         std::vector<CheckReport> out;
         for (auto p : pick(cfg, {{2, 1.5}, {1, 1.5}}, [](NS q) { return q.s > 1; })) {
           KernelContext ctx(p.N, p.s, cfg.spec);
           double tol = p.N == 1 ? 1e-10 : 1e-7;
           for (int k = 0; k < 10; ++k) {
             Point x = random_in_ball(rng, p.N, 0.0, 0.7), y = random_in_ball(rng, p.N, 0.0, 0.7);
             out.push_back(check_martin_rep(ctx, x, y, tol));
           }
         }
         return out;
       }},
      {"mass_identity",
       [](const SuiteConfig& cfg, std::mt19937_64& rng) {
         std::vector<CheckReport> out;
         for (auto p : pick(cfg, {{2, 1.5}, {1, 1.0}}, [](NS q) { return q.s > 0; })) {
           KernelContext ctx(p.N, p.s, cfg.spec);
           std::vector<Point> xs;
           for (int k = 0; k < 20; ++k) xs.push_back(random_in_ball(rng, p.N, 0.0, 0.95));
           out.push_back(check_mass_identity(ctx, xs));
         }
         return out;
       }},
      {"distributional_torsion",
       [](const SuiteConfig& cfg, std::mt19937_64&) {
         std::vector<CheckReport> out;
         for (auto p : pick(cfg, {{1, 1.5}}, [](NS q) { return q.s > 0 && q.N <= 2; })) {
           KernelContext ctx(p.N, p.s, cfg.spec);
           auto prob = BallProblem::constant(ctx, 1.0);
           auto u = solution_field(prob);
           int m = ctx.order.m;
           double e = 2.0 * m + 4;
           std::vector<RadialPolyBump> bumps{RadialPolyBump::single(Point::zero(p.N), 0.5, e),
                                             RadialPolyBump::single(Point::axis(p.N, 0, 0.4), 0.4, e),
                                             RadialPolyBump::single(Point::axis(p.N, 0, -0.5), 0.3, e)};
           RhsData f{[](const Point&) { return 1.0; }, {}, {}};
           out.push_back(tag(check_distributional(u, f, ctx, bumps, {{Point::zero(p.N), 1.0}}), "distributional_torsion"));
         }
         return out;
       }},
      {"distributional_martin",
       [](const SuiteConfig& cfg, std::mt19937_64&) {
         std::vector<CheckReport> out;
         for (auto p : pick(cfg, {{1, 1.5}}, [](NS q) { return q.s > 0 && q.N == 1; })) {
           KernelContext ctx(p.N, p.s, cfg.spec);
           Point th{1.0};
           EvaluableField u;
           u.dim = 1;
           u.fn = [ctx, th](const Point& x) { return martin_extension(BoundaryData{{}, {{th, 1.0}}}, ctx, x); };
           u.support = {{Point{0.0}, 1.0}};
           double e = 2.0 * ctx.order.m + 4;
           std::vector<RadialPolyBump> bumps{RadialPolyBump::single(Point{0.0}, 0.5, e),
                                             RadialPolyBump::single(Point{0.5}, 0.3, e),
                                             RadialPolyBump::single(Point{-0.4}, 0.4, e)};
           out.push_back(tag(check_distributional(u, RhsData{}, ctx, bumps, {{Point{0.0}, 1.0}}), "distributional_martin"));
         }
         return out;
       }},
      {"counterexample",
       [](const SuiteConfig& cfg, std::mt19937_64&) {
         std::vector<CheckReport> out;
         auto odd = [](NS q) {
           FracOrder o = frac_split(q.s);
           return q.N == 1 && !o.integer() && o.m % 2 == 1;
         };
         for (auto p : pick(cfg, {{1, 1.5}}, odd)) {
           auto c = CEConfig::standard(p.N, p.s);
           c.spec = cfg.spec;
           auto res = build(c);
           auto rep = verify_ce(res);
           CheckReport r{"counterexample", std::max(rep.pairing_D, rep.pairing_A), rep.pairing_tol};
           r.context = nlohmann::json::parse(rep.to_json());
           r.context["N"] = p.N;
           r.context["s"] = p.s;
           r.context["a"] = res.a;
           r.finish();
           r.passed = rep.passed;
           out.push_back(r);
         }
         return out;
       }},
      {"exterior_sign",
       [](const SuiteConfig& cfg, std::mt19937_64&) {
         std::vector<CheckReport> out;
         for (auto p : pick(cfg, {{1, 0.5}, {1, 1.5}, {1, 2.5}}, [](NS q) { return !frac_split(q.s).integer(); })) {
           KernelContext ctx(p.N, p.s, cfg.spec);
           int m = ctx.order.m;
           auto g = RadialPolyBump::single(Point::zero(p.N), 0.25, 2.0 * m + 3);
           std::vector<Point> pts;
           for (double r : {0.35, 0.6, 1.25, 3.0, 10.25}) pts.push_back(Point::axis(p.N, 0, r));
           auto res = exterior_sign_check(g, ctx, pts);
           int bad = 0;
           auto vals = nlohmann::json::array();
           for (const auto& r : res) {
             bad += r.ok ? 0 : 1;
             vals.push_back(r.value);
           }
           CheckReport rep{"exterior_sign", static_cast<double>(bad), 0.0};
           rep.context = {{"N", p.N}, {"s", p.s}, {"m", m}, {"expected_sign", m % 2 ? 1 : -1}, {"values", vals}};
           rep.finish();
           out.push_back(rep);
         }
         return out;
       }},
  };
  return reg;
}

}  // namespace

std::vector<std::string> suite_check_names() {
  std::vector<std::string> n;
  for (const auto& [k, v] : registry()) n.push_back(k);
  return n;
}

std::vector<CheckReport> run_suite(const std::vector<std::string>& names, const SuiteConfig& cfg) {
  std::vector<std::string> sel;
  for (const auto& n : names) {
    if (n == "all") {
      for (const auto& k : suite_check_names())
        if (std::find(sel.begin(), sel.end(), k) == sel.end()) sel.push_back(k);
      continue;
    }
    auto it = std::find_if(registry().begin(), registry().end(), [&](const auto& e) { return e.first == n; });
    if (it == registry().end()) throw Error(ErrorKind::UnknownCheck, "unknown check '" + n + "'");
    if (std::find(sel.begin(), sel.end(), n) == sel.end()) sel.push_back(n);
  }
  // one generator per check, seeded from the suite seed and the check's slot,
  // so results do not depend on which checks run or in what order
  std::vector<std::vector<CheckReport>> parts(sel.size());
  parallel_for(sel.size(), [&](std::size_t i) {
    const auto& reg = registry();
    auto it = std::find_if(reg.begin(), reg.end(), [&](const auto& e) { return e.first == sel[i]; });
    std::seed_seq seq{cfg.seed, static_cast<std::uint64_t>(it - reg.begin())};
    std::mt19937_64 rng(seq);
    parts[i] = it->second(cfg, rng);
  });
  std::vector<CheckReport> out;
  for (auto& p : parts)
    for (auto& r : p) out.push_back(std::move(r));
  return out;
}

}  // namespace fraclap
