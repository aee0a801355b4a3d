#include "fraclap/ball_solver.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "fraclap/error.hpp"
#include "fraclap/parallel.hpp"

namespace fraclap {

namespace {

bool radial_about_origin(const EvaluableField& f) { return f.radial_center && f.radial_center->norm() < 1e-14; }

void add_crossings(const Point& o, const Point& d, double rmax, const std::vector<SupportBall>& balls,
                   std::vector<double>& out) {
  for (const auto& b : balls) {
    Point p = o - b.center;
    double bb = dot(d, p), disc = bb * bb - (p.norm2() - b.radius * b.radius);
    if (disc <= 0) continue;
    double sq = std::sqrt(disc);
    for (double r : {-bb - sq, -bb + sq})
      if (r > 0 && r < rmax) out.push_back(r);
  }
}

EvaluableField ball_field(std::function<double(const Point&)> fn, int N, bool radial) {
  EvaluableField f;
  f.fn = std::move(fn);
  f.dim = N;
  f.support = {{Point::zero(N), 1.0}};
  if (radial) f.radial_center = Point::zero(N);
  return f;
}

}  // namespace

BallProblem BallProblem::constant(const KernelContext& ctx, double value, std::string label) {
  BallProblem p;
  p.ctx = ctx;
  p.label = std::move(label);
  p.rhs = ball_field([value](const Point&) { return value; }, ctx.N, true);
  p.rhs.smoothness = {1e300};
  if (value == 0) p.rhs.support = {{Point::zero(ctx.N), 0.0}};
  return p;
}

QuadResult solve_ball_eval(const BallProblem& p, const Point& x) {
  const int N = p.ctx.N;
  if (x.dim() != N || p.rhs.dim != N) throw Error(ErrorKind::Domain, "dimension mismatch");
  if (!p.rhs.fn) throw Error(ErrorKind::Precondition, "problem has no right-hand side");
  if (x.norm2() >= 1) return {};
  if (p.rhs.compact() && std::all_of(p.rhs.support.begin(), p.rhs.support.end(),
                                     [](const SupportBall& b) { return b.radius <= 0; }))
    return {};
  BallOptions o;
  o.singular_at = x;
  if (N >= 2 && radial_about_origin(p.rhs)) o.axis = x.norm() > 1e-14 ? x : Point::axis(N, 0);
  std::vector<SupportBall> inner_spheres;
  for (const auto& b : p.rhs.support)
    if (b.radius > 0 && !(b.center.norm() < 1e-14 && b.radius >= 1)) inner_spheres.push_back(b);
  if (!inner_spheres.empty()) {
    o.ray_breaks = [&](const Point& org, const Point& d, double rmax, std::vector<double>& out) {
      add_crossings(org, d, rmax, inner_spheres, out);
    };
  }
  const KernelContext& ctx = p.ctx;
  auto f = [&](const Point& y) -> Val<1> {
    double g = green(x, y, ctx);
    return {g == 0 ? 0.0 : g * p.rhs(y)};
  };
  auto r = quad_ball_k<1>(f, N, ctx.spec, o);
  if (!r.converged && r.err_estimate > 1e-4 * std::abs(r.value[0]) + 1e-10)
    throw Error(ErrorKind::Divergence, "Green quadrature did not converge at " + x.str());
  return {r.value[0], r.err_estimate, r.converged, r.subdivisions_used};
}

double solve_ball(const BallProblem& p, const Point& x) { return solve_ball_eval(p, x).value; }

EvaluableField solution_field(const BallProblem& p) {
  auto f = ball_field([p](const Point& x) { return solve_ball(p, x); }, p.ctx.N, radial_about_origin(p.rhs));
  f.smoothness = {smoothness_of_exponent(p.ctx.s())};
  auto at0 = solve_ball_eval(p, Point::zero(p.ctx.N));
  f.noise = std::max(p.ctx.spec.rel_tol * std::abs(at0.value), p.ctx.spec.abs_tol);
  return f;
}

double decay_norm(const BallProblem& p, const std::vector<Point>& grid) {
  std::vector<double> v(grid.size(), 0.0);
  const double s = p.ctx.s();
  for (const auto& x : grid)
    if (!(x.norm() < 1)) throw Error(ErrorKind::Domain, "decay grid must stay inside the ball");
  parallel_for(grid.size(), [&](std::size_t i) {
    double d = 1 - grid[i].norm();
    v[i] = std::pow(d, -s) * std::abs(solve_ball(p, grid[i]));
  });
  double mx = 0;
  for (double a : v) mx = std::max(mx, a);
  return mx;
}

double martin_extension(const BoundaryData& data, const KernelContext& ctx, const Point& x) {
  if (x.dim() != ctx.N) throw Error(ErrorKind::Domain, "dimension mismatch");
  if (x.norm2() >= 1) return 0.0;
  double v = 0;
  for (const auto& [th, w] : data.atoms) {
    if (!std::isfinite(w)) throw Error(ErrorKind::Domain, "atomic weight must be finite");
    v += w * martin(x, th, ctx);
  }
  if (data.g) v += quad_sphere([&](const Point& th) { return martin(x, th, ctx) * data.g(th); }, ctx.N, ctx.spec).value;
  return v;
}

HarmonicFactor HarmonicFactor::one(int N) {
  return HarmonicFactor(N, [](const Point&) { return 1.0; }, "one");
}

HarmonicFactor HarmonicFactor::coordinate(int N, int i) {
  if (i < 0 || i >= N) throw Error(ErrorKind::Domain, "coordinate index out of range");
  return HarmonicFactor(N, [i](const Point& x) { return x[i]; }, "x" + std::to_string(i));
}

HarmonicFactor HarmonicFactor::cross(int N, int i, int j) {
  if (i == j || i < 0 || j < 0 || i >= N || j >= N) throw Error(ErrorKind::Domain, "cross term needs i != j in range");
  return HarmonicFactor(N, [i, j](const Point& x) { return x[i] * x[j]; },
                        "x" + std::to_string(i) + "x" + std::to_string(j));
}

HarmonicFactor HarmonicFactor::diff_squares(int N, int i, int j) {
  if (i == j || i < 0 || j < 0 || i >= N || j >= N) throw Error(ErrorKind::Domain, "difference of squares needs i != j");
  return HarmonicFactor(N, [i, j](const Point& x) { return x[i] * x[i] - x[j] * x[j]; },
                        "x" + std::to_string(i) + "^2-x" + std::to_string(j) + "^2");
}

HarmonicFactor HarmonicFactor::custom(int N, std::function<double(const Point&)> fn, std::string name) {
  if (N < 1 || N > 3) throw Error(ErrorKind::Domain, "dimension must be 1..3");
  // FD Laplacian at 10 fixed interior points
  const double h = 1e-3;
  for (int k = 0; k < 10; ++k) {
    double r = 0.7 * (k + 1) / 10.0, a = 2.399963 * k;
    Point x = Point::zero(N);
    x[0] = r * std::cos(a);
    if (N > 1) x[1] = r * std::sin(a);
    if (N > 2) x[2] = 0.3 * std::cos(1.7 * k);
    double c = fn(x), lap = 0, scale = std::max(1.0, std::abs(c));
    for (int d = 0; d < N; ++d) {
      Point e = Point::axis(N, d, h);
      lap += fn(x + e) + fn(x - e) - 2 * c;
    }
    lap /= h * h;
    if (!(std::abs(lap) <= 1e-4 * scale)) throw Error(ErrorKind::Domain, "factor '" + name + "' is not harmonic");
  }
  return HarmonicFactor(N, std::move(fn), std::move(name));
}

double sharmonic_product(const HarmonicFactor& phi, const KernelContext& ctx, const Point& x) {
  if (phi.dim() != ctx.N || x.dim() != ctx.N) throw Error(ErrorKind::Domain, "dimension mismatch");
  double a = 1 - x.norm2();
  if (a <= 0) return 0.0;
  return std::pow(a, ctx.s() - 1) * phi(x);
}

CubicTable::CubicTable(double a, double b, std::vector<double> values, bool even_at_a) : a_(a), v_(std::move(values)) {
  const int n = static_cast<int>(v_.size());
  if (n < 5 || !(b > a)) throw Error(ErrorKind::Domain, "table needs at least 5 nodes on a proper interval");
  h_ = (b - a) / (n - 1);
  auto f = [&](int i) {
    if (i < 0 && even_at_a) return v_[-i];
    return v_[i];
  };
  d_.assign(n, 0.0);
  for (int i = 0; i < n; ++i) {
    bool left_ok = i >= 2 || even_at_a, right_ok = i <= n - 3;
    if (left_ok && right_ok) {
      d_[i] = (-f(i + 2) + 8 * f(i + 1) - 8 * f(i - 1) + f(i - 2)) / (12 * h_);
    } else if (i == 0) {
      d_[i] = (-25 * f(0) + 48 * f(1) - 36 * f(2) + 16 * f(3) - 3 * f(4)) / (12 * h_);
    } else if (i == 1) {
      d_[i] = (-3 * f(0) - 10 * f(1) + 18 * f(2) - 6 * f(3) + f(4)) / (12 * h_);
    } else if (i == n - 1) {
      d_[i] = (25 * f(n - 1) - 48 * f(n - 2) + 36 * f(n - 3) - 16 * f(n - 4) + 3 * f(n - 5)) / (12 * h_);
    } else {
      d_[i] = (3 * f(n - 1) + 10 * f(n - 2) - 18 * f(n - 3) + 6 * f(n - 4) - f(n - 5)) / (12 * h_);
    }
  }
}

double CubicTable::operator()(double t) const {
  const int n = static_cast<int>(v_.size());
  double u = (t - a_) / h_;
  int i = std::clamp(static_cast<int>(std::floor(u)), 0, n - 2);
  double q = u - i, q2 = q * q, q3 = q2 * q;
  return (2 * q3 - 3 * q2 + 1) * v_[i] + (q3 - 2 * q2 + q) * h_ * d_[i] + (-2 * q3 + 3 * q2) * v_[i + 1] +
         (q3 - q2) * h_ * d_[i + 1];
}

IteratedGreen::IteratedGreen(BallProblem p, int j, int table_nodes) {
  const double s = p.ctx.s();
  if (j <= 0 || !(j < s)) throw Error(ErrorKind::InvalidOrder, "iterated Green needs 0 < j < s");
  outer_ = p;
  outer_.ctx = p.ctx.with_order(s - j);
  inner_ = p;
  inner_.ctx = p.ctx.with_order(j);
  const int N = p.ctx.N;
  std::vector<double> vals(table_nodes, 0.0);
  if (N == 1) {
    mode_ = 1;
    double h = 2.0 / (table_nodes - 1);
    parallel_for(vals.size(), [&](std::size_t i) { vals[i] = solve_ball(inner_, Point{-1 + h * i}); });
    table_ = CubicTable(-1, 1, std::move(vals));
  } else if (radial_about_origin(p.rhs)) {
    mode_ = 2;
    double h = 1.0 / (table_nodes - 1);
    parallel_for(vals.size(), [&](std::size_t i) { vals[i] = solve_ball(inner_, Point::axis(N, 0, h * i)); });
    table_ = CubicTable(0, 1, std::move(vals), true);
  }
}

double IteratedGreen::inner(const Point& y) const {
  if (mode_ == 1) return table_(y[0]);
  if (mode_ == 2) return table_(y.norm());
  return solve_ball(inner_, y);
}

double IteratedGreen::operator()(const Point& x) const {
  BallProblem q = outer_;
  q.rhs = ball_field([this](const Point& y) { return inner(y); }, outer_.ctx.N, mode_ == 2);
  return solve_ball(q, x);
}

double IteratedGreen::direct(const Point& x) const {
  BallProblem q = outer_;
  const BallProblem& in = inner_;
  q.rhs = ball_field([&in](const Point& y) { return solve_ball(in, y); }, outer_.ctx.N, radial_about_origin(in.rhs));
  return solve_ball(q, x);
}

double iterated_green(const BallProblem& p, int j, const Point& x) { return IteratedGreen(p, j)(x); }

namespace {

// int_B k(z) dz where k is singular at a (polar origin) and possibly at b
double ball_integral_two_points(const std::function<double(const Point&)>& k, const Point& a, const Point& b,
                                int N, const QuadSpec& spec) {
  if (N == 1) {
    std::vector<double> pts{-1.0, 1.0};
    for (double t : {a[0], b[0]})
      if (t > -1 && t < 1) pts.push_back(t);
    std::sort(pts.begin(), pts.end());
    return quad_interval([&](double t) { return k(Point{t}); }, pts, spec).value;
  }
  BallOptions o;
  o.singular_at = a;
  o.ray_breaks = [&](const Point& org, const Point& d, double rmax, std::vector<double>& out) {
    double r = dot(b - org, d);
    if (r > 0 && r < rmax) out.push_back(r);
  };
  return quad_ball_k<1>([&](const Point& z) -> Val<1> { return {k(z)}; }, N, spec, o).value[0];
}

void check_defect_args(const Point& x, const Point& y, const KernelContext& ctx) {
  if (!(ctx.s() > 1)) throw Error(ErrorKind::InvalidOrder, "the defect needs s > 1");
  if (x.dim() != ctx.N || y.dim() != ctx.N) throw Error(ErrorKind::Domain, "dimension mismatch");
  if (!(y.norm() < 1)) throw Error(ErrorKind::Domain, "y must be interior");
  if (dist(x, y) == 0) throw Error(ErrorKind::CoincidentPoints, "defect at x = y");
}

}  // namespace

double green_defect(const Point& x, const Point& y, const KernelContext& ctx) {
  check_defect_args(x, y, ctx);
  if (x.norm2() >= 1) return 0.0;
  KernelContext g1 = ctx.with_order(1.0), gm = ctx.with_order(ctx.s() - 1);
  auto k = [&](const Point& z) {
    if (z == x || z == y) return 0.0;
    double a = green(x, z, g1);
    return a == 0 ? 0.0 : a * green(z, y, gm);
  };
  // polar about y: G_{s-1}(.,y) is the stronger singularity when s - 1 < 1
  double I = ball_integral_two_points(k, y, x, ctx.N, ctx.spec);
  return green(x, y, ctx) - I;
}

double green_defect_rhs(const Point& x, const Point& y, const KernelContext& ctx) {
  check_defect_args(x, y, ctx);
  if (x.norm2() >= 1) return 0.0;
  KernelContext g1 = ctx.with_order(1.0);
  auto k = [&](const Point& z) {
    if (z == x) return 0.0;
    double a = green(x, z, g1);
    return a == 0 ? 0.0 : a * poly_P(z, y, ctx);
  };
  double I = ball_integral_two_points(k, x, x, ctx.N, ctx.spec);
  return -4 * ctx.consts.k_green * (ctx.s() - 1) * I;
}

double exterior_potential(const RadialPolyBump& g, const KernelContext& ctx, const Point& x) {
  if (!ctx.consts.C_interaction) throw Error(ErrorKind::Branch, "interaction constant needs non-integer s");
  if (g.dim() != ctx.N || x.dim() != ctx.N) throw Error(ErrorKind::Domain, "dimension mismatch");
  if (g.is_zero()) return 0.0;
  if (!(g.center().norm() - g.radius() > 1)) throw Error(ErrorKind::Domain, "g must be supported away from the closed ball");
  const double e = -ctx.N - 2 * ctx.s();
  BallOptions o;
  o.center = g.center();
  o.radius = g.radius();
  if (ctx.N >= 2) o.axis = x - g.center();
  auto r = quad_ball_k<1>([&](const Point& y) -> Val<1> { return {g.evaluate(y) * std::pow(dist(x, y), e)}; }, ctx.N,
                          ctx.spec, o);
  return *ctx.consts.C_interaction * r.value[0];
}

double exterior_extension(const RadialPolyBump& g, const KernelContext& ctx, const Point& x) {
  if (ctx.order.integer() || ctx.order.m % 2 == 0)
    throw Error(ErrorKind::Regime, "exterior extension needs s in (k, k+1) with k odd");
  if (g.dim() != ctx.N || x.dim() != ctx.N) throw Error(ErrorKind::Domain, "dimension mismatch");
  for (const auto& t : g.terms())
    if (t.coef < 0) throw Error(ErrorKind::Domain, "g needs nonnegative coefficients");
  if (g.is_zero()) return 0.0;
  if (!(g.center().norm() - g.radius() > 1)) throw Error(ErrorKind::Domain, "g must be supported away from the closed ball");
  if (x.norm2() >= 1) return g.evaluate(x);
  BallProblem p;
  p.ctx = ctx;
  p.label = "exterior";
  p.rhs = ball_field([&](const Point& z) { return exterior_potential(g, ctx, z); }, ctx.N, false);
  return -solve_ball(p, x);
}

}  // namespace fraclap
