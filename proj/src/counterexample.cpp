#include "fraclap/counterexample.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <nlohmann/json.hpp>

#include "fraclap/error.hpp"
#include "fraclap/parallel.hpp"

namespace fraclap {

CEConfig CEConfig::standard(int N, double s) {
  CEConfig c;
  c.N = N;
  c.s = s;
  c.D = {Point::axis(N, 0, -0.5), 0.5};
  c.A = {Point::axis(N, 0, 0.5), 0.25};
  FracOrder o = frac_split(s);
  c.g = RadialPolyBump::single(c.D.center, 0.25, 2.0 * o.m + 3);
  if (N > 1) c.grid = 21;
  return c;
}

void CEConfig::validate() const {
  if (N < 1 || N > 3) throw Error(ErrorKind::Domain, "dimension must be 1..3");
  FracOrder o = frac_split(s);
  if (o.integer() || o.m % 2 == 0) throw Error(ErrorKind::Regime, "the construction needs s in (k, k+1) with k odd");
  if (D.center.dim() != N || A.center.dim() != N || g.dim() != N) throw Error(ErrorKind::Domain, "dimension mismatch");
  if (!(D.radius > 0 && A.radius > 0)) throw Error(ErrorKind::Geometry, "component radii must be positive");
  if (!(dist(D.center, A.center) > D.radius + A.radius)) throw Error(ErrorKind::Geometry, "D and A must be at positive distance");
  if (g.is_zero()) throw Error(ErrorKind::Domain, "g must not vanish identically");
  for (const auto& t : g.terms())
    if (t.coef < 0) throw Error(ErrorKind::Domain, "g needs nonnegative coefficients");
  if (!(dist(g.center(), D.center) + g.radius() < D.radius))
    throw Error(ErrorKind::Geometry, "supp g must lie strictly inside D");
  if (g.smoothness().global_order < 2 * o.m + 2) throw Error(ErrorKind::Smoothness, "g must be C^{2m+2}");
  if (!(margin > 1)) throw Error(ErrorKind::Config, "margin must exceed 1");
  if (grid < 3) throw Error(ErrorKind::Config, "grid too coarse");
}

std::vector<Point> component_grid(const SupportBall& b, int N, int n) {
  std::vector<Point> out;
  if (N == 1) {
    for (int i = 0; i < n; ++i) out.push_back(Point{b.center[0] - b.radius + 2 * b.radius * i / (n - 1)});
    return out;
  }
  double h = 2 * b.radius / (n - 1);
  int nk = N > 2 ? n : 1;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < nk; ++k) {
        Point p = b.center;
        p[0] += -b.radius + h * i;
        p[1] += -b.radius + h * j;
        if (N > 2) p[2] += -b.radius + h * k;
        if (dist(p, b.center) <= b.radius * (1 + 1e-12)) out.push_back(p);
      }
  return out;
}

namespace {
bool on_axis(const Point& q, const Point& p, const Point& d) {
  Point v = q - p;
  Point perp = v - (dot(v, d) / d.norm2()) * d;
  return perp.norm() < 1e-12 * (1 + v.norm());
}
}  // namespace

double CEResult::g_potential(const Point& x) const {
  const RadialPolyBump& g = cfg.g;
  BallOptions o;
  o.center = g.center();
  o.radius = g.radius();
  if (cfg.N >= 2) o.axis = dist(x, g.center()) > 1e-14 ? x - g.center() : Point::axis(cfg.N, 0);
  const double e = -cfg.N - 2 * cfg.s;
  auto r = quad_ball_k<1>([&](const Point& y) -> Val<1> { return {g.evaluate(y) * std::pow(dist(x, y), e)}; }, cfg.N,
                          ctx.spec, o);
  return C * r.value[0];
}

double CEResult::psi_potential(const Point& x) const {
  BallOptions o;
  o.center = cfg.A.center;
  o.radius = cfg.A.radius;
  if (cfg.N >= 2) o.axis = dist(x, cfg.A.center) > 1e-14 ? x - cfg.A.center : Point::axis(cfg.N, 0);
  const double e = -cfg.N - 2 * cfg.s;
  auto r = quad_ball_k<1>([&](const Point& y) -> Val<1> { return {psi.evaluate(y) * std::pow(dist(x, y), e)}; },
                          cfg.N, ctx.spec, o);
  return C * r.value[0];
}

double CEResult::f_at(const Point& x, double a_val) const {
  const double tol = 1e-12;
  if (dist(x, cfg.A.center) <= cfg.A.radius * (1 + tol)) return a_val - g_potential(x);
  if (dist(x, cfg.D.center) <= cfg.D.radius * (1 + tol)) return a_val * psi_potential(x) - frac_s_smooth(cfg.g, x, ctx);
  throw Error(ErrorKind::Domain, "f is defined on the closed components only");
}

double CEResult::f_min_for(double a_val) const {
  double mn = std::numeric_limits<double>::infinity();
  for (const auto& s : samples) mn = std::min(mn, a_val * s.alpha + s.beta);
  return mn;
}

EvaluableField CEResult::u_field() const {
  EvaluableField f;
  CEResult copy = *this;
  f.fn = [copy](const Point& x) { return copy.u(x); };
  f.dim = cfg.N;
  f.support = {cfg.D, cfg.A};
  f.smoothness = {std::min(cfg.g.smoothness().global_order, smoothness_of_exponent(cfg.s))};
  Point d = cfg.A.center - cfg.D.center;
  if (on_axis(cfg.g.center(), cfg.D.center, d)) f.axis_line = std::make_pair(cfg.D.center, d);
  return f;
}

CEResult build(const CEConfig& cfg) {
  cfg.validate();
  CEResult r;
  r.cfg = cfg;
  r.ctx = KernelContext(cfg.N, cfg.s, cfg.spec);
  r.C = *r.ctx.consts.C_interaction;
  r.psi = RadialPolyBump::single(cfg.A.center, cfg.A.radius, cfg.s, gamma_ball(cfg.N, cfg.s));

  auto gA = component_grid(cfg.A, cfg.N, cfg.grid);
  auto gD = component_grid(cfg.D, cfg.N, cfg.grid);
  std::vector<double> Ig(gA.size()), J(gD.size()), Lg(gD.size());
  parallel_for(gA.size(), [&](std::size_t i) { Ig[i] = r.g_potential(gA[i]); });
  parallel_for(gD.size(), [&](std::size_t i) {
    J[i] = r.psi_potential(gD[i]);
    Lg[i] = frac_s_smooth(cfg.g, gD[i], r.ctx);
  });
  double thrA = *std::max_element(Ig.begin(), Ig.end());
  double thrD = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < gD.size(); ++i) {
    if (!(J[i] > 1e-300) || !std::isfinite(J[i]))
      throw Error(ErrorKind::Config, "interaction of A with D underflows at " + gD[i].str() + "; A is too small or too far");
    thrD = std::max(thrD, Lg[i] / J[i]);
  }
  r.threshold = std::max(thrA, thrD);
  r.a = cfg.margin * r.threshold;
  for (std::size_t i = 0; i < gD.size(); ++i)
    r.samples.push_back({gD[i], 0, r.u(gD[i]), r.a * J[i] - Lg[i], J[i], -Lg[i]});
  for (std::size_t i = 0; i < gA.size(); ++i)
    r.samples.push_back({gA[i], 1, r.u(gA[i]), r.a - Ig[i], 1.0, -Ig[i]});
  r.f_min = r.f_min_for(r.a);
  return r;
}

RadialPolyBump ce_test_bump(const CEResult& res, int component) {
  const SupportBall& b = component == 0 ? res.cfg.D : res.cfg.A;
  return RadialPolyBump::single(b.center, 0.8 * b.radius, 2.0 * res.ctx.order.m + 4);
}

double ce_pairing_residual(const CEResult& res, const RadialPolyBump& phi) {
  const SupportBall* comp = nullptr;
  for (const SupportBall* b : {&res.cfg.D, &res.cfg.A})
    if (dist(phi.center(), b->center) + phi.radius() <= b->radius * (1 + 1e-12)) comp = b;
  if (!comp) throw Error(ErrorKind::Domain, "test bump must be supported inside D or inside A");
  auto left = pair_with_bump(res.u_field(), phi, res.ctx);
  // f is symmetric about the centre line when g, D, A and phi all sit on it
  std::optional<Point> axis;
  Point d = res.cfg.A.center - res.cfg.D.center;
  if (on_axis(res.cfg.g.center(), res.cfg.D.center, d) && on_axis(phi.center(), res.cfg.D.center, d)) axis = d;
  double right = pair_rhs([&](const Point& y) { return res.f(y); }, phi, res.ctx.spec,
                          {{res.cfg.g.center(), res.cfg.g.radius()}}, axis);
  double scale = std::max({std::abs(left.value), std::abs(right), left.abs_value, 1e-8});
  return std::abs(left.value - right) / scale;
}

CEReport verify_ce(const CEResult& res) {
  CEReport r;
  r.f_min = res.f_min;
  r.f_positive = res.f_min > 0;
  r.u_pos_on_A = true;
  r.u_neg_where_g_pos = true;
  for (const auto& s : res.samples) {
    if (s.component == 1 && dist(s.x, res.cfg.A.center) < res.cfg.A.radius * (1 - 1e-12) && !(s.u > 0))
      r.u_pos_on_A = false;
    if (s.component == 0 && res.cfg.g.evaluate(s.x) > 0 && !(s.u < 0)) r.u_neg_where_g_pos = false;
  }
  r.pairing_D = ce_pairing_residual(res, ce_test_bump(res, 0));
  r.pairing_A = ce_pairing_residual(res, ce_test_bump(res, 1));
  r.pairing_ok = r.pairing_D < r.pairing_tol && r.pairing_A < r.pairing_tol;
  r.passed = r.f_positive && r.u_pos_on_A && r.u_neg_where_g_pos && r.pairing_ok;
  return r;
}

std::string CEReport::to_json() const {
  nlohmann::json j{{"f_min", f_min},
                   {"f_positive", f_positive},
                   {"u_pos_on_A", u_pos_on_A},
                   {"u_neg_where_g_pos", u_neg_where_g_pos},
                   {"pairing_residual_D", pairing_D},
                   {"pairing_residual_A", pairing_A},
                   {"pairing_tolerance", pairing_tol},
                   {"passed", passed}};
  return j.dump(2);
}

std::vector<SignSample> exterior_sign_check(const RadialPolyBump& g, const KernelContext& ctx,
                                            const std::vector<Point>& pts) {
  std::vector<SignSample> out(pts.size());
  const double want = ctx.order.m % 2 == 1 ? 1.0 : -1.0;
  for (const auto& x : pts)
    if (dist(x, g.center()) - g.radius() < 0.1 - 1e-12)
      throw Error(ErrorKind::Domain, "sign points must be at distance >= 0.1 from supp g");
  parallel_for(pts.size(), [&](std::size_t i) {
    double v = frac_s_smooth(g, pts[i], ctx);
    out[i] = {pts[i], v, want * v > 0};
  });
  return out;
}

std::pair<double, double> interaction_both_orders(const CEResult& res) {
  const int N = res.cfg.N;
  // both sides are tiny; keep the tolerance relative
  CEResult r = res;
  r.ctx.spec.abs_tol = 1e-300;
  BallOptions oa;
  oa.center = res.cfg.A.center;
  oa.radius = res.cfg.A.radius;
  if (N >= 2) oa.axis = res.cfg.g.center() - res.cfg.A.center;
  auto r1 = quad_ball_k<1>(
      [&](const Point& x) -> Val<1> { return {r.psi.evaluate(x) * r.g_potential(x)}; }, N, r.ctx.spec, oa);
  BallOptions od;
  od.center = res.cfg.g.center();
  od.radius = res.cfg.g.radius();
  if (N >= 2) od.axis = res.cfg.A.center - res.cfg.g.center();
  auto r2 = quad_ball_k<1>(
      [&](const Point& y) -> Val<1> { return {r.cfg.g.evaluate(y) * r.psi_potential(y)}; }, N, r.ctx.spec, od);
  return {r1.value[0], r2.value[0]};
}

}  // namespace fraclap
