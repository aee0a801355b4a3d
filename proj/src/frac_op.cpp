#include "fraclap/frac_op.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "fraclap/error.hpp"
#include "fraclap/parallel.hpp"

namespace fraclap {

bool EvaluableField::in_support(const Point& x) const {
  if (support.empty()) return true;
  for (const auto& b : support)
    if (dist(x, b.center) < b.radius) return true;
  return false;
}

double EvaluableField::dist_to_support_boundary(const Point& x) const {
  double d = std::numeric_limits<double>::infinity();
  for (const auto& b : support) d = std::min(d, std::abs(dist(x, b.center) - b.radius));
  return d;
}

EvaluableField EvaluableField::from_bump(const RadialPolyBump& u) {
  EvaluableField f;
  f.fn = [u](const Point& x) { return u.evaluate(x); };
  f.dim = u.dim();
  f.support = {{u.center(), u.is_zero() ? 0.0 : u.radius()}};
  f.smoothness = u.smoothness();
  f.radial_center = u.center();
  return f;
}

EvaluableField EvaluableField::zero(int dim) {
  EvaluableField f;
  f.fn = [](const Point&) { return 0.0; };
  f.dim = dim;
  f.support = {{Point::zero(dim), 0.0}};
  f.smoothness = {1e300};
  return f;
}

namespace {

void check_field(const EvaluableField& u, const Point& x, const KernelContext& ctx) {
  if (!u.fn) throw Error(ErrorKind::Precondition, "field has no callable");
  if (u.dim != ctx.N || x.dim() != ctx.N) throw Error(ErrorKind::Domain, "dimension mismatch");
  if (!u.compact() && !(u.decay_beta && *u.decay_beta > ctx.N))
    throw Error(ErrorKind::Precondition, "unbounded support needs a decay exponent beta > N");
}

// roots r > 0 of |x + r*dir - c| = R
void sphere_crossings(const Point& x, const Point& dir, const SupportBall& b, std::vector<double>& out) {
  Point p = x - b.center;
  double bb = dot(dir, p);
  double disc = bb * bb - (p.norm2() - b.radius * b.radius);
  if (disc <= 0) return;
  double sq = std::sqrt(disc);
  for (double r : {-bb - sq, -bb + sq})
    if (r > 0) out.push_back(r);
}

// -c int u(y) |x-y|^{-N-2sigma} dy when x is off the support
FracResult exterior_formula(const EvaluableField& u, const Point& x, const KernelContext& ctx) {
  const int N = ctx.N;
  const double sigma = ctx.order.sigma, cN = *ctx.consts.c_frac;
  FracResult out;
  for (std::size_t i = 0; i < u.support.size(); ++i) {
    const auto& b = u.support[i];
    if (b.radius <= 0) continue;
    auto f = [&](const Point& y) -> Val<1> {
      for (std::size_t j = 0; j < i; ++j)
        if (dist(y, u.support[j].center) < u.support[j].radius) return {0.0};
      return {u(y) * std::pow(dist(x, y), -N - 2 * sigma)};
    };
    BallOptions o;
    o.center = b.center;
    o.radius = b.radius;
    if (u.radial_center && dist(*u.radial_center, b.center) < 1e-14 && u.support.size() == 1) {
      o.axis = x - b.center;
    }
    auto r = quad_ball_k<1>(f, N, ctx.spec, o);
    out.value -= cN * r.value[0];
    out.err += cN * r.err_estimate;
  }
  return out;
}

}  // namespace

FracResult frac_sigma_eval(const EvaluableField& u, const Point& x, const KernelContext& ctx, const FracOptions& opt) {
  check_field(u, x, ctx);
  const int N = ctx.N;
  const double sigma = ctx.order.sigma;
  if (ctx.order.integer()) throw Error(ErrorKind::Branch, "sigma = 1 is the classical Laplacian; use the exact or FD path");
  const double cN = *ctx.consts.c_frac;

  if (u.compact()) {
    bool all_empty = std::all_of(u.support.begin(), u.support.end(), [](const SupportBall& b) { return b.radius <= 0; });
    if (all_empty) return {};
    double gap = std::numeric_limits<double>::infinity(), rmin = gap;
    for (const auto& b : u.support) {
      if (b.radius <= 0) continue;
      gap = std::min(gap, dist(x, b.center) - b.radius);
      rmin = std::min(rmin, b.radius);
    }
    if (!opt.delta && gap > 0 && (gap >= 0.25 * rmin || gap >= 1.0)) return exterior_formula(u, x, ctx);
  }

  const double u0 = u(x);
  double delta;
  if (opt.delta) {
    delta = *opt.delta;
    if (!(delta > 0)) throw Error(ErrorKind::Domain, "near-field radius must be positive");
  } else {
    double dB = u.compact() ? u.dist_to_support_boundary(x) : std::numeric_limits<double>::infinity();
    delta = std::clamp(0.25 * dB, 1e-4, 0.5);
  }
  double rel_noise = u.noise > 0 ? u.noise / std::max(std::abs(u0), 1e-300) : 0.0;
  const double e0 = delta * std::clamp(std::pow(rel_noise, 1.0 / 6), 1e-3, 0.25);

  double rfar = 0, tail_err = 0;
  if (u.compact()) {
    for (const auto& b : u.support) rfar = std::max(rfar, dist(x, b.center) + b.radius);
    rfar = std::max(rfar * (1 + 1e-12), 2 * e0);
  } else {
    rfar = std::max(ctx.spec.far_radius, 2 * x.norm() + 1);
    double beta = *u.decay_beta;
    double K = 0;
    if (u.decay_K) {
      K = *u.decay_K;
    } else {
      for (const auto& nd : sphere_rule(N, ctx.spec)) K = std::max(K, std::abs(u(rfar * nd.dir)) * std::pow(rfar, beta));
    }
    // |x +- r theta| >= r/2 beyond rfar
    tail_err = 2 * K * std::pow(2.0, beta) * std::pow(rfar, -beta - 2 * sigma) / (beta + 2 * sigma);
  }
  rfar = std::max(rfar, delta * 1.5);

  QuadSpec rs = ctx.spec;
  rs.abs_tol = std::max(rs.abs_tol, u.noise * std::pow(e0, -2 * sigma));

  double near_err_sum = 0;
  long nrays = 0;
  auto ray = [&](const Point& th) -> Val<1> {
    auto w = [&](double r) { return 2 * u0 - u(x + r * th) - u(x - r * th); };
    double g1 = w(e0) / (e0 * e0), g2 = w(2 * e0) / (4 * e0 * e0);
    double G2 = (g2 - g1) / (3 * e0 * e0), G0 = g1 - G2 * e0 * e0;
    double t2 = G2 * std::pow(e0, 4 - 2 * sigma) / (4 - 2 * sigma);
    double near = G0 * std::pow(e0, 2 - 2 * sigma) / (2 - 2 * sigma) + t2;

    std::vector<double> pts{e0, rfar};
    if (delta > e0 && delta < rfar) pts.push_back(delta);
    if (u.compact()) {
      std::vector<double> ks;
      for (const auto& b : u.support) {
        if (b.radius <= 0) continue;
        sphere_crossings(x, th, b, ks);
        sphere_crossings(x, -1.0 * th, b, ks);
      }
      for (double r : ks)
        if (r > e0 && r < rfar) pts.push_back(r);
    }
    std::sort(pts.begin(), pts.end());
    auto f = [&](double r) -> Val<1> { return {w(r) * std::pow(r, -1 - 2 * sigma)}; };
    auto res = quad_adaptive<1>(f, pts, rs);
    double tail = 2 * u0 * std::pow(rfar, -2 * sigma) / (2 * sigma);
    near_err_sum += res.err_estimate + 0.1 * std::abs(t2);
    ++nrays;
    return {near + res.value[0] + tail};
  };

  QuadResultK<1> tot;
  if (N == 1) {
    tot.value = ray(Point{1.0});
    tot.value[0] *= 2;  // the second difference is even in theta
    near_err_sum *= 2;
  } else if (u.radial_center) {
    Point ax = x - *u.radial_center;
    if (ax.norm() < 1e-14) ax = Point::axis(N, 0);
    tot = quad_sphere_axial_k<1>(ray, ax, N, ctx.spec);
  } else {
    tot = quad_sphere_k<1>(ray, N, ctx.spec);
  }
  double ray_err = N == 1 ? near_err_sum : sphere_area(N) * near_err_sum / std::max<long>(nrays, 1);
  FracResult out;
  out.value = 0.5 * cN * tot.value[0];
  out.err = 0.5 * cN * (tot.err_estimate + ray_err + sphere_area(N) * tail_err);
  return out;
}

double frac_sigma_pointwise(const EvaluableField& u, const Point& x, const KernelContext& ctx,
                            const FracOptions& opt) {
  return frac_sigma_eval(u, x, ctx, opt).value;
}

FracResult frac_s_smooth_eval(const RadialPolyBump& u, const Point& x, const KernelContext& ctx,
                              const FracOptions& opt) {
  if (u.dim() != ctx.N || x.dim() != ctx.N) throw Error(ErrorKind::Domain, "dimension mismatch");
  if (u.is_zero()) return {};
  const int m = ctx.order.m;
  if (u.smoothness().global_order < 2 * m + 2)
    throw Error(ErrorKind::Smoothness, "bump is not C^{2m+2}; exchanging the integer and fractional parts is not licensed");
  if (ctx.order.integer()) return {iterate_laplacian(u, m + 1).evaluate(x), 0.0};
  RadialPolyBump v = iterate_laplacian(u, m);
  return frac_sigma_eval(EvaluableField::from_bump(v), x, ctx, opt);
}

double frac_s_smooth(const RadialPolyBump& u, const Point& x, const KernelContext& ctx, const FracOptions& opt) {
  return frac_s_smooth_eval(u, x, ctx, opt).value;
}

Point GridField::node(int i, int j, int k) const {
  Point p = origin;
  int idx[3] = {i, j, k};
  for (int d = 0; d < dim; ++d) p[d] += h * idx[d];
  return p;
}

void GridField::validate() const {
  if (dim < 1 || dim > 3 || origin.dim() != dim) throw Error(ErrorKind::Domain, "grid dimension");
  if (!(h > 0)) throw Error(ErrorKind::Domain, "grid spacing must be positive");
  for (int d = 0; d < 3; ++d)
    if (ext[d] < 1 || (d >= dim && ext[d] != 1)) throw Error(ErrorKind::Extent, "bad grid extents");
  if (values.size() != size()) throw Error(ErrorKind::Extent, "grid value count mismatch");
  for (double v : values)
    if (!std::isfinite(v)) throw Error(ErrorKind::Domain, "non-finite grid value");
}

GridField GridField::sample(const std::function<double(const Point&)>& f, int dim, const Point& origin, double h,
                            std::array<int, 3> ext, bool parallel) {
  GridField g;
  g.dim = dim;
  g.origin = origin;
  g.h = h;
  g.ext = ext;
  for (int d = dim; d < 3; ++d) g.ext[d] = 1;
  g.values.assign(g.size(), 0.0);
  auto one = [&](std::size_t n) {
    int k = static_cast<int>(n % g.ext[2]);
    int j = static_cast<int>((n / g.ext[2]) % g.ext[1]);
    int i = static_cast<int>(n / (static_cast<std::size_t>(g.ext[2]) * g.ext[1]));
    g.values[n] = f(g.node(i, j, k));
  };
  if (parallel) {
    parallel_for(g.size(), one);
  } else {
    for (std::size_t n = 0; n < g.size(); ++n) one(n);
  }
  g.validate();
  return g;
}

GridField fd_laplacian(const GridField& g, int m) {
  if (m < 1) throw Error(ErrorKind::Domain, "fd_laplacian needs m >= 1");
  g.validate();
  GridField cur = g;
  for (int pass = 0; pass < m; ++pass) {
    GridField nx;
    nx.dim = cur.dim;
    nx.h = cur.h;
    nx.origin = cur.origin;
    for (int d = 0; d < 3; ++d) {
      nx.ext[d] = d < cur.dim ? cur.ext[d] - 2 : 1;
      if (nx.ext[d] < 1) throw Error(ErrorKind::Extent, "grid too small for the requested Laplacian count");
      if (d < cur.dim) nx.origin[d] += cur.h;
    }
    nx.values.assign(nx.size(), 0.0);
    const double ih2 = 1.0 / (cur.h * cur.h);
    for (int i = 0; i < nx.ext[0]; ++i)
      for (int j = 0; j < nx.ext[1]; ++j)
        for (int k = 0; k < nx.ext[2]; ++k) {
          int I = i + 1, J = cur.dim > 1 ? j + 1 : j, K = cur.dim > 2 ? k + 1 : k;
          double c = cur.at(I, J, K), acc = 0;
          acc += cur.at(I + 1, J, K) + cur.at(I - 1, J, K) - 2 * c;
          if (cur.dim > 1) acc += cur.at(I, J + 1, K) + cur.at(I, J - 1, K) - 2 * c;
          if (cur.dim > 2) acc += cur.at(I, J, K + 1) + cur.at(I, J, K - 1) - 2 * c;
          nx.values[nx.index(i, j, k)] = -acc * ih2;
        }
    cur = std::move(nx);
  }
  return cur;
}

double frac_s_sigma_first(const EvaluableField& u, const Point& x, const KernelContext& ctx, double h,
                          const FracOptions& opt) {
  check_field(u, x, ctx);
  if (!(h > 0)) throw Error(ErrorKind::Domain, "FD step must be positive");
  const int N = ctx.N;
  const bool integer = ctx.order.integer();
  const int passes = integer ? ctx.order.m + 1 : ctx.order.m;
  std::function<double(const Point&)> inner;
  if (integer) {
    inner = [&](const Point& p) { return u(p); };
  } else {
    inner = [&](const Point& p) { return frac_sigma_eval(u, p, ctx, opt).value; };
  }
  if (passes == 0) return inner(x);
  Point o = x;
  for (int d = 0; d < N; ++d) o[d] -= passes * h;
  std::array<int, 3> ext{1, 1, 1};
  for (int d = 0; d < N; ++d) ext[d] = 2 * passes + 1;
  auto g = GridField::sample(inner, N, o, h, ext);
  return fd_laplacian(g, passes).values.at(0);
}

std::vector<double> decay_envelope_ratios(const RadialPolyBump& u, const KernelContext& ctx,
                                          const std::vector<Point>& sample) {
  std::vector<double> out(sample.size(), 0.0);
  if (u.is_zero()) return out;
  const double p = ctx.N + 2 * ctx.s();
  parallel_for(sample.size(), [&](std::size_t i) {
    out[i] = std::abs(frac_s_smooth(u, sample[i], ctx)) * (1 + std::pow(sample[i].norm(), p));
  });
  return out;
}

double decay_envelope_check(const RadialPolyBump& u, const KernelContext& ctx, const std::vector<Point>& sample) {
  auto r = decay_envelope_ratios(u, ctx, sample);
  double mx = 0;
  for (double v : r) mx = std::max(mx, v);
  return mx;
}

namespace {

void push_crossings(const Point& o, const Point& d, double rmax, const std::vector<SupportBall>& balls,
                    std::vector<double>& out) {
  for (const auto& b : balls) {
    std::vector<double> ks;
    sphere_crossings(o, d, b, ks);
    for (double r : ks)
      if (r < rmax) out.push_back(r);
  }
}

}  // namespace

namespace {

bool on_line(const Point& q, const Point& p, const Point& d) {
  Point v = q - p;
  double dd = d.norm2();
  if (dd == 0) return v.norm() < 1e-12;
  Point perp = v - (dot(v, d) / dd) * d;
  return perp.norm() < 1e-12 * (1 + v.norm());
}

// a line about which u * (-Delta)^s phi is symmetric, if one is known
std::optional<std::pair<Point, Point>> pairing_axis(const EvaluableField& u, const RadialPolyBump& phi) {
  const int N = phi.dim();
  if (N < 2) return std::nullopt;
  if (u.radial_center) {
    Point d = phi.center() - *u.radial_center;
    if (d.norm() < 1e-14) d = Point::axis(N, 0);
    return std::make_pair(phi.center(), d);
  }
  if (u.axis_line && on_line(phi.center(), u.axis_line->first, u.axis_line->second)) return u.axis_line;
  return std::nullopt;
}

}  // namespace

PairingResult pair_with_bump(const EvaluableField& u, const RadialPolyBump& phi, const KernelContext& ctx) {
  const int N = ctx.N;
  if (!u.fn || u.dim != N || phi.dim() != N) throw Error(ErrorKind::Domain, "dimension mismatch");
  PairingResult out;
  if (phi.is_zero()) return out;
  std::vector<SupportBall> kinks{{phi.center(), phi.radius()}};
  for (const auto& b : u.support)
    if (b.radius > 0) kinks.push_back(b);
  auto L = [&](const Point& y) { return frac_s_smooth(phi, y, ctx); };
  auto line = pairing_axis(u, phi);
  auto breaks = [&](const Point& org, const Point& d, double rmax, std::vector<double>& pts) {
    push_crossings(org, d, rmax, kinks, pts);
  };
  if (u.compact()) {
    for (std::size_t i = 0; i < u.support.size(); ++i) {
      const auto& b = u.support[i];
      if (b.radius <= 0) continue;
      auto f = [&](const Point& y) -> Val<2> {
        for (std::size_t j = 0; j < i; ++j)
          if (dist(y, u.support[j].center) < u.support[j].radius) return {0.0, 0.0};
        double uv = u(y);
        if (uv == 0) return {0.0, 0.0};
        double v = uv * L(y);
        return {v, std::abs(v)};
      };
      BallOptions o;
      o.center = b.center;
      o.radius = b.radius;
      o.ray_breaks = breaks;
      if (line && on_line(b.center, line->first, line->second)) o.axis = line->second;
      auto r = quad_ball_k<2>(f, N, ctx.spec, o);
      out.value += r.value[0];
      out.abs_value += r.value[1];
      out.err += r.err_estimate;
    }
    return out;
  }
  if (!u.decay_beta) throw Error(ErrorKind::Precondition, "unbounded support needs a decay exponent");
  const double beta = *u.decay_beta + N + 2 * ctx.s();
  auto f = [&](const Point& y) { return u(y) * L(y); };
  BallOptions o;
  o.singular_at = phi.center();
  o.ray_breaks = breaks;
  if (line) o.axis = line->second;
  auto r = quad_space(f, beta, N, ctx.spec, std::nullopt, o);
  out.value = r.value;
  out.err = r.err_estimate;
  QuadSpec loose = ctx.spec;
  loose.rel_tol = std::max(loose.rel_tol, 1e-6);
  out.abs_value = quad_space([&](const Point& y) { return std::abs(f(y)); }, beta, N, loose, std::nullopt, o).value;
  return out;
}

double pair_rhs(const std::function<double(const Point&)>& f, const RadialPolyBump& phi, const QuadSpec& spec,
                const std::vector<SupportBall>& f_support, std::optional<Point> axis) {
  const int N = phi.dim();
  if (phi.is_zero()) return 0.0;
  BallOptions o;
  o.center = phi.center();
  o.radius = phi.radius();
  if (N >= 2 && axis) o.axis = *axis;
  if (!f_support.empty()) {
    o.ray_breaks = [&](const Point& org, const Point& d, double rmax, std::vector<double>& pts) {
      push_crossings(org, d, rmax, f_support, pts);
    };
  }
  return quad_ball_k<1>([&](const Point& y) -> Val<1> { return {f(y) * phi.evaluate(y)}; }, N, spec, o).value[0];
}

}  // namespace fraclap
