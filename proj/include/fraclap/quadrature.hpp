#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <functional>
#include <limits>
#include <numbers>
#include <optional>
#include <queue>
#include <vector>

#include "fraclap/error.hpp"
#include "fraclap/point.hpp"

namespace fraclap {

struct QuadSpec {
  double rel_tol = 1e-9;
  double abs_tol = 1e-12;
  int max_subdiv = 2000;
  double far_radius = 50.0;
  int sphere_nodes = 512;  // N=2 trapezoid
  int sphere_theta = 64;   // N=3 Gauss nodes in cos(theta)
  int sphere_phi = 128;    // N=3 trapezoid nodes in phi
  void validate() const;
};

// FRACLAP_REL_TOL, FRACLAP_ABS_TOL, FRACLAP_MAX_SUBDIV, FRACLAP_FAR_RADIUS,
// FRACLAP_SPHERE_NODES override the matching fields.
QuadSpec spec_with_env(QuadSpec base = {});

template <int K>
using Val = std::array<double, K>;

template <int K>
struct QuadResultK {
  Val<K> value{};
  double err_estimate = 0;
  bool converged = true;
  int subdivisions_used = 0;
};

struct QuadResult {
  double value = 0;
  double err_estimate = 0;
  bool converged = true;
  int subdivisions_used = 0;
};

// Gauss-Legendre nodes/weights on [-1,1], cached.
const std::vector<std::pair<double, double>>& gauss_legendre(int n);

namespace detail {

inline constexpr double kXgk[8] = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
inline constexpr double kWgk[8] = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
inline constexpr double kWg[4] = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

template <int K>
double vnorm(const Val<K>& v) {
  double m = 0;
  for (double x : v) m = std::max(m, std::abs(x));
  return m;
}

template <int K>
struct Seg {
  double a, b;
  Val<K> val;
  double err;
  bool operator<(const Seg& o) const { return err < o.err; }
};

template <int K, class F>
Seg<K> gk15(F& f, double a, double b) {
  const double c = 0.5 * (a + b), hl = 0.5 * (b - a);
  Val<K> fv[15];
  fv[7] = f(c);
  for (int j = 0; j < 7; ++j) {
    fv[j] = f(c - hl * kXgk[j]);
    fv[14 - j] = f(c + hl * kXgk[j]);
  }
  Seg<K> s{a, b, {}, 0};
  const double eps = std::numeric_limits<double>::epsilon();
  for (int k = 0; k < K; ++k) {
    double resk = kWgk[7] * fv[7][k];
    double resg = kWg[3] * fv[7][k];
    double resabs = std::abs(resk);
    for (int j = 0; j < 7; ++j) {
      double p = fv[j][k] + fv[14 - j][k];
      resk += kWgk[j] * p;
      resabs += kWgk[j] * (std::abs(fv[j][k]) + std::abs(fv[14 - j][k]));
      if (j % 2 == 1) resg += kWg[j / 2] * p;
    }
    double mean = 0.5 * resk;
    double resasc = kWgk[7] * std::abs(fv[7][k] - mean);
    for (int j = 0; j < 7; ++j)
      resasc += kWgk[j] * (std::abs(fv[j][k] - mean) + std::abs(fv[14 - j][k] - mean));
    double err = std::abs((resk - resg) * hl);
    resasc *= std::abs(hl);
    resabs *= std::abs(hl);
    if (resasc != 0 && err != 0) err = resasc * std::min(1.0, std::pow(200 * err / resasc, 1.5));
    if (resabs > std::numeric_limits<double>::min() / (50 * eps)) err = std::max(50 * eps * resabs, err);
    s.val[k] = resk * hl;
    s.err = std::max(s.err, err);
  }
  return s;
}

}  // namespace detail

// Global adaptive Gauss-Kronrod 7/15 over consecutive breakpoints.
template <int K, class F>
QuadResultK<K> quad_adaptive(F&& f, const std::vector<double>& pts, const QuadSpec& spec) {
  QuadResultK<K> r;
  if (pts.size() < 2) return r;
  std::priority_queue<detail::Seg<K>> q;
  Val<K> total{};
  double err = 0;
  auto add = [&](const detail::Seg<K>& s) {
    for (int k = 0; k < K; ++k) total[k] += s.val[k];
    err += s.err;
    q.push(s);
  };
  for (size_t i = 0; i + 1 < pts.size(); ++i) {
    if (!(pts[i] < pts[i + 1])) continue;
    add(detail::gk15<K>(f, pts[i], pts[i + 1]));
  }
  int used = 0;
  std::vector<detail::Seg<K>> frozen;
  while (!q.empty()) {
    double tol = std::max(spec.rel_tol * detail::vnorm<K>(total), spec.abs_tol);
    if (err <= tol) break;
    if (used >= spec.max_subdiv) {
      r.converged = false;
      break;
    }
    auto s = q.top();
    q.pop();
    double mid = 0.5 * (s.a + s.b);
    if (!(s.a < mid && mid < s.b) || (s.b - s.a) < 1e-15 * (std::abs(s.a) + std::abs(s.b))) {
      // cannot refine further; keep the estimate but stop chasing it
      frozen.push_back(s);
      if (q.empty()) {
        r.converged = false;
        break;
      }
      continue;
    }
    for (int k = 0; k < K; ++k) total[k] -= s.val[k];
    err -= s.err;
    add(detail::gk15<K>(f, s.a, mid));
    add(detail::gk15<K>(f, mid, s.b));
    ++used;
  }
  // resum to limit drift from the running updates
  Val<K> sum{};
  double esum = 0;
  auto acc = [&](const detail::Seg<K>& s) {
    for (int k = 0; k < K; ++k) sum[k] += s.val[k];
    esum += s.err;
  };
  while (!q.empty()) {
    acc(q.top());
    q.pop();
  }
  for (const auto& s : frozen) acc(s);
  for (int k = 0; k < K; ++k)
    if (!std::isfinite(sum[k])) throw Error(ErrorKind::Divergence, "non-finite integrand value");
  r.value = sum;
  r.err_estimate = esum;
  r.subdivisions_used = used;
  if (r.converged) r.converged = esum <= std::max(spec.rel_tol * detail::vnorm<K>(sum), spec.abs_tol);
  return r;
}

QuadResult quad_interval(const std::function<double(double)>& f, double a, double b, const QuadSpec& spec);
// breakpoints must be increasing; the first and last are the limits
QuadResult quad_interval(const std::function<double(double)>& f, const std::vector<double>& pts,
                         const QuadSpec& spec);

// A direction on the unit sphere with its weight in the fine rule and in the
// embedded coarse rule used for the error estimate.
struct SphereNode {
  Point dir;
  double w;
  double w_coarse;
};
const std::vector<SphereNode>& sphere_rule(int N, const QuadSpec& spec);

template <int K, class F>
QuadResultK<K> quad_sphere_k(F&& f, int N, const QuadSpec& spec) {
  QuadResultK<K> r;
  Val<K> coarse{};
  for (const auto& nd : sphere_rule(N, spec)) {
    Val<K> v = f(nd.dir);
    for (int k = 0; k < K; ++k) {
      r.value[k] += nd.w * v[k];
      coarse[k] += nd.w_coarse * v[k];
    }
  }
  if (N > 1) {
    for (int k = 0; k < K; ++k) r.err_estimate = std::max(r.err_estimate, std::abs(r.value[k] - coarse[k]));
  }
  r.converged = r.err_estimate <= std::max(spec.rel_tol * detail::vnorm<K>(r.value), spec.abs_tol);
  return r;
}

QuadResult quad_sphere(const std::function<double(const Point&)>& f, int N, const QuadSpec& spec);

// Unit vector orthogonal to e (same dimension, N >= 2).
Point orthogonal_unit(const Point& e);

// Sphere integral of a function that depends on theta only through theta.e;
// adaptive in the polar angle. For N = 1 this is the two-point sum.
template <int K, class F>
QuadResultK<K> quad_sphere_axial_k(F&& f, const Point& axis, int N, const QuadSpec& spec) {
  Point e = axis * (1.0 / axis.norm());
  if (N == 1) {
    QuadResultK<K> r;
    Val<K> a = f(Point{1.0}), b = f(Point{-1.0});
    for (int k = 0; k < K; ++k) r.value[k] = a[k] + b[k];
    return r;
  }
  Point p = orthogonal_unit(e);
  if (N == 2) {
    auto g = [&](double phi) {
      Val<K> v = f(std::cos(phi) * e + std::sin(phi) * p);
      for (auto& x : v) x *= 2.0;
      return v;
    };
    return quad_adaptive<K>(g, {0.0, 0.5 * std::numbers::pi, std::numbers::pi}, spec);
  }
  auto g = [&](double mu) {
    double sn = std::sqrt(std::max(0.0, 1 - mu * mu));
    Val<K> v = f(mu * e + sn * p);
    for (auto& x : v) x *= 2 * std::numbers::pi;
    return v;
  };
  return quad_adaptive<K>(g, {-1.0, 0.0, 1.0}, spec);
}

using RayBreaks = std::function<void(const Point& origin, const Point& dir, double rmax, std::vector<double>& out)>;

struct BallOptions {
  std::optional<Point> center;        // default: origin
  double radius = 1.0;
  std::optional<Point> singular_at;   // polar origin when inside the ball
  std::optional<Point> axis;          // integrand axisymmetric about the line origin + t*axis
  RayBreaks ray_breaks;               // extra radial breakpoints
};

// distance from o (inside the ball) to the sphere |y - c| = R along unit dir d
double ray_exit(const Point& o, const Point& d, const Point& c, double R);

double sphere_area(int N);

template <int K, class F>
QuadResultK<K> quad_ball_k(F&& f, int N, const QuadSpec& spec, const BallOptions& opt = {}) {
  Point c = opt.center ? *opt.center : Point::zero(N);
  double R = opt.radius;
  Point o = c;
  if (opt.singular_at && dist(*opt.singular_at, c) < R) o = *opt.singular_at;
  double radial_err = 0;
  bool radial_ok = true;
  int subdiv = 0;
  long nray = 0;
  auto ray = [&](const Point& d) -> Val<K> {
    ++nray;
    double rmax = ray_exit(o, d, c, R);
    std::vector<double> pts{0.0, rmax};
    if (opt.ray_breaks) {
      opt.ray_breaks(o, d, rmax, pts);
      std::sort(pts.begin(), pts.end());
      std::vector<double> clean;
      for (double t : pts)
        if (t >= 0 && t <= rmax && (clean.empty() || t > clean.back() + 1e-14 * rmax)) clean.push_back(t);
      if (clean.back() < rmax) clean.push_back(rmax);
      pts.swap(clean);
    }
    auto g = [&](double r) {
      Val<K> v = f(o + r * d);
      double jac = N == 1 ? 1.0 : (N == 2 ? r : r * r);
      for (auto& x : v) x *= jac;
      return v;
    };
    auto res = quad_adaptive<K>(g, pts, spec);
    radial_err += res.err_estimate;
    radial_ok = radial_ok && res.converged;
    subdiv += res.subdivisions_used;
    return res.value;
  };
  QuadResultK<K> out;
  if (opt.axis && N >= 2) {
    Point ax = *opt.axis;
    if (ax.norm2() == 0) ax = Point::axis(N, 0);
    out = quad_sphere_axial_k<K>(ray, ax, N, spec);
  } else {
    out = quad_sphere_k<K>(ray, N, spec);
  }
  // mean radial error times the sphere measure
  if (nray > 0) out.err_estimate += sphere_area(N) * radial_err / static_cast<double>(nray);
  out.converged = out.converged && radial_ok;
  out.subdivisions_used += subdiv;
  return out;
}

QuadResult quad_ball(const std::function<double(const Point&)>& f, std::optional<Point> singular_at, int N,
                     const QuadSpec& spec);
QuadResult quad_ball(const std::function<double(const Point&)>& f, int N, const QuadSpec& spec,
                     const BallOptions& opt);

// Integral over R^N: ball of radius far_radius plus a tail bound added to
// err_estimate. K bounds |f(y)| |y|^beta beyond far_radius; when absent it is
// sampled on the far sphere.
QuadResult quad_space(const std::function<double(const Point&)>& f, double decay_beta, int N, const QuadSpec& spec,
                      std::optional<double> K = std::nullopt, const BallOptions& opt = {});

double sphere_area(int N);
double ball_volume(int N);

}  // namespace fraclap
