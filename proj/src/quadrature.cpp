#include "fraclap/quadrature.hpp"

#include <cstdlib>
#include <map>
#include <mutex>
#include <string>
#include <tuple>

namespace fraclap {

namespace {
constexpr double kPi = std::numbers::pi;

void env_double(const char* name, double& out) {
  if (const char* v = std::getenv(name)) {
    try {
      out = std::stod(v);
    } catch (...) {
      throw Error(ErrorKind::Config, std::string("bad value for ") + name);
    }
  }
}
void env_int(const char* name, int& out) {
  if (const char* v = std::getenv(name)) {
    try {
      out = std::stoi(v);
    } catch (...) {
      throw Error(ErrorKind::Config, std::string("bad value for ") + name);
    }
  }
}
}  // namespace

void QuadSpec::validate() const {
  if (!(rel_tol > 0) || !(abs_tol > 0)) throw Error(ErrorKind::Config, "tolerances must be positive");
  if (!(far_radius > 1)) throw Error(ErrorKind::Config, "far_radius must exceed 1");
  if (max_subdiv < 1) throw Error(ErrorKind::Config, "max_subdiv must be >= 1");
  if (sphere_nodes < 4 || sphere_nodes % 2 || sphere_phi < 4 || sphere_phi % 2 || sphere_theta < 2)
    throw Error(ErrorKind::Config, "sphere node counts must be even and >= 4");
}

QuadSpec spec_with_env(QuadSpec base) {
  env_double("FRACLAP_REL_TOL", base.rel_tol);
  env_double("FRACLAP_ABS_TOL", base.abs_tol);
  env_int("FRACLAP_MAX_SUBDIV", base.max_subdiv);
  env_double("FRACLAP_FAR_RADIUS", base.far_radius);
  env_int("FRACLAP_SPHERE_NODES", base.sphere_nodes);
  base.validate();
  return base;
}

const std::vector<std::pair<double, double>>& gauss_legendre(int n) {
  static std::mutex mu;
  static std::map<int, std::vector<std::pair<double, double>>> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto it = cache.find(n);
  if (it != cache.end()) return it->second;
  std::vector<std::pair<double, double>> nodes(n);
  for (int i = 0; i < n; ++i) {
    double x = std::cos(kPi * (i + 0.75) / (n + 0.5));
    double dp = 0;
    for (int it2 = 0; it2 < 100; ++it2) {
      double p0 = 1, p1 = x;
      for (int k = 2; k <= n; ++k) {
        double p2 = ((2 * k - 1) * x * p1 - (k - 1) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      if (n == 1) p0 = 1;
      dp = n * (x * p1 - p0) / (x * x - 1);
      double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    double p0 = 1, p1 = x;
    for (int k = 2; k <= n; ++k) {
      double p2 = ((2 * k - 1) * x * p1 - (k - 1) * p0) / k;
      p0 = p1;
      p1 = p2;
    }
    dp = n * (x * p1 - p0) / (x * x - 1);
    nodes[i] = {x, 2 / ((1 - x * x) * dp * dp)};
  }
  return cache.emplace(n, std::move(nodes)).first->second;
}

const std::vector<SphereNode>& sphere_rule(int N, const QuadSpec& spec) {
  if (N < 1 || N > 3) throw Error(ErrorKind::Domain, "sphere rules exist for N = 1..3");
  static std::mutex mu;
  static std::map<std::tuple<int, int, int, int>, std::vector<SphereNode>> cache;
  auto key = std::make_tuple(N, N == 2 ? spec.sphere_nodes : 0, N == 3 ? spec.sphere_theta : 0,
                             N == 3 ? spec.sphere_phi : 0);
  {
    std::lock_guard<std::mutex> lock(mu);
    auto it = cache.find(key);
    if (it != cache.end()) return it->second;
  }
  std::vector<SphereNode> r;
  if (N == 1) {
    r.push_back({Point{1.0}, 1.0, 1.0});
    r.push_back({Point{-1.0}, 1.0, 1.0});
  } else if (N == 2) {
    int n = spec.sphere_nodes;
    double w = 2 * kPi / n;
    for (int k = 0; k < n; ++k) {
      double phi = 2 * kPi * (k + 0.5) / n;
      r.push_back({Point{std::cos(phi), std::sin(phi)}, w, k % 2 == 0 ? 2 * w : 0.0});
    }
  } else {
    const auto& gl = gauss_legendre(spec.sphere_theta);
    int n = spec.sphere_phi;
    double wphi = 2 * kPi / n;
    for (const auto& [mu_i, w_i] : gl) {
      double sn = std::sqrt(std::max(0.0, 1 - mu_i * mu_i));
      for (int k = 0; k < n; ++k) {
        double phi = 2 * kPi * (k + 0.5) / n;
        r.push_back({Point{sn * std::cos(phi), sn * std::sin(phi), mu_i}, w_i * wphi,
                     k % 2 == 0 ? 2 * w_i * wphi : 0.0});
      }
    }
  }
  std::lock_guard<std::mutex> lock(mu);
  return cache.emplace(key, std::move(r)).first->second;
}

QuadResult quad_interval(const std::function<double(double)>& f, double a, double b, const QuadSpec& spec) {
  if (!(a < b)) throw Error(ErrorKind::Domain, "quad_interval needs a < b");
  return quad_interval(f, std::vector<double>{a, b}, spec);
}

QuadResult quad_interval(const std::function<double(double)>& f, const std::vector<double>& pts,
                         const QuadSpec& spec) {
  auto r = quad_adaptive<1>([&](double t) { return Val<1>{f(t)}; }, pts, spec);
  return {r.value[0], r.err_estimate, r.converged, r.subdivisions_used};
}

QuadResult quad_sphere(const std::function<double(const Point&)>& f, int N, const QuadSpec& spec) {
  auto r = quad_sphere_k<1>([&](const Point& p) { return Val<1>{f(p)}; }, N, spec);
  return {r.value[0], r.err_estimate, r.converged, r.subdivisions_used};
}

Point orthogonal_unit(const Point& e) {
  int N = e.dim();
  if (N == 2) return Point{-e[1], e[0]};
  // Gram-Schmidt against the coordinate axis least aligned with e
  int j = 0;
  for (int i = 1; i < N; ++i)
    if (std::abs(e[i]) < std::abs(e[j])) j = i;
  Point a = Point::axis(N, j);
  Point p = a - dot(a, e) * e;
  return p * (1.0 / p.norm());
}

double ray_exit(const Point& o, const Point& d, const Point& c, double R) {
  Point oc = o - c;
  double b = dot(d, oc);
  double disc = b * b - (oc.norm2() - R * R);
  if (disc <= 0) return 0.0;
  double t = -b + std::sqrt(disc);
  return t > 0 ? t : 0.0;
}

QuadResult quad_ball(const std::function<double(const Point&)>& f, std::optional<Point> singular_at, int N,
                     const QuadSpec& spec) {
  BallOptions opt;
  opt.singular_at = singular_at;
  return quad_ball(f, N, spec, opt);
}

QuadResult quad_ball(const std::function<double(const Point&)>& f, int N, const QuadSpec& spec,
                     const BallOptions& opt) {
  auto r = quad_ball_k<1>([&](const Point& p) { return Val<1>{f(p)}; }, N, spec, opt);
  return {r.value[0], r.err_estimate, r.converged, r.subdivisions_used};
}

double sphere_area(int N) {
  switch (N) {
    case 1: return 2.0;
    case 2: return 2 * kPi;
    case 3: return 4 * kPi;
  }
  throw Error(ErrorKind::Domain, "sphere area only for N = 1..3");
}

double ball_volume(int N) { return sphere_area(N) / N; }

QuadResult quad_space(const std::function<double(const Point&)>& f, double decay_beta, int N, const QuadSpec& spec,
                      std::optional<double> K, const BallOptions& opt) {
  if (!(decay_beta > N)) throw Error(ErrorKind::Divergence, "decay exponent must exceed N");
  BallOptions o = opt;
  o.center = Point::zero(N);
  o.radius = spec.far_radius;
  QuadResult r = quad_ball(f, N, spec, o);
  double R = spec.far_radius;
  double k = 0;
  if (K) {
    k = *K;
  } else {
    for (const auto& nd : sphere_rule(N, spec)) k = std::max(k, std::abs(f(R * nd.dir)) * std::pow(R, decay_beta));
  }
  r.err_estimate += k * sphere_area(N) * std::pow(R, N - decay_beta) / (decay_beta - N);
  r.converged = r.converged && r.err_estimate <= std::max(spec.rel_tol * std::abs(r.value), spec.abs_tol);
  return r;
}

}  // namespace fraclap
