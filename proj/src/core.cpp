#include "fraclap/core.hpp"

#include <cmath>
#include <numbers>

#include "fraclap/error.hpp"
#include "fraclap/gamma.hpp"

namespace fraclap {

namespace {
constexpr double kPi = std::numbers::pi;

bool near_int(double v) { return std::abs(v - std::round(v)) < 1e-12; }
}  // namespace

FracOrder frac_split(double s) {
  if (!std::isfinite(s) || s <= 0) throw Error(ErrorKind::InvalidOrder, "order must be positive and finite");
  FracOrder o;
  o.s = s;
  if (near_int(s)) {
    o.s = std::round(s);
    o.m = static_cast<int>(o.s) - 1;
    o.sigma = 1.0;
  } else {
    o.m = static_cast<int>(std::floor(s));
    o.sigma = s - o.m;
  }
  return o;
}

double c_frac(int N, double sigma) {
  if (!(sigma > 0 && sigma < 1)) throw Error(ErrorKind::InvalidOrder, "c_frac needs sigma in (0,1)");
  return std::pow(4.0, sigma) * std::pow(kPi, -0.5 * N) * sigma * (1 - sigma) *
         gamma_fn(0.5 * N + sigma) / gamma_fn(2 - sigma);
}

double k_green(int N, double s) {
  double gs = gamma_fn(s);
  return gamma_fn(0.5 * N) / (std::pow(kPi, 0.5 * N) * std::pow(4.0, s) * gs * gs);
}

double gamma_ball(int N, double s) {
  return gamma_fn(0.5 * N) * std::pow(4.0, -s) / (gamma_fn(s + 1) * gamma_fn(0.5 * N + s));
}

bool log_branch(int N, double s) {
  double d = s - 0.5 * N;
  return d > -1e-12 && near_int(d);
}

double kappa_fund(int N, double s) {
  if (log_branch(N, s)) {
    int k = static_cast<int>(std::round(s - 0.5 * N));
    double sign = ((k + 1) % 2 == 0) ? 1.0 : -1.0;
    return std::pow(2.0, 1 - 2 * s) * std::pow(kPi, -0.5 * N) * sign /
           (gamma_fn(k + 1.0) * gamma_fn(s));
  }
  return gamma_fn(0.5 * N - s) / (std::pow(4.0, s) * std::pow(kPi, 0.5 * N) * gamma_fn(s));
}

// c_{N,sigma} times the product coming from m integer Laplacians of the Riesz
// kernel |x-y|^{-N-2 sigma}. The pairing of disjointly supported functions
// picks up both orderings of (x,y), so the prefactor is c, not c/2.
double C_interaction(int N, const FracOrder& o) {
  double c = c_frac(N, o.sigma);
  for (int i = 0; i < o.m; ++i) c *= (N + 2 * o.sigma + 2 * i) * (2 * o.sigma + 2 * i + 2);
  return c;
}

ConstantSet constants(int N, const FracOrder& order) {
  if (N < 1) throw Error(ErrorKind::Domain, "dimension must be >= 1");
  ConstantSet cs;
  double s = order.s;
  if (!order.integer()) {
    cs.c_frac = c_frac(N, order.sigma);
    cs.C_interaction = C_interaction(N, order);
  }
  cs.k_green = k_green(N, s);
  cs.gamma_ball = gamma_ball(N, s);
  cs.kappa_log_branch = log_branch(N, s);
  cs.kappa_fund = kappa_fund(N, s);
  cs.C2_fund = (2.0 * (N - 2 * s) + (2.0 - N)) * cs.kappa_fund;
  return cs;
}

double bracket(const Point& x, const Point& y) {
  double v = x.norm2() * y.norm2() - 2 * dot(x, y) + 1;
  return std::sqrt(v > 0 ? v : 0.0);
}

double rho(const Point& x, const Point& y) {
  double d2 = dist2(x, y);
  if (d2 == 0) throw Error(ErrorKind::CoincidentPoints, "rho at x = y");
  double a = 1 - x.norm2(), b = 1 - y.norm2();
  if (a <= 0 || b <= 0) return 0.0;
  return a * b / d2;
}

double pos_pow(double t, double a) {
  if (t < 0) return 0.0;
  if (t == 0) {
    if (a < 0) throw Error(ErrorKind::SingularEvaluation, "negative power of zero");
    return 0.0;
  }
  if (a == 0) return 1.0;
  return std::pow(t, a);
}

}  // namespace fraclap
