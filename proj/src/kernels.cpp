#include "fraclap/kernels.hpp"

#include <cmath>

#include "fraclap/error.hpp"

namespace fraclap {

BoggioInner::BoggioInner(int N, double s) : a_(s), b_(0.5 * N - s) { half_ = lower_series(0.5); }

// x^a sum_k binom(k-b, k) x^k / (a+k): expansion of (1-t)^{b-1} about t = 0
double BoggioInner::lower_series(double x) const {
  double sum = 0, d = 1, p = 1;
  for (int k = 0; k < 2000; ++k) {
    double term = d * p / (a_ + k);
    sum += term;
    if (d == 0 || (k > 3 && std::abs(term) <= 1e-17 * std::abs(sum))) break;
    d *= (k + 1 - b_) / (k + 1);
    p *= x;
  }
  return std::pow(x, a_) * sum;
}

// int_{tau0}^{1/2} (1-tau)^{a-1} tau^{b-1} dtau, expanding (1-tau)^{a-1}
double BoggioInner::upper_series(double tau0) const {
  const double hi = 0.5;
  const double L = std::log(hi / tau0);
  double sum = 0, e = 1;
  double hq = std::pow(hi, b_), lq = std::pow(tau0, b_);
  const int kmin = b_ < 0 ? static_cast<int>(std::ceil(-b_)) + 1 : 1;
  for (int k = 0; k < 2000; ++k) {
    double q = b_ + k;
    double integral;
    if (std::abs(q) < 0.5) {
      integral = q == 0 ? L : lq * std::expm1(q * L) / q;
    } else {
      integral = (hq - lq) / q;
    }
    double term = e * integral;
    sum += term;
    if (e == 0 || (k >= kmin && std::abs(term) <= 1e-17 * std::abs(sum))) break;
    e *= (k + 1 - a_) / (k + 1);
    hq *= hi;
    lq *= tau0;
  }
  return sum;
}

double BoggioInner::operator()(double rho) const {
  if (!(rho >= 0)) throw Error(ErrorKind::Domain, "boggio_inner needs rho >= 0");
  if (rho == 0) return 0.0;
  if (!std::isfinite(rho)) throw Error(ErrorKind::SingularEvaluation, "boggio_inner at infinite rho");
  double x = rho / (1 + rho);
  if (x <= 0.5) return lower_series(x);
  return half_ + upper_series(1 / (1 + rho));
}

KernelContext::KernelContext(int N_, double s, QuadSpec spec_)
    : N(N_), order(frac_split(s)), spec(spec_) {
  if (N < 1) throw Error(ErrorKind::Domain, "dimension must be >= 1");
  spec.validate();
  consts = constants(N, order);
  boggio = BoggioInner(N, order.s);
}

KernelContext KernelContext::with_order(double s2) const {
  KernelContext c(N, s2, spec);
  c.inner = inner;
  return c;
}

double boggio_inner(double rho_val, const KernelContext& ctx) {
  if (ctx.inner == InnerMethod::RawQuadrature) return boggio_inner_raw(rho_val, ctx);
  return ctx.boggio(rho_val);
}

double boggio_inner_raw(double rho_val, const KernelContext& ctx) {
  if (!(rho_val >= 0)) throw Error(ErrorKind::Domain, "boggio_inner needs rho >= 0");
  if (rho_val == 0) return 0.0;
  const double s = ctx.s(), h = 0.5 * ctx.N;
  std::vector<double> pts{0.0};
  for (double t = 1; t < rho_val; t *= 10) pts.push_back(t);
  pts.push_back(rho_val);
  QuadSpec sp = ctx.spec;
  sp.rel_tol = std::min(sp.rel_tol, 1e-12);
  sp.abs_tol = 1e-300;
  auto r = quad_interval([&](double v) { return std::pow(v, s - 1) * std::pow(1 + v, -h); }, pts, sp);
  return r.value;
}

double green(const Point& x, const Point& y, const KernelContext& ctx) {
  double d2 = dist2(x, y);
  if (d2 == 0) throw Error(ErrorKind::CoincidentPoints, "green at x = y");
  if (x.norm2() >= 1 || y.norm2() >= 1) return 0.0;
  double I = boggio_inner(rho(x, y), ctx);
  return ctx.consts.k_green * std::pow(d2, ctx.s() - 0.5 * ctx.N) * I;
}

double green_integer_form(const Point& x, const Point& y, const KernelContext& ctx) {
  if (!ctx.order.integer()) throw Error(ErrorKind::Branch, "integer form needs integer s");
  double d = dist(x, y);
  if (d == 0) throw Error(ErrorKind::CoincidentPoints, "green at x = y");
  if (x.norm2() >= 1 || y.norm2() >= 1) return 0.0;
  const int N = ctx.N;
  const double s = ctx.s();
  double wmax = bracket(x, y) / d - 1;
  if (wmax <= 0) return 0.0;
  // v = 1 + w keeps (v^2 - 1) free of cancellation
  auto f = [&](double w) { return std::pow(w * (2 + w), s - 1) * std::pow(1 + w, 1 - N); };
  std::vector<double> pts{0.0};
  for (double t = 1; t < wmax; t *= 10) pts.push_back(t);
  pts.push_back(wmax);
  QuadSpec sp = ctx.spec;
  sp.rel_tol = std::min(sp.rel_tol, 1e-12);
  sp.abs_tol = 1e-300;
  double I = quad_interval(f, pts, sp).value;
  return 2 * ctx.consts.k_green * std::pow(d, 2 * s - N) * I;
}

double poly_P(const Point& x, const Point& y, const KernelContext& ctx) {
  const double s = ctx.s();
  if (!(s > 1)) throw Error(ErrorKind::InvalidOrder, "poly_P needs s > 1");
  double x2 = x.norm2(), y2 = y.norm2();
  if (x2 > 1 || y2 >= 1) return 0.0;
  double px = pos_pow(1 - x2, s - 2);
  double py = pos_pow(1 - y2, s - 1);
  return px * py * (1 - x2 * y2) / std::pow(bracket(x, y), ctx.N);
}

double martin(const Point& x, const Point& theta, const KernelContext& ctx) {
  if (std::abs(theta.norm() - 1) > 1e-12) throw Error(ErrorKind::Domain, "theta must lie on the unit sphere");
  double d = dist(x, theta);
  if (d == 0) throw Error(ErrorKind::SingularEvaluation, "martin at x = theta");
  double a = 1 - x.norm2();
  if (a <= 0) return 0.0;
  return ctx.consts.k_green / ctx.s() * std::pow(a, ctx.s()) / std::pow(d, ctx.N);
}

double poisson(const Point& x, const Point& theta, int N) {
  double a = 1 - x.norm2();
  if (a <= 0) throw Error(ErrorKind::Domain, "poisson needs |x| < 1");
  return 2 * k_green(N, 1.0) * a / std::pow(dist(x, theta), N);
}

double fundamental(const Point& x, const KernelContext& ctx) {
  double r = x.norm();
  if (r == 0) throw Error(ErrorKind::SingularEvaluation, "fundamental solution at 0");
  double v = ctx.consts.kappa_fund * std::pow(r, 2 * ctx.s() - ctx.N);
  if (ctx.consts.kappa_log_branch) v *= std::log(r);
  return v;
}

double fundamental_remainder(const Point& x, const KernelContext& ctx) {
  double r = x.norm();
  if (r == 0) throw Error(ErrorKind::SingularEvaluation, "remainder at 0");
  // nonzero only when s - N/2 is a positive integer; s = N/2 feeds F_{N,s-1}
  if (!ctx.consts.kappa_log_branch || ctx.s() - 0.5 * ctx.N < 0.5) return 0.0;
  return ctx.consts.C2_fund * std::pow(r, 2 * ctx.s() - ctx.N - 2);
}

double green_comparator(const Point& x, const Point& y, int N, double s) {
  double dx = 1 - x.norm(), dy = 1 - y.norm(), d = dist(x, y);
  double dd = dx * dy;
  if (std::abs(N - 2 * s) < 1e-12) return std::log1p(std::pow(dd, s) / std::pow(d, 2 * s));
  if (N > 2 * s) return std::pow(d, 2 * s - N) * std::min(1.0, std::pow(dd, s) / std::pow(d, 2 * s));
  return std::pow(dd, s - 0.5 * N) * std::min(1.0, std::pow(dd, 0.5 * N) / std::pow(d, N));
}

}  // namespace fraclap
