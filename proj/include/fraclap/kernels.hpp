#pragma once

#include "fraclap/core.hpp"
#include "fraclap/quadrature.hpp"

namespace fraclap {

enum class InnerMethod { IncompleteBeta, RawQuadrature };

// int_0^rho v^{s-1} (1+v)^{-N/2} dv, evaluated in the t = v/(1+v) form
// int_0^{rho/(1+rho)} t^{a-1} (1-t)^{b-1} dt with a = s, b = N/2 - s.
class BoggioInner {
 public:
  BoggioInner() = default;
  BoggioInner(int N, double s);
  double operator()(double rho) const;

 private:
  double lower_series(double x) const;              // x <= 1/2
  double upper_series(double tau0) const;           // int_{tau0}^{1/2} in tau = 1 - t
  double a_ = 1, b_ = 0, half_ = 0;
};

struct KernelContext {
  int N = 1;
  FracOrder order;
  ConstantSet consts;
  QuadSpec spec;
  InnerMethod inner = InnerMethod::IncompleteBeta;
  BoggioInner boggio;

  KernelContext() = default;
  KernelContext(int N, double s, QuadSpec spec = {});
  double s() const { return order.s; }
  // same dimension and spec, different order
  KernelContext with_order(double s2) const;
};

double boggio_inner(double rho_val, const KernelContext& ctx);
double boggio_inner_raw(double rho_val, const KernelContext& ctx);

double green(const Point& x, const Point& y, const KernelContext& ctx);
double green_integer_form(const Point& x, const Point& y, const KernelContext& ctx);
double poly_P(const Point& x, const Point& y, const KernelContext& ctx);
double martin(const Point& x, const Point& theta, const KernelContext& ctx);
double poisson(const Point& x, const Point& theta, int N);
double fundamental(const Point& x, const KernelContext& ctx);
double fundamental_remainder(const Point& x, const KernelContext& ctx);

// two-sided comparator for G_s by the 2s vs N trichotomy, d(x) = 1 - |x|
double green_comparator(const Point& x, const Point& y, int N, double s);

}  // namespace fraclap
