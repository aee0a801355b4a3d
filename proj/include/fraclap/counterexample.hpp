#pragma once
#include <string>
#include <vector>

#include "fraclap/frac_op.hpp"

namespace fraclap {

struct CEConfig {
  int N = 1;
  double s = 1.5;
  SupportBall D{Point{-0.5}, 0.5};
  SupportBall A{Point{0.5}, 0.25};
  RadialPolyBump g;
  double margin = 1.05;
  int grid = 201;  // points per component for N = 1, per axis otherwise
  QuadSpec spec;

  // D = B(-0.5 e1, 0.5), A = B(0.5 e1, 0.25), g = (R_g^2 - |y - c_D|^2)_+^{2m+3}
  // with R_g = 0.25
  static CEConfig standard(int N, double s);
  void validate() const;
};

struct CESample {
  Point x;
  int component;  // 0 = D, 1 = A
  double u;
  double f;
  // f = a * alpha + beta, so f can be re-evaluated for another a
  double alpha;
  double beta;
};

class CEResult {
 public:
  CEConfig cfg;
  KernelContext ctx;
  RadialPolyBump psi;       // gamma (r_A^2 - |x - x_A|^2)_+^s
  double C = 0;             // interaction constant
  double a = 0;
  double threshold = 0;     // a / margin
  double f_min = 0;
  std::vector<CESample> samples;

  double u(const Point& x) const { return a * psi.evaluate(x) - cfg.g.evaluate(x); }
  // f on the closed components with the stored a, or any other a
  double f(const Point& x) const { return f_at(x, a); }
  double f_at(const Point& x, double a_val) const;
  // C int_D g |x-y|^{-N-2s} dy
  double g_potential(const Point& x) const;
  // C int_A psi |x-y|^{-N-2s} dy
  double psi_potential(const Point& x) const;
  // minimum of f over the stored grid for a different a
  double f_min_for(double a_val) const;
  EvaluableField u_field() const;
};

// The points making up the verification grid of one closed component.
std::vector<Point> component_grid(const SupportBall& b, int N, int n);

CEResult build(const CEConfig& cfg);

struct CEReport {
  double f_min = 0;
  bool f_positive = false;
  bool u_pos_on_A = false;
  bool u_neg_where_g_pos = false;
  double pairing_D = 0;  // relative residuals
  double pairing_A = 0;
  double pairing_tol = 1e-3;
  bool pairing_ok = false;
  bool passed = false;
  std::string to_json() const;
};

// <u, (-Delta)^s phi> - <f, phi> relative to the magnitude scale; phi must sit
// inside D or inside A.
double ce_pairing_residual(const CEResult& res, const RadialPolyBump& phi);
// the standard test bumps: exponent 2m+4, radius 0.8 r, centred in the component
RadialPolyBump ce_test_bump(const CEResult& res, int component);

CEReport verify_ce(const CEResult& res);

struct SignSample {
  Point x;
  double value;
  bool ok;
};
// (-1)^{m+1} (-Delta)^s g > 0 at each point (points must be >= 0.1 from supp g)
std::vector<SignSample> exterior_sign_check(const RadialPolyBump& g, const KernelContext& ctx,
                                            const std::vector<Point>& pts);

// int_A psi * (g potential) and int_D g * (psi potential)
std::pair<double, double> interaction_both_orders(const CEResult& res);

}  // namespace fraclap
