#pragma once
#include <functional>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "fraclap/frac_op.hpp"

namespace fraclap {

struct BallProblem {
  KernelContext ctx;
  EvaluableField rhs;  // evaluated on the unit ball only
  std::string label;

  static BallProblem constant(const KernelContext& ctx, double value, std::string label = "one");
};

// u(x) = int_B G_s(x,y) f(y) dy with its quadrature error; 0 outside the ball.
QuadResult solve_ball_eval(const BallProblem& p, const Point& x);
double solve_ball(const BallProblem& p, const Point& x);

// The solution as a field (noise = the quadrature tolerance it was solved to).
EvaluableField solution_field(const BallProblem& p);

// max over the grid of (1-|x|)^{-s} |u(x)|
double decay_norm(const BallProblem& p, const std::vector<Point>& grid);

struct BoundaryData {
  std::function<double(const Point&)> g;          // continuous part, may be empty
  std::vector<std::pair<Point, double>> atoms;     // finite atomic part
};

double martin_extension(const BoundaryData& data, const KernelContext& ctx, const Point& x);

// Harmonic factor for the product construction. Library members are
// harmonic by construction; custom ones are screened with an FD Laplacian.
class HarmonicFactor {
 public:
  static HarmonicFactor one(int N);
  static HarmonicFactor coordinate(int N, int i);
  static HarmonicFactor cross(int N, int i, int j);          // x_i x_j, i != j
  static HarmonicFactor diff_squares(int N, int i, int j);   // x_i^2 - x_j^2
  static HarmonicFactor custom(int N, std::function<double(const Point&)> fn, std::string name = "custom");

  double operator()(const Point& x) const { return fn_(x); }
  int dim() const { return N_; }
  const std::string& name() const { return name_; }

 private:
  HarmonicFactor(int N, std::function<double(const Point&)> fn, std::string name)
      : N_(N), fn_(std::move(fn)), name_(std::move(name)) {}
  int N_;
  std::function<double(const Point&)> fn_;
  std::string name_;
};

// (1-|x|^2)_+^{s-1} phi(x)
double sharmonic_product(const HarmonicFactor& phi, const KernelContext& ctx, const Point& x);

// Piecewise cubic Hermite table on a uniform grid; slopes from 4th-order
// differences. Used to cache the inner solve of iterated_green.
class CubicTable {
 public:
  CubicTable() = default;
  CubicTable(double a, double b, std::vector<double> values, bool even_at_a = false);
  double operator()(double t) const;

 private:
  double a_ = 0, h_ = 1;
  std::vector<double> v_, d_;
};

// int_B G_{s-j}(x,y) int_B G_j(y,z) f(z) dz dy
class IteratedGreen {
 public:
  IteratedGreen(BallProblem p, int j, int table_nodes = 401);
  double operator()(const Point& x) const;
  double direct(const Point& x) const;  // no table, nested quadrature

 private:
  double inner(const Point& y) const;
  BallProblem outer_, inner_;
  int mode_ = 0;  // 0 direct, 1 interval table, 2 radial table
  CubicTable table_;
};

double iterated_green(const BallProblem& p, int j, const Point& x);

// G_s(x,y) - int_B G_1(x,z) G_{s-1}(z,y) dz
double green_defect(const Point& x, const Point& y, const KernelContext& ctx);
// -4 k_{N,s} (s-1) int_B G_1(x,z) P_{s-1}(z,y) dz
double green_defect_rhs(const Point& x, const Point& y, const KernelContext& ctx);

// C_int * int_{R^N \ B} g(y) |x-y|^{-N-2s} dy for x in B
double exterior_potential(const RadialPolyBump& g, const KernelContext& ctx, const Point& x);
// u = -solve_ball(exterior potential) in B, g outside
double exterior_extension(const RadialPolyBump& g, const KernelContext& ctx, const Point& x);

}  // namespace fraclap
