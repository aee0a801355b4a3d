#include "fraclap/freespace_solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "fraclap/error.hpp"
#include "fraclap/parallel.hpp"

namespace fraclap {

std::string FreeProblem::regime() const {
  double t = 2 * ctx.s() - ctx.N;
  if (std::abs(t) < 1e-12) return "2s=N";
  return t < 0 ? "2s<N" : "2s>N";
}

QuadResult solve_free_eval(const FreeProblem& p, const Point& x) {
  const int N = p.ctx.N;
  if (x.dim() != N || p.rhs.dim() != N) throw Error(ErrorKind::Domain, "dimension mismatch");
  if (p.rhs.is_zero()) return {};
  const Point& c = p.rhs.center();
  BallOptions o;
  o.center = c;
  o.radius = p.rhs.radius();
  o.singular_at = x;  // used only when x lies in the support
  if (N >= 2) o.axis = dist(x, c) > 1e-14 ? x - c : Point::axis(N, 0);
  const KernelContext& ctx = p.ctx;
  auto f = [&](const Point& y) -> Val<1> {
    double v = p.rhs.evaluate(y);
    return {v == 0 ? 0.0 : fundamental(x - y, ctx) * v};
  };
  auto r = quad_ball_k<1>(f, N, ctx.spec, o);
  if (!r.converged && r.err_estimate > 1e-4 * std::abs(r.value[0]) + 1e-10)
    throw Error(ErrorKind::Divergence, "convolution quadrature did not converge at " + x.str());
  return {r.value[0], r.err_estimate, r.converged, r.subdivisions_used};
}

double solve_free(const FreeProblem& p, const Point& x) { return solve_free_eval(p, x).value; }

std::vector<Point> cube_grid(int N, double a, int n) {
  if (N < 1 || N > 3 || n < 1) throw Error(ErrorKind::Domain, "bad cube grid request");
  std::vector<Point> out;
  double h = n > 1 ? 2 * a / (n - 1) : 0.0;
  int ni = n, nj = N > 1 ? n : 1, nk = N > 2 ? n : 1;
  for (int i = 0; i < ni; ++i)
    for (int j = 0; j < nj; ++j)
      for (int k = 0; k < nk; ++k) {
        Point p = Point::zero(N);
        p[0] = n > 1 ? -a + h * i : 0.0;
        if (N > 1) p[1] = n > 1 ? -a + h * j : 0.0;
        if (N > 2) p[2] = n > 1 ? -a + h * k : 0.0;
        out.push_back(p);
      }
  return out;
}

double positivity_scan(const FreeProblem& p, const std::vector<Point>& grid) {
  if (!(2 * p.ctx.s() < p.ctx.N)) throw Error(ErrorKind::Regime, "positivity scan needs 2s < N");
  if (p.rhs.is_zero()) return 0.0;
  // sampled sign check of the data, including the support centre
  const int N = p.ctx.N;
  for (int k = 0; k <= 50; ++k) {
    Point y = p.rhs.center() + Point::axis(N, 0, p.rhs.radius() * k / 50.0);
    if (p.rhs.evaluate(y) < 0) throw Error(ErrorKind::Precondition, "positivity scan needs rhs >= 0");
  }
  if (grid.empty()) throw Error(ErrorKind::Domain, "empty scan grid");
  std::vector<double> v(grid.size(), 0.0);
  parallel_for(grid.size(), [&](std::size_t i) { v[i] = solve_free(p, grid[i]); });
  return *std::min_element(v.begin(), v.end());
}

}  // namespace fraclap
