#pragma once
#include <string>
#include <vector>

#include "fraclap/kernels.hpp"
#include "fraclap/radial_bump.hpp"

namespace fraclap {

struct FreeProblem {
  KernelContext ctx;
  RadialPolyBump rhs;
  // "2s<N", "2s=N" or "2s>N"
  std::string regime() const;
};

// (F_{N,s} * f)(x)
QuadResult solve_free_eval(const FreeProblem& p, const Point& x);
double solve_free(const FreeProblem& p, const Point& x);

// N-dimensional cube grid [-a, a]^N with n points per axis
std::vector<Point> cube_grid(int N, double a, int n);

// min of solve_free over the grid; needs 2s < N and rhs >= 0. Zero rhs gives 0.
double positivity_scan(const FreeProblem& p, const std::vector<Point>& grid);

}  // namespace fraclap
