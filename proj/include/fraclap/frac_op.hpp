#pragma once
#include <array>
#include <functional>
#include <optional>
#include <utility>
#include <vector>

#include "fraclap/kernels.hpp"
#include "fraclap/radial_bump.hpp"

namespace fraclap {

struct SupportBall {
  Point center;
  double radius = 1.0;
};

// A field we can evaluate pointwise plus what the quadrature needs to know
// about it. Empty support means the whole space, and then decay_beta > N is
// required (|u(y)| <= decay_K |y|^-beta far out).
struct EvaluableField {
  std::function<double(const Point&)> fn;
  int dim = 1;
  std::vector<SupportBall> support;
  std::optional<double> decay_beta;
  std::optional<double> decay_K;
  SmoothnessClass smoothness{0};
  std::optional<Point> radial_center;  // u depends on |x - c| only
  // u is invariant under rotations about the line {p + t d}: (p, d)
  std::optional<std::pair<Point, Point>> axis_line;
  double noise = 0;                    // absolute evaluation noise

  double operator()(const Point& x) const { return fn(x); }
  bool compact() const { return !support.empty(); }
  bool in_support(const Point& x) const;
  // distance from x to the nearest support sphere (where kinks live)
  double dist_to_support_boundary(const Point& x) const;

  static EvaluableField from_bump(const RadialPolyBump& u);
  static EvaluableField zero(int dim);
};

struct FracOptions {
  std::optional<double> delta;  // near/far split radius
};

struct FracResult {
  double value = 0;
  double err = 0;
};

// (-Delta)^sigma u(x) for sigma in (0,1): second-difference integral in polar
// coordinates about x, or the exterior formula when x is outside the support.
FracResult frac_sigma_eval(const EvaluableField& u, const Point& x, const KernelContext& ctx,
                           const FracOptions& opt = {});
double frac_sigma_pointwise(const EvaluableField& u, const Point& x, const KernelContext& ctx,
                            const FracOptions& opt = {});

// Exact integer part first, then sigma. Requires smoothness >= 2m+2.
FracResult frac_s_smooth_eval(const RadialPolyBump& u, const Point& x, const KernelContext& ctx,
                              const FracOptions& opt = {});
double frac_s_smooth(const RadialPolyBump& u, const Point& x, const KernelContext& ctx, const FracOptions& opt = {});

struct GridField {
  int dim = 1;
  Point origin;
  double h = 1.0;
  std::array<int, 3> ext{1, 1, 1};
  std::vector<double> values;

  static GridField sample(const std::function<double(const Point&)>& f, int dim, const Point& origin, double h,
                          std::array<int, 3> ext, bool parallel = true);
  std::size_t size() const { return static_cast<std::size_t>(ext[0]) * ext[1] * ext[2]; }
  std::size_t index(int i, int j = 0, int k = 0) const {
    return (static_cast<std::size_t>(i) * ext[1] + j) * ext[2] + k;
  }
  Point node(int i, int j = 0, int k = 0) const;
  double at(int i, int j = 0, int k = 0) const { return values[index(i, j, k)]; }
  void validate() const;
};

// m-fold central-difference negative Laplacian; each pass trims one node per side.
GridField fd_laplacian(const GridField& g, int m);

// sigma by quadrature on a (2m+1)^N stencil around x, then m FD passes.
// This is the order that stays valid for Green-representation solutions.
double frac_s_sigma_first(const EvaluableField& u, const Point& x, const KernelContext& ctx, double h,
                          const FracOptions& opt = {});

// |(-Delta)^s u(x)| (1 + |x|^{N+2s}) at each sample point
std::vector<double> decay_envelope_ratios(const RadialPolyBump& u, const KernelContext& ctx,
                                          const std::vector<Point>& sample);
double decay_envelope_check(const RadialPolyBump& u, const KernelContext& ctx, const std::vector<Point>& sample);

struct PairingResult {
  double value = 0;
  double abs_value = 0;  // int |u (-Delta)^s phi|, the cancellation scale
  double err = 0;
};

// <u, (-Delta)^s phi> = int u (-Delta)^s phi over supp u. For unbounded
// support the product decays like |x|^{-beta-N-2s}, handled by quad_space.
PairingResult pair_with_bump(const EvaluableField& u, const RadialPolyBump& phi, const KernelContext& ctx);
// int f phi over supp phi
// axis: f is symmetric about the line through the centre of phi along it
double pair_rhs(const std::function<double(const Point&)>& f, const RadialPolyBump& phi, const QuadSpec& spec,
                const std::vector<SupportBall>& f_support = {}, std::optional<Point> axis = std::nullopt);

}  // namespace fraclap
