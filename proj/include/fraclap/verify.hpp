#pragma once
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "fraclap/ball_solver.hpp"
#include "fraclap/frac_op.hpp"

namespace fraclap {

struct CheckReport {
  std::string name;
  double residual = 0;
  double tolerance = 0;
  bool passed = false;
  nlohmann::json context = nlohmann::json::object();

  void finish() { passed = residual <= tolerance; }
};

nlohmann::json to_json(const CheckReport& r);

// FD Laplacian identity for G_s(., y) at x. Residual is relative to
// max(|left|, |right|, 1e-8).
CheckReport check_green_recurrence(const KernelContext& ctx, const Point& x, const Point& y, double h = 1e-3,
                                   double tol = 1e-4);
// observed order log2(r(h) / r(h/2)) of the absolute FD residual
double green_recurrence_order(const KernelContext& ctx, const Point& x, const Point& y, double h = 1e-3);

CheckReport check_fund_recurrence(const KernelContext& ctx, const Point& x, double h = 1e-3, double tol = 1e-4);
double fund_recurrence_order(const KernelContext& ctx, const Point& x, double h = 1e-3);

// G_s(x, z_k) / (1-|z_k|^2)^s with z_k = (1 - 2^-k) theta against M_s(x, theta).
// Residual is relative to |M|; context carries the whole sequence.
CheckReport check_martin_limit(const KernelContext& ctx, const Point& x, const Point& theta, int kmax = 20,
                               double tol = 1e-4);

CheckReport check_martin_rep(const KernelContext& ctx, const Point& x, const Point& y, double tol = 1e-7);

// right-hand side of a distributional identity: a field, atoms, or both
struct RhsData {
  std::function<double(const Point&)> f;
  std::vector<SupportBall> f_support;
  std::vector<std::pair<Point, double>> atoms;
};

// max over bumps of |<u, (-Delta)^s phi> - <f, phi>| / scale, where
// scale = max(|left|, |right|, int |u (-Delta)^s phi|, 1e-8). Bumps must lie in
// one of the omega balls.
CheckReport check_distributional(const EvaluableField& u, const RhsData& f, const KernelContext& ctx,
                                 const std::vector<RadialPolyBump>& bumps, const std::vector<SupportBall>& omega,
                                 double tol = 1e-3);

// max over x of |int_B G_s(x,y) dy - gamma (1-|x|^2)^s| / max(|left|, |right|, 1e-8)
CheckReport check_mass_identity(const KernelContext& ctx, const std::vector<Point>& xs, double tol = 1e-5);

struct SuiteConfig {
  std::uint64_t seed = 20240607;
  std::optional<int> dim;
  std::optional<double> order;
  QuadSpec spec;
};

// names of the checks run_suite knows; "all" selects every applicable one
std::vector<std::string> suite_check_names();
std::vector<CheckReport> run_suite(const std::vector<std::string>& names, const SuiteConfig& cfg);

}  // namespace fraclap
