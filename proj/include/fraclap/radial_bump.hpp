#pragma once

#include <string>
#include <vector>

#include "fraclap/point.hpp"

namespace fraclap {

struct BumpTerm {
  double coef = 0;
  double exponent = 0;
};

struct SmoothnessClass {
  double global_order = 0;
};

// sum_j c_j (R^2 - |x - x0|^2)_+^{a_j}
class RadialPolyBump {
 public:
  RadialPolyBump() = default;
  RadialPolyBump(Point center, double radius, std::vector<BumpTerm> terms);
  // single term coef*(R^2-q)_+^exponent
  static RadialPolyBump single(Point center, double radius, double exponent, double coef = 1.0);

  const Point& center() const { return center_; }
  double radius() const { return radius_; }
  int dim() const { return center_.dim(); }
  const std::vector<BumpTerm>& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }

  double evaluate(const Point& x) const;
  // value as a function of q = |x-x0|^2
  double evaluate_q(double q) const;
  SmoothnessClass smoothness() const;
  double min_exponent() const;

  RadialPolyBump scaled(double a) const;

 private:
  void normalize();
  Point center_;
  double radius_ = 1.0;
  std::vector<BumpTerm> terms_;
};

double smoothness_of_exponent(double a);

// -Delta u. strict=true refuses exponents below 2 (the zero extension would
// stop being C^1 across the support sphere); lenient results are valid only
// inside the open support ball.
RadialPolyBump laplacian_exact(const RadialPolyBump& u, bool strict = true);
RadialPolyBump iterate_laplacian(const RadialPolyBump& u, int m, bool strict = true);

std::string to_json(const RadialPolyBump& u);
RadialPolyBump bump_from_json(const std::string& text);

}  // namespace fraclap
