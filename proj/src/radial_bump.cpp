#include "fraclap/radial_bump.hpp"

#include <algorithm>
#include <cmath>
#include <nlohmann/json.hpp>

#include "fraclap/error.hpp"

namespace fraclap {

RadialPolyBump::RadialPolyBump(Point center, double radius, std::vector<BumpTerm> terms)
    : center_(center), radius_(radius), terms_(std::move(terms)) {
  if (!(radius > 0) || !std::isfinite(radius)) throw Error(ErrorKind::Domain, "bump radius must be positive");
  if (!center.finite()) throw Error(ErrorKind::Domain, "bump center not finite");
  normalize();
}

RadialPolyBump RadialPolyBump::single(Point center, double radius, double exponent, double coef) {
  return RadialPolyBump(center, radius, {{coef, exponent}});
}

void RadialPolyBump::normalize() {
  std::sort(terms_.begin(), terms_.end(),
            [](const BumpTerm& a, const BumpTerm& b) { return a.exponent > b.exponent; });
  std::vector<BumpTerm> out;
  for (const auto& t : terms_) {
    if (!out.empty() && std::abs(out.back().exponent - t.exponent) < 1e-14) {
      out.back().coef += t.coef;
    } else {
      out.push_back(t);
    }
  }
  std::erase_if(out, [](const BumpTerm& t) { return t.coef == 0.0; });
  terms_ = std::move(out);
}

double RadialPolyBump::evaluate_q(double q) const {
  double base = radius_ * radius_ - q;
  if (base <= 0) return 0.0;
  double v = 0;
  for (const auto& t : terms_) v += t.coef * (t.exponent == 0 ? 1.0 : std::pow(base, t.exponent));
  return v;
}

double RadialPolyBump::evaluate(const Point& x) const { return evaluate_q(dist2(x, center_)); }

double smoothness_of_exponent(double a) {
  double k = std::abs(a - std::round(a)) < 1e-12 ? std::round(a) - 1 : std::floor(a);
  return std::max(k, 0.0);
}

SmoothnessClass RadialPolyBump::smoothness() const {
  if (terms_.empty()) return {1e300};
  double k = 1e300;
  for (const auto& t : terms_) k = std::min(k, smoothness_of_exponent(t.exponent));
  return {k};
}

double RadialPolyBump::min_exponent() const {
  double a = 1e300;
  for (const auto& t : terms_) a = std::min(a, t.exponent);
  return a;
}

RadialPolyBump RadialPolyBump::scaled(double a) const {
  auto t = terms_;
  for (auto& x : t) x.coef *= a;
  return RadialPolyBump(center_, radius_, t);
}

RadialPolyBump laplacian_exact(const RadialPolyBump& u, bool strict) {
  const int N = u.dim();
  const double R2 = u.radius() * u.radius();
  std::vector<BumpTerm> out;
  for (const auto& t : u.terms()) {
    double a = t.exponent, c = t.coef;
    if (strict && a < 2) throw Error(ErrorKind::Smoothness, "exponent below 2 in strict Laplacian");
    double c1 = c * (2 * a * N + 4 * a * (a - 1));
    double c2 = -c * 4 * a * (a - 1) * R2;
    if (c1 != 0) out.push_back({c1, a - 1});
    if (c2 != 0) out.push_back({c2, a - 2});
  }
  return RadialPolyBump(u.center(), u.radius(), out);
}

RadialPolyBump iterate_laplacian(const RadialPolyBump& u, int m, bool strict) {
  if (m < 0) throw Error(ErrorKind::Domain, "negative Laplacian count");
  RadialPolyBump v = u;
  for (int i = 0; i < m; ++i) v = laplacian_exact(v, strict);
  return v;
}

std::string to_json(const RadialPolyBump& u) {
  nlohmann::json j;
  std::vector<double> c;
  for (int i = 0; i < u.dim(); ++i) c.push_back(u.center()[i]);
  j["center"] = c;
  j["radius"] = u.radius();
  j["terms"] = nlohmann::json::array();
  for (const auto& t : u.terms()) j["terms"].push_back({{"coef", t.coef}, {"exponent", t.exponent}});
  return j.dump();
}

RadialPolyBump bump_from_json(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorKind::Config, std::string("bad bump JSON: ") + e.what());
  }
  try {
    auto c = j.at("center").get<std::vector<double>>();
    if (c.empty() || c.size() > 3) throw Error(ErrorKind::Config, "bump center must have 1..3 coordinates");
    Point p = Point::zero(static_cast<int>(c.size()));
    for (size_t i = 0; i < c.size(); ++i) p[static_cast<int>(i)] = c[i];
    std::vector<BumpTerm> terms;
    for (const auto& t : j.at("terms")) {
      BumpTerm b{t.at("coef").get<double>(), t.at("exponent").get<double>()};
      if (b.exponent < 0) throw Error(ErrorKind::Config, "bump exponents must be >= 0");
      terms.push_back(b);
    }
    return RadialPolyBump(p, j.at("radius").get<double>(), terms);
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorKind::Config, std::string("bad bump JSON: ") + e.what());
  }
}

}  // namespace fraclap
