#include "fraclap/gamma.hpp"

#include <cmath>
#include <numbers>

#include "fraclap/error.hpp"

namespace fraclap {

namespace {
constexpr double kG = 7.0;
constexpr double kCoef[9] = {
    0.99999999999980993,     676.5203681218851,     -1259.1392167224028,
    771.32342877765313,      -176.61502916214059,   12.507343278686905,
    -0.13857109526572012,    9.9843695780195716e-6, 1.5056327351493116e-7};
}  // namespace

double gamma_fn(double x) {
  if (!std::isfinite(x)) throw Error(ErrorKind::Domain, "gamma of non-finite argument");
  if (x <= 0 && x == std::floor(x)) throw Error(ErrorKind::SingularEvaluation, "gamma pole");
  if (x < 0.5) {
    double s = std::sin(std::numbers::pi * x);
    return std::numbers::pi / (s * gamma_fn(1.0 - x));
  }
  // exact factorials keep the integer and half-integer cases clean
  if (x == std::floor(x) && x <= 30) {
    double f = 1;
    for (int k = 2; k < static_cast<int>(x); ++k) f *= k;
    return f;
  }
  x -= 1.0;
  double a = kCoef[0];
  for (int i = 1; i < 9; ++i) a += kCoef[i] / (x + i);
  double t = x + kG + 0.5;
  // split the power to avoid overflow for moderately large x
  double p = std::pow(t, 0.5 * (x + 0.5));
  return std::sqrt(2 * std::numbers::pi) * p * (p * std::exp(-t)) * a;
}

}  // namespace fraclap
