#pragma once

#include <optional>

#include "fraclap/point.hpp"

namespace fraclap {

struct FracOrder {
  double s = 1.0;
  int m = 0;
  double sigma = 1.0;
  bool integer() const { return sigma == 1.0; }
};

FracOrder frac_split(double s);

struct ConstantSet {
  std::optional<double> c_frac;         // undefined for sigma = 1
  double k_green = 0;
  double gamma_ball = 0;
  double kappa_fund = 0;
  bool kappa_log_branch = false;
  double C2_fund = 0;
  std::optional<double> C_interaction;  // undefined for sigma = 1
};

// c_{N,sigma}; requires sigma in (0,1).
double c_frac(int N, double sigma);
double k_green(int N, double s);
double gamma_ball(int N, double s);
double kappa_fund(int N, double s);
bool log_branch(int N, double s);
double C_interaction(int N, const FracOrder& o);

ConstantSet constants(int N, const FracOrder& order);

double bracket(const Point& x, const Point& y);
double rho(const Point& x, const Point& y);

// (t)_+^a with 0^0 read as the indicator of t > 0
double pos_pow(double t, double a);

}  // namespace fraclap
