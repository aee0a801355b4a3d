#pragma once

#include <array>
#include <cmath>
#include <initializer_list>
#include <string>

namespace fraclap {

// Fixed-capacity Euclidean point, dimension 1..3.
class Point {
 public:
  Point() = default;
  Point(std::initializer_list<double> xs);
  static Point zero(int dim);
  static Point axis(int dim, int i, double len = 1.0);

  int dim() const { return dim_; }
  double operator[](int i) const { return c_[i]; }
  double& operator[](int i) { return c_[i]; }

  double norm2() const;
  double norm() const { return std::sqrt(norm2()); }
  bool finite() const;
  std::string str() const;

  Point& operator+=(const Point& o);
  Point& operator-=(const Point& o);
  Point& operator*=(double a);

 private:
  std::array<double, 3> c_{};
  int dim_ = 0;
};

Point operator+(Point a, const Point& b);
Point operator-(Point a, const Point& b);
Point operator*(double a, Point p);
Point operator*(Point p, double a);
double dot(const Point& a, const Point& b);
double dist(const Point& a, const Point& b);
double dist2(const Point& a, const Point& b);
bool operator==(const Point& a, const Point& b);

}  // namespace fraclap
