#include "fraclap/point.hpp"

#include <sstream>

#include "fraclap/error.hpp"

namespace fraclap {

Point::Point(std::initializer_list<double> xs) {
  if (xs.size() < 1 || xs.size() > 3) throw Error(ErrorKind::Domain, "point dimension must be 1..3");
  dim_ = static_cast<int>(xs.size());
  int i = 0;
  for (double v : xs) c_[i++] = v;
}

Point Point::zero(int dim) {
  if (dim < 1 || dim > 3) throw Error(ErrorKind::Domain, "point dimension must be 1..3");
  Point p;
  p.dim_ = dim;
  return p;
}

Point Point::axis(int dim, int i, double len) {
  Point p = zero(dim);
  p.c_[i] = len;
  return p;
}

double Point::norm2() const {
  double s = 0;
  for (int i = 0; i < dim_; ++i) s += c_[i] * c_[i];
  return s;
}

bool Point::finite() const {
  for (int i = 0; i < dim_; ++i)
    if (!std::isfinite(c_[i])) return false;
  return true;
}

std::string Point::str() const {
  std::ostringstream os;
  os.precision(17);
  os << "(";
  for (int i = 0; i < dim_; ++i) os << (i ? "," : "") << c_[i];
  os << ")";
  return os.str();
}

Point& Point::operator+=(const Point& o) {
  for (int i = 0; i < dim_; ++i) c_[i] += o.c_[i];
  return *this;
}
Point& Point::operator-=(const Point& o) {
  for (int i = 0; i < dim_; ++i) c_[i] -= o.c_[i];
  return *this;
}
Point& Point::operator*=(double a) {
  for (int i = 0; i < dim_; ++i) c_[i] *= a;
  return *this;
}

Point operator+(Point a, const Point& b) { return a += b; }
Point operator-(Point a, const Point& b) { return a -= b; }
Point operator*(double a, Point p) { return p *= a; }
Point operator*(Point p, double a) { return p *= a; }

double dot(const Point& a, const Point& b) {
  double s = 0;
  for (int i = 0; i < a.dim(); ++i) s += a[i] * b[i];
  return s;
}

double dist2(const Point& a, const Point& b) {
  double s = 0;
  for (int i = 0; i < a.dim(); ++i) {
    double d = a[i] - b[i];
    s += d * d;
  }
  return s;
}

double dist(const Point& a, const Point& b) { return std::sqrt(dist2(a, b)); }

bool operator==(const Point& a, const Point& b) {
  if (a.dim() != b.dim()) return false;
  for (int i = 0; i < a.dim(); ++i)
    if (a[i] != b[i]) return false;
  return true;
}

}  // namespace fraclap
