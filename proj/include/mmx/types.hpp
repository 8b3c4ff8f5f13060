#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <stdexcept>
#include <string>

namespace mmx {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;
using Index = Eigen::Index;

// Thrown when an oracle (Hessian-vector product, saddle projection, ...) is
// requested from a problem that does not provide it.
class UnsupportedOperation : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Concatenated min-max iterate z = (x, y).
struct Point {
  Vec x;
  Vec y;

  Point() = default;
  Point(Vec x_, Vec y_) : x(std::move(x_)), y(std::move(y_)) {}

  static Point Zero(Index dx, Index dy) { return {Vec::Zero(dx), Vec::Zero(dy)}; }
  static Point Ones(Index dx, Index dy) { return {Vec::Ones(dx), Vec::Ones(dy)}; }

  Index dim_x() const { return x.size(); }
  Index dim_y() const { return y.size(); }
  Index dim() const { return x.size() + y.size(); }

  double squared_norm() const { return x.squaredNorm() + y.squaredNorm(); }
  double norm() const { return std::sqrt(squared_norm()); }
  double dot(const Point& o) const { return x.dot(o.x) + y.dot(o.y); }
  bool all_finite() const { return x.allFinite() && y.allFinite(); }

  Point& operator+=(const Point& o) { x += o.x; y += o.y; return *this; }
  Point& operator-=(const Point& o) { x -= o.x; y -= o.y; return *this; }
  Point& operator*=(double s) { x *= s; y *= s; return *this; }

  friend Point operator+(Point a, const Point& b) { a += b; return a; }
  friend Point operator-(Point a, const Point& b) { a -= b; return a; }
  friend Point operator*(double s, Point a) { a *= s; return a; }
};

// Dimensions must match and be at least one per block; entries finite.
inline void validate_point(const Point& z) {
  if (z.dim_x() < 1 || z.dim_y() < 1)
    throw std::domain_error("Point: both blocks must be non-empty");
  if (!z.all_finite())
    throw std::domain_error("Point: non-finite entry");
}

inline void require_same_shape(const Point& z, Index dx, Index dy, const char* who) {
  if (z.dim_x() != dx || z.dim_y() != dy)
    throw std::domain_error(std::string(who) + ": dimension mismatch, expected (" +
                            std::to_string(dx) + "," + std::to_string(dy) + "), got (" +
                            std::to_string(z.dim_x()) + "," + std::to_string(z.dim_y()) + ")");
}

}  // namespace mmx
