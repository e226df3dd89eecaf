#pragma once

#include <cmath>
#include <optional>
#include <stdexcept>

namespace memdg {

struct Point2 {
  double x = 0.0;
  double y = 0.0;
};

inline Point2 operator+(Point2 a, Point2 b) { return {a.x + b.x, a.y + b.y}; }
inline Point2 operator-(Point2 a, Point2 b) { return {a.x - b.x, a.y - b.y}; }
inline Point2 operator*(double s, Point2 a) { return {s * a.x, s * a.y}; }
inline double dot(Point2 a, Point2 b) { return a.x * b.x + a.y * b.y; }
inline double norm(Point2 a) { return std::hypot(a.x, a.y); }

/// Rectangular solution domain split into two compartments by the vertical
/// line x = interface_x. Compartment 1 is {x < interface_x}, compartment 2
/// is {x > interface_x}. The interface is optional so that single-compartment
/// configurations (no internal membrane) can be expressed.
struct Domain2D {
  double x0, x1;
  double y0, y1;
  std::optional<double> interface_x;

  Domain2D(double x0_, double x1_, double y0_, double y1_, double ix)
      : x0(x0_), x1(x1_), y0(y0_), y1(y1_), interface_x(ix) {
    if (!(x0 < ix && ix < x1) || !(y0 < y1))
      throw std::invalid_argument("Domain2D: need x0 < interface_x < x1 and y0 < y1");
  }

  static Domain2D without_interface(double x0, double x1, double y0, double y1) {
    Domain2D d;
    d.x0 = x0;
    d.x1 = x1;
    d.y0 = y0;
    d.y1 = y1;
    if (!(x0 < x1 && y0 < y1))
      throw std::invalid_argument("Domain2D: empty box");
    return d;
  }

  double width() const { return x1 - x0; }
  double height() const { return y1 - y0; }
  double area() const { return width() * height(); }

 private:
  Domain2D() : x0(0), x1(1), y0(0), y1(1) {}
};

}  // namespace memdg
