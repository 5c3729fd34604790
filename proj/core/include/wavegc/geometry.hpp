#pragma once

#include <cmath>

namespace wavegc {

struct Point {
  double x = 0.0;
  double y = 0.0;
};

/// Axis-aligned rectangle [x0,x1] x [y0,y1].
struct Rect {
  double x0 = 0.0;
  double x1 = 1.0;
  double y0 = 0.0;
  double y1 = 1.0;

  double width() const { return x1 - x0; }
  double height() const { return y1 - y0; }
  double area() const { return width() * height(); }
  bool contains(Point p, double tol = 0.0) const {
    return p.x >= x0 - tol && p.x <= x1 + tol && p.y >= y0 - tol && p.y <= y1 + tol;
  }
};

inline Rect unit_square() { return Rect{0.0, 1.0, 0.0, 1.0}; }

}  // namespace wavegc
