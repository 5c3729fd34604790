#pragma once

#include <vector>

namespace wavegc {

/// One-dimensional rule on the reference interval [0,1].
struct QuadratureRule {
  std::vector<double> points;
  std::vector<double> weights;

  std::size_t size() const { return points.size(); }
};

/// n-point Gauss-Legendre rule on [0,1]; exact for polynomials of degree 2n-1.
QuadratureRule gauss_legendre(int n);

/// n-point Gauss-Lobatto rule on [0,1] (n >= 2), endpoints included.
QuadratureRule gauss_lobatto(int n);

}  // namespace wavegc
