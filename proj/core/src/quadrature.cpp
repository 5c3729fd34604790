#include "wavegc/quadrature.hpp"

#include <cmath>
#include <numbers>

#include "wavegc/error.hpp"

namespace wavegc {

namespace {

// Legendre P_n(x) and P_n'(x) on [-1,1] by the three-term recurrence.
void legendre(int n, double x, double& p, double& dp) {
  double p0 = 1.0;
  double p1 = x;
  if (n == 0) {
    p = 1.0;
    dp = 0.0;
    return;
  }
  for (int k = 2; k <= n; ++k) {
    const double pk = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
    p0 = p1;
    p1 = pk;
  }
  p = p1;
  dp = n * (x * p1 - p0) / (x * x - 1.0);
}

}  // namespace

QuadratureRule gauss_legendre(int n) {
  if (n < 1) throw Error(ErrorKind::InvalidInput, "Gauss-Legendre rule needs n >= 1");
  QuadratureRule rule;
  rule.points.resize(n);
  rule.weights.resize(n);
  for (int i = 0; i < n; ++i) {
    double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    double p = 0.0;
    double dp = 0.0;
    for (int it = 0; it < 100; ++it) {
      legendre(n, x, p, dp);
      const double dx = p / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    legendre(n, x, p, dp);
    // Roots come out in decreasing order; store ascending on [0,1].
    rule.points[n - 1 - i] = 0.5 * (x + 1.0);
    rule.weights[n - 1 - i] = 1.0 / ((1.0 - x * x) * dp * dp);
  }
  return rule;
}

QuadratureRule gauss_lobatto(int n) {
  if (n < 2) throw Error(ErrorKind::InvalidInput, "Gauss-Lobatto rule needs n >= 2");
  const int m = n - 1;  // interior nodes are the roots of P_m'
  QuadratureRule rule;
  rule.points.resize(n);
  rule.weights.resize(n);
  rule.points[0] = 0.0;
  rule.points[n - 1] = 1.0;
  const double w_end = 1.0 / (m * (m + 1.0));
  rule.weights[0] = w_end;
  rule.weights[n - 1] = w_end;
  for (int i = 1; i < m; ++i) {
    // Chebyshev-Gauss-Lobatto initial guess, Newton on P_m'.
    double x = -std::cos(std::numbers::pi * i / m);
    for (int it = 0; it < 100; ++it) {
      double p = 0.0;
      double dp = 0.0;
      legendre(m, x, p, dp);
      // P_m'' from the Legendre ODE: (1-x^2) P'' = 2x P' - m(m+1) P.
      const double d2p = (2.0 * x * dp - m * (m + 1.0) * p) / (1.0 - x * x);
      const double dx = dp / d2p;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    double p = 0.0;
    double dp = 0.0;
    legendre(m, x, p, dp);
    rule.points[i] = 0.5 * (x + 1.0);
    rule.weights[i] = 1.0 / (m * (m + 1.0) * p * p);
  }
  return rule;
}

}  // namespace wavegc
