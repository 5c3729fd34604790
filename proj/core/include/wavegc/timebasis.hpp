#pragma once

#include <array>
#include <functional>
#include <span>
#include <vector>

#include "wavegc/fespace.hpp"

namespace wavegc {

enum class TimeBasisKind {
  HermiteCubic,       // C1 pair (value, tau*derivative) at both ends
  HermiteQuintic,     // C2 triple at both ends
  LagrangeQuadratic,  // nodes 0, 1/2, 1
};

/// Polynomial basis on the reference interval [0,1], stored as monomial
/// coefficients taken verbatim from the closed forms.
class TimeBasis {
 public:
  explicit TimeBasis(TimeBasisKind kind);

  /// Hermite basis of degree 3 or 5.
  static TimeBasis hermite(int degree);

  TimeBasisKind kind() const { return kind_; }
  int degree() const { return static_cast<int>(coeffs_.size()) - 1; }
  int size() const { return static_cast<int>(coeffs_.size()); }
  /// l = (k-1)/2 for Hermite bases, 0 for Lagrange.
  int smoothness() const;

  double eval(int idx, double that, int deriv = 0) const;
  void eval_all(double that, int deriv, std::span<double> out) const;
  /// Integrals of the basis functions over [0,1].
  std::vector<double> integrals() const;

 private:
  TimeBasisKind kind_;
  std::vector<std::vector<double>> coeffs_;  // coeffs_[i][m]: t^m coefficient
};

using HermiteBasis = TimeBasis;

/// Throws InvalidIndex for idx outside 0..k or a negative derivative order.
double basis_eval(const TimeBasis& basis, int idx, double that, int deriv);

/// Discrete solution on one slab [t_start, t_start + tau]. For Hermite bases
/// slot s (s <= l) holds tau^s d^s w(t_start) and slot l+1+s holds
/// tau^s d^s w(t_end); for the Lagrange basis slot j holds w at node j.
/// Vectors cover every DOF (Dirichlet entries carry the boundary lifting).
struct SlabCoeffs {
  int index = 0;  // 1-based interval number n
  double t_start = 0.0;
  double tau = 0.0;
  TimeBasisKind basis = TimeBasisKind::HermiteCubic;
  std::vector<Vector> u;
  std::vector<Vector> v;

  double t_end() const { return t_start + tau; }
};

enum class Field { U, V };

/// sum_l c_l d^deriv/dt^deriv xi_l(t); reference derivatives are scaled by tau^-deriv.
/// Throws OutOfSlab when t lies outside the slab (tolerance 1e-12 tau).
Vector slab_eval(const SlabCoeffs& slab, Field field, double t, int deriv = 0);
Vector slab_eval(const TimeBasis& basis, std::span<const Vector> coeffs, double t_start, double tau,
                 double t, int deriv = 0);

/// derivative(t, s) returns d^s g(t) for s = 0..l.
using TimeDerivatives = std::function<Vector(double t, int s)>;

/// Hermite data (g, tau g', [tau^2 g''] at t_start, then the same at t_start + tau).
std::vector<Vector> hermite_coeffs_of(const TimeDerivatives& derivative, double t_start, double tau, int l);

}  // namespace wavegc
