#include "wavegc/timebasis.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "wavegc/error.hpp"

namespace wavegc {

namespace {

std::vector<std::vector<double>> monomials(TimeBasisKind kind) {
  switch (kind) {
    case TimeBasisKind::HermiteCubic:
      return {{1, 0, -3, 2}, {0, 1, -2, 1}, {0, 0, 3, -2}, {0, 0, -1, 1}};
    case TimeBasisKind::HermiteQuintic:
      return {{1, 0, 0, -10, 15, -6},
              {0, 1, 0, -6, 8, -3},
              {0, 0, 0.5, -1.5, 1.5, -0.5},
              {0, 0, 0, 10, -15, 6},
              {0, 0, 0, -4, 7, -3},
              {0, 0, 0, 0.5, -1, 0.5}};
    case TimeBasisKind::LagrangeQuadratic:
      return {{1, -3, 2}, {0, 4, -4}, {0, -1, 2}};
  }
  throw Error(ErrorKind::InvalidInput, "unknown time basis");
}

double falling(int m, int d) {
  double r = 1.0;
  for (int i = 0; i < d; ++i) r *= m - i;
  return r;
}

}  // namespace

TimeBasis::TimeBasis(TimeBasisKind kind) : kind_(kind), coeffs_(monomials(kind)) {}

TimeBasis TimeBasis::hermite(int degree) {
  if (degree == 3) return TimeBasis(TimeBasisKind::HermiteCubic);
  if (degree == 5) return TimeBasis(TimeBasisKind::HermiteQuintic);
  throw Error(ErrorKind::InvalidInput, "Hermite basis degree must be 3 or 5, got " + std::to_string(degree));
}

int TimeBasis::smoothness() const {
  switch (kind_) {
    case TimeBasisKind::HermiteCubic: return 1;
    case TimeBasisKind::HermiteQuintic: return 2;
    default: return 0;
  }
}

double TimeBasis::eval(int idx, double that, int deriv) const {
  if (idx < 0 || idx >= size()) {
    throw Error(ErrorKind::InvalidIndex, "basis index " + std::to_string(idx) + " out of range");
  }
  if (deriv < 0) throw Error(ErrorKind::InvalidIndex, "negative derivative order");
  const auto& c = coeffs_[idx];
  double acc = 0.0;
  for (int m = static_cast<int>(c.size()) - 1; m >= deriv; --m) acc = acc * that + falling(m, deriv) * c[m];
  return acc;
}

void TimeBasis::eval_all(double that, int deriv, std::span<double> out) const {
  for (int i = 0; i < size(); ++i) out[i] = eval(i, that, deriv);
}

std::vector<double> TimeBasis::integrals() const {
  std::vector<double> out;
  for (const auto& c : coeffs_) {
    double s = 0.0;
    for (std::size_t m = 0; m < c.size(); ++m) s += c[m] / static_cast<double>(m + 1);
    out.push_back(s);
  }
  return out;
}

double basis_eval(const TimeBasis& basis, int idx, double that, int deriv) { return basis.eval(idx, that, deriv); }

Vector slab_eval(const TimeBasis& basis, std::span<const Vector> coeffs, double t_start, double tau, double t,
                 int deriv) {
  if (static_cast<int>(coeffs.size()) != basis.size()) {
    throw Error(ErrorKind::InvalidInput, "coefficient count does not match the time basis");
  }
  const double tol = 1e-12 * tau;
  if (t < t_start - tol || t > t_start + tau + tol) {
    throw Error(ErrorKind::OutOfSlab, "t = " + std::to_string(t) + " outside slab [" + std::to_string(t_start) +
                                          ", " + std::to_string(t_start + tau) + "]");
  }
  const double that = std::clamp((t - t_start) / tau, 0.0, 1.0);
  const double scale = std::pow(tau, -deriv);
  Vector out = Vector::Zero(coeffs[0].size());
  for (int l = 0; l < basis.size(); ++l) {
    const double w = basis.eval(l, that, deriv);
    if (w != 0.0) out.noalias() += (w * scale) * coeffs[l];
  }
  return out;
}

Vector slab_eval(const SlabCoeffs& slab, Field field, double t, int deriv) {
  const auto& c = field == Field::U ? slab.u : slab.v;
  return slab_eval(TimeBasis(slab.basis), c, slab.t_start, slab.tau, t, deriv);
}

std::vector<Vector> hermite_coeffs_of(const TimeDerivatives& derivative, double t_start, double tau, int l) {
  if (l < 1 || l > 2) throw Error(ErrorKind::InvalidInput, "Hermite smoothness must be 1 or 2");
  std::vector<Vector> out;
  out.reserve(2 * (l + 1));
  for (double t : {t_start, t_start + tau}) {
    double scale = 1.0;
    for (int s = 0; s <= l; ++s) {
      out.push_back(scale * derivative(t, s));
      scale *= tau;
    }
  }
  return out;
}

}  // namespace wavegc
