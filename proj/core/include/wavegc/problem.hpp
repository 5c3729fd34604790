#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "wavegc/geometry.hpp"
#include "wavegc/mesh.hpp"

namespace wavegc {

/// g(x, t, s) = d^s/dt^s g at (x, t).
using SpaceTimeField = std::function<double(Point, double, int)>;
using PointField = std::function<double(Point)>;

/// A product fx(x1) * fy(x2); exact fields are sums of such terms at fixed t,
/// which lets the harness evaluate them on tensor grids cheaply.
struct SeparableTerm {
  std::function<double(double)> fx;
  std::function<double(double)> fy;
};

enum class ExactQuantity { U, V, Ux, Uy };

struct ExactSolution {
  /// d^s u / dt^s at (x, t).
  SpaceTimeField u;
  /// Separable decomposition of u, v = du/dt and grad u at time t.
  std::function<std::vector<SeparableTerm>(double t, ExactQuantity q)> terms;
};

/// Evaluates sum_terms fx(xs[i]) fy(ys[j]) into out[j * xs.size() + i].
void eval_separable(const std::vector<SeparableTerm>& terms, const std::vector<double>& xs,
                    const std::vector<double>& ys, std::vector<double>& out);

/// d_tt u - div(c^2 grad u) = f with Dirichlet data gu on the predicate part
/// of the boundary and homogeneous Neumann data elsewhere.
struct WaveProblem {
  std::string name;
  Rect domain;
  double final_time = 1.0;
  PointField csq;
  SpaceTimeField f;  // time derivatives up to order 2
  bool has_forcing = true;
  SpaceTimeField gu;  // time derivatives up to order 3
  bool has_boundary_data = true;
  PointField u0;
  PointField v0;
  PointField dtv0;   // d_t v(0) = c^2 lap u0 + f(0)
  PointField dt2v0;  // d_tt v(0) = c^2 lap v0 + d_t f(0); may be empty
  DirichletPredicate dirichlet;
  std::optional<Rect> control_region;
  std::optional<ExactSolution> exact;
  // Suggested base mesh.
  int nx = 4;
  int ny = 4;
};

/// u1 = sin(4 pi t) x1 (x1 - 1) x2 (x2 - 1) on (0,1)^2 x [0,1], c = 1.
WaveProblem mms_u1();
/// u2 = sin(2 pi t + x1) sin(2 pi t x2) on (0,1)^2 x [0,1], c = 1.
WaveProblem mms_u2();

/// Regularized impulse u0 = e^{-r^2}(1 - r^2) H(1 - r), r = 100|x|, on
/// (-1,1)^2 with c = 1 below x2 = 0.2 and c = 9 above. Sensor region
/// (0.75 - hc, 0.75 + hc) x (-hc, hc); requires 0 < hc < 0.25.
WaveProblem shm_problem(double hc = 0.05);

/// Selects mms_u1 | mms_u2 | shm.
WaveProblem problem_by_name(const std::string& name, double hc = 0.05);

/// Spot-checks that the supplied time derivatives of f and gu agree with
/// centred differences of the lower orders; throws InvalidData otherwise.
void check_time_derivatives(const WaveProblem& problem, double rel_tol = 1e-6);

}  // namespace wavegc
