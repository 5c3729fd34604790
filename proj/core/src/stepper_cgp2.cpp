#include "wavegc/stepper_cgp2.hpp"

#include <cmath>

#include "wavegc/error.hpp"
#include "wavegc/quadrature.hpp"

namespace wavegc {

namespace {

// a[i][j] = int_0^1 L_j' psi_i, b[i][j] = int_0^1 L_j psi_i with psi_0 = 1,
// psi_1 = 2t - 1 and L_j the quadratic Lagrange polynomials at 0, 1/2, 1.
constexpr double kA[2][3] = {{-1.0, 0.0, 1.0}, {2.0 / 3.0, -4.0 / 3.0, 2.0 / 3.0}};
constexpr double kB[2][3] = {{1.0 / 6.0, 2.0 / 3.0, 1.0 / 6.0}, {-1.0 / 6.0, 0.0, 1.0 / 6.0}};

}  // namespace

Cgp2Stepper::Cgp2Stepper(const SemiDiscrete& sd, const SolverOptions& options)
    : Stepper(sd, SlabSolver(sd, options, /*retained=*/1, /*leading=*/1.0, default_mu(), /*optimise=*/true)) {}

StepState Cgp2Stepper::init_state(double tau) const {
  const WaveProblem& p = sd_->problem();
  StepState s;
  s.t = 0.0;
  s.tau = tau;
  s.u = {sd_->interpolate_free(p.u0)};
  s.v = {sd_->interpolate_free(p.v0)};
  return s;
}

// Rows ordered (u-equation tested with psi_1, u-equation with psi_0,
// v-equation with psi_1, v-equation with psi_0) so that no diagonal block vanishes.
std::vector<BlockCoeff> Cgp2Stepper::block_pattern(double tau) {
  std::vector<BlockCoeff> b;
  for (int i : {1, 0}) {
    b.push_back({kA[i][1], 0.0});
    b.push_back({kA[i][2], 0.0});
    b.push_back({-tau * kB[i][1], 0.0});
    b.push_back({-tau * kB[i][2], 0.0});
  }
  for (int i : {1, 0}) {
    b.push_back({0.0, tau * kB[i][1]});
    b.push_back({0.0, tau * kB[i][2]});
    b.push_back({kA[i][1], 0.0});
    b.push_back({kA[i][2], 0.0});
  }
  return b;
}

BlockSystem Cgp2Stepper::assemble_block(const StepState& state, double tau) const {
  const SemiDiscrete& sd = *sd_;
  const SparseMatrix& m = sd.mass();
  const SparseMatrix& a = sd.stiffness();
  const double t0 = state.t;
  const Vector& u0 = state.u[0];
  const Vector& v0 = state.v[0];

  // tau * int F psi_i by 3-point Gauss, minus the Lagrange-interpolated lifting.
  Vector load[2] = {Vector::Zero(sd.n_free()), Vector::Zero(sd.n_free())};
  if (sd.has_forcing()) {
    const QuadratureRule q = gauss_legendre(3);
    for (std::size_t k = 0; k < q.points.size(); ++k) {
      const Vector f = sd.load(t0 + q.points[k] * tau, 0);
      load[0] += (tau * q.weights[k]) * f;
      load[1] += (tau * q.weights[k] * (2.0 * q.points[k] - 1.0)) * f;
    }
  }
  if (sd.has_boundary_data()) {
    for (int j = 0; j < 3; ++j) {
      const double t = t0 + 0.5 * j * tau;
      const Vector bm = sd.boundary_mass(t, 1);
      const Vector ba = sd.boundary_stiffness(t, 0);
      for (int i = 0; i < 2; ++i) load[i] -= kA[i][j] * bm + tau * kB[i][j] * ba;
    }
  }

  BlockSystem sys;
  sys.n = 4;
  sys.blocks = block_pattern(tau);
  const Vector mu0 = m * u0;
  const Vector mv0 = m * v0;
  const Vector au0 = a * u0;
  for (int i : {1, 0}) sys.rhs.push_back(-kA[i][0] * mu0 + tau * kB[i][0] * mv0);
  for (int i : {1, 0}) sys.rhs.push_back(load[i] - kA[i][0] * mv0 - tau * kB[i][0] * au0);
  return sys;
}

SlabCoeffs Cgp2Stepper::solve(const StepState& state, int index, double tau) {
  if (!(tau > 0.0)) throw Error(ErrorKind::InvalidInput, "step size must be positive");
  const SemiDiscrete& sd = *sd_;
  const BlockSystem sys = assemble_block(state, tau);
  const Eigen::Index n = sd.n_free();
  const Vector& u0 = state.u[0];
  const Vector& v0 = state.v[0];
  Vector u1, u2, v1, v2;
  const auto strategy = solver_.options().strategy;
  if (strategy == SolverStrategy::Condensed || strategy == SolverStrategy::CondensedDirect) {
    const Vector guess = u0 + tau * v0;
    u2 = solver_.solve_retained(sys, tau, &guess);
    // v-equation tested with psi_1 has no A u1 term; with the u-equations it
    // gives 2 v0 + (6 u0 - 8 u1 + 2 u2)/tau = M^-1 (R_1 - tau/6 A (u2 - u0)).
    const Vector q = sd.mass_solver().solve(sys.rhs[2] + kA[1][0] * (sd.mass() * v0) -
                                            (tau * kB[1][2]) * (sd.stiffness() * u2));
    u1 = (6.0 * u0 + 2.0 * u2 + tau * (2.0 * v0 - q)) / 8.0;
    v2 = v0 + 4.0 * (u0 - 2.0 * u1 + u2) / tau;
    v1 = 1.5 * (u2 - u0) / tau - 0.25 * (v0 + v2);
  } else {
    const Vector x = solver_.solve_block(sys, tau);
    u1 = x.segment(0, n);
    u2 = x.segment(n, n);
    v1 = x.segment(2 * n, n);
    v2 = x.segment(3 * n, n);
  }
  SlabCoeffs slab;
  slab.index = index;
  slab.t_start = state.t;
  slab.tau = tau;
  slab.basis = TimeBasisKind::LagrangeQuadratic;
  const Vector* us[3] = {&u0, &u1, &u2};
  const Vector* vs[3] = {&v0, &v1, &v2};
  for (int j = 0; j < 3; ++j) {
    const double t = state.t + 0.5 * j * tau;
    slab.u.push_back(sd.extend(*us[j], sd.dirichlet_values(t, 0)));
    slab.v.push_back(sd.extend(*vs[j], sd.dirichlet_values(t, 1)));
  }
  return slab;
}

StepState Cgp2Stepper::advance(const SlabCoeffs& slab, double next_tau) const {
  StepState s;
  s.t = slab.t_end();
  s.tau = next_tau;
  s.u = {sd_->restrict_free(slab.u[2])};
  s.v = {sd_->restrict_free(slab.v[2])};
  return s;
}

}  // namespace wavegc
