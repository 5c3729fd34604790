#include "wavegc/stepper_gcc2.hpp"

#include <cmath>

#include "wavegc/error.hpp"

namespace wavegc {

Gcc2Stepper::Gcc2Stepper(const SemiDiscrete& sd, const SolverOptions& options)
    : Stepper(sd, SlabSolver(sd, options, /*retained=*/1, /*leading=*/14400.0, default_mu(), /*optimise=*/true)) {}

StepState Gcc2Stepper::init_state(double tau) const {
  const WaveProblem& p = sd_->problem();
  if (!p.dtv0 || !p.dt2v0) throw Error(ErrorKind::InsufficientData, "problem lacks d_t v(0) or d_tt v(0)");
  StepState s;
  s.t = 0.0;
  s.tau = tau;
  const Vector v0 = sd_->interpolate_free(p.v0);
  const Vector dv0 = sd_->interpolate_free(p.dtv0);
  s.u = {sd_->interpolate_free(p.u0), tau * v0, tau * tau * dv0};
  s.v = {v0, tau * dv0, tau * tau * sd_->interpolate_free(p.dt2v0)};
  return s;
}

// The two Galerkin rows are multiplied by kGalerkinScale so that the quintic
// weights 1/2, 1/10, 1/120 become the integers 60, 12, 1.
std::vector<BlockCoeff> Gcc2Stepper::block_pattern(double tau) {
  const double t2 = tau * tau;
  return {
      {0.0, 1.0}, {0.0, 0.0}, {0.0, 0.0}, {1.0 / t2, 0.0},                          // collocation, s = 1
      {0.0, 0.0}, {0.0, 1.0}, {1.0 / tau, 0.0}, {0.0, 0.0},                         // collocation, s = 2
      {120.0, 0.0}, {-60.0, 0.0}, {-tau, 0.0}, {12.0, 0.0},                         // int u' = int v
      {0.0, 60.0 * tau}, {120.0 / tau, -12.0 * tau}, {0.0, 0.0}, {0.0, tau},        // int (M v' + A u) = int F
  };
}

BlockSystem Gcc2Stepper::assemble_block(const StepState& state, double tau) const {
  const SemiDiscrete& sd = *sd_;
  const SparseMatrix& m = sd.mass();
  const SparseMatrix& a = sd.stiffness();
  const double t0 = state.t;
  const double t1 = t0 + tau;
  const auto& u = state.u;
  const auto& v = state.v;

  BlockSystem sys;
  sys.n = 4;
  sys.blocks = block_pattern(tau);
  sys.rhs.resize(4);
  sys.rhs[0] = sd.collocation_rhs(t1, 0);
  sys.rhs[1] = tau * sd.collocation_rhs(t1, 1);
  sys.rhs[2] = m * (u[0] + tau * (0.5 * v[0] + 0.1 * v[1] + v[2] / 120.0));

  auto g = [&](double t, int s) {
    Vector r = sd.load(t, s);
    if (sd.has_boundary_data()) r -= sd.boundary_stiffness(t, s);
    return r;
  };
  Vector r4 = m * v[0] - tau * (a * (0.5 * u[0] + 0.1 * u[1] + u[2] / 120.0));
  if (sd.has_forcing() || sd.has_boundary_data()) {
    int k = 0;
    for (double t : {t0, t1}) {
      double scale = 1.0;
      for (int s = 0; s <= 2; ++s, ++k) {
        r4 += (tau * kWeights[k] * scale) * g(t, s);
        scale *= tau;
      }
    }
  }
  if (sd.has_boundary_data()) r4 -= sd.boundary_mass(t1, 1) - sd.boundary_mass(t0, 1);
  sys.rhs[2] *= kGalerkinScale;
  sys.rhs[3] = kGalerkinScale * r4;
  return sys;
}

SlabCoeffs Gcc2Stepper::solve(const StepState& state, int index, double tau) {
  if (!(tau > 0.0)) throw Error(ErrorKind::InvalidInput, "step size must be positive");
  if (std::abs(state.tau - tau) > 1e-14 * tau) {
    throw Error(ErrorKind::InvalidInput, "state slots are scaled for a different step size");
  }
  const SemiDiscrete& sd = *sd_;
  const SparseMatrix& a = sd.stiffness();
  const SpdSolver& minv = sd.mass_solver();
  const BlockSystem sys = assemble_block(state, tau);
  const Eigen::Index n = sd.n_free();
  Vector u3, u4, v5, u5;
  const auto strategy = solver_.options().strategy;
  if (strategy == SolverStrategy::Condensed || strategy == SolverStrategy::CondensedDirect) {
    // Taylor guess for tau u'(t1) = u4.
    const Vector guess = state.u[1] + state.u[2];
    u4 = solver_.solve_retained(sys, tau, &guess);
    v5 = tau * minv.solve(sys.rhs[1] - a * u4);
    const Vector s3 = state.u[0] + tau * (0.5 * state.v[0] + 0.1 * state.v[1] + state.v[2] / 120.0) + 0.5 * u4 +
                      (tau / 120.0) * v5;
    const Vector ku4 = minv.solve(a * u4);
    const Vector s4 = minv.solve(sys.rhs[3] / kGalerkinScale) - u4 / tau + (tau / 10.0) * ku4;
    const Vector s1 = minv.solve(sys.rhs[0]);
    const Vector ks3 = minv.solve(a * s3);
    u5 = (12.0 * tau / 5.0) * ((tau / 12.0) * ks3 - s4 + (5.0 * tau / 12.0) * s1);
    u3 = s3 - 0.1 * u5;
  } else {
    const Vector x = solver_.solve_block(sys, tau);
    u3 = x.segment(0, n);
    u4 = x.segment(n, n);
    v5 = x.segment(2 * n, n);
    u5 = x.segment(3 * n, n);
  }
  SlabCoeffs slab;
  slab.index = index;
  slab.t_start = state.t;
  slab.tau = tau;
  slab.basis = TimeBasisKind::HermiteQuintic;
  slab.u = detail::hermite_slots(sd, {state.u[0], state.u[1], state.u[2], u3, u4, u5}, state.t, tau, 2, 0);
  slab.v = detail::hermite_slots(sd, {state.v[0], state.v[1], state.v[2], Vector(u4 / tau), Vector(u5 / tau), v5},
                                 state.t, tau, 2, 1);
  return slab;
}

StepState Gcc2Stepper::advance(const SlabCoeffs& slab, double next_tau) const {
  return detail::hermite_handoff(*sd_, slab, 2, next_tau);
}

}  // namespace wavegc
