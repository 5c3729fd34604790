#include "wavegc/stepper_gcc1.hpp"

#include <cmath>

#include "wavegc/error.hpp"

namespace wavegc {

Gcc1Stepper::Gcc1Stepper(const SemiDiscrete& sd, const SolverOptions& options)
    : Stepper(sd, SlabSolver(sd, options, /*retained=*/2, /*leading=*/1.0, default_mu(), /*optimise=*/false)) {}

StepState Gcc1Stepper::init_state(double tau) const {
  const WaveProblem& p = sd_->problem();
  if (!p.dtv0) throw Error(ErrorKind::InsufficientData, "problem lacks d_t v(0)");
  StepState s;
  s.t = 0.0;
  s.tau = tau;
  const Vector v0 = sd_->interpolate_free(p.v0);
  s.u = {sd_->interpolate_free(p.u0), tau * v0};
  s.v = {v0, tau * sd_->interpolate_free(p.dtv0)};
  return s;
}

std::vector<BlockCoeff> Gcc1Stepper::block_pattern(double tau) {
  return {
      {-1.0, 0.0}, {0.0, 0.0}, {0.0, 0.0}, {1.0 / tau, 0.0},                   // u3/tau = v2
      {0.0, 0.0}, {1.0 / tau, 0.0}, {0.0, 1.0}, {0.0, 0.0},                    // collocation at t_n
      {-tau / 2.0, 0.0}, {tau / 12.0, 0.0}, {1.0, 0.0}, {0.0, 0.0},            // int u' = int v
      {1.0, 0.0}, {0.0, 0.0}, {0.0, tau / 2.0}, {0.0, -tau / 12.0},            // int (M v' + A u) = int F
  };
}

BlockSystem Gcc1Stepper::assemble_block(const StepState& state, double tau) const {
  const SemiDiscrete& sd = *sd_;
  const SparseMatrix& m = sd.mass();
  const SparseMatrix& a = sd.stiffness();
  const double t0 = state.t;
  const double t1 = t0 + tau;
  const Vector& u0 = state.u[0];
  const Vector& u1 = state.u[1];
  const Vector& v0 = state.v[0];
  const Vector& v1 = state.v[1];

  BlockSystem sys;
  sys.n = 4;
  sys.blocks = block_pattern(tau);
  sys.rhs.resize(4);
  sys.rhs[0] = Vector::Zero(sd.n_free());
  sys.rhs[1] = sd.collocation_rhs(t1, 0);
  sys.rhs[2] = m * (u0 + tau * (0.5 * v0 + v1 / 12.0));

  // Hermite quadrature of G = F - A_FD g over the slab (exact for cubics).
  auto g = [&](double t, int s) {
    Vector r = sd.load(t, s);
    if (sd.has_boundary_data()) r -= sd.boundary_stiffness(t, s);
    return r;
  };
  Vector r4 = m * v0 - tau * (a * (0.5 * u0 + u1 / 12.0));
  if (sd.has_forcing() || sd.has_boundary_data()) {
    r4 += tau * (0.5 * g(t0, 0) + (tau / 12.0) * g(t0, 1) + 0.5 * g(t1, 0) - (tau / 12.0) * g(t1, 1));
  }
  if (sd.has_boundary_data()) r4 -= sd.boundary_mass(t1, 1) - sd.boundary_mass(t0, 1);
  sys.rhs[3] = std::move(r4);
  return sys;
}

SlabCoeffs Gcc1Stepper::solve(const StepState& state, int index, double tau) {
  if (!(tau > 0.0)) throw Error(ErrorKind::InvalidInput, "step size must be positive");
  if (std::abs(state.tau - tau) > 1e-14 * tau) {
    throw Error(ErrorKind::InvalidInput, "state slots are scaled for a different step size");
  }
  const SemiDiscrete& sd = *sd_;
  const BlockSystem sys = assemble_block(state, tau);
  const Eigen::Index n = sd.n_free();
  Vector v2, v3, u2, u3;
  const auto strategy = solver_.options().strategy;
  if (strategy == SolverStrategy::Condensed || strategy == SolverStrategy::CondensedDirect) {
    const Vector guess = state.u[0] + state.u[1];
    u2 = solver_.solve_retained(sys, tau, &guess);
    // Recover the remaining unknowns from rows 2, 3 and 1.
    Vector rhs = sys.rhs[1] - sd.stiffness() * u2;
    v3 = tau * sd.mass_solver().solve(rhs);
    const Vector m3 = state.u[0] + tau * (0.5 * state.v[0] + state.v[1] / 12.0);
    u3 = 2.0 * (u2 + (tau / 12.0) * v3 - m3);
    v2 = u3 / tau;
  } else {
    const Vector x = solver_.solve_block(sys, tau);
    v2 = x.segment(0, n);
    v3 = x.segment(n, n);
    u2 = x.segment(2 * n, n);
    u3 = x.segment(3 * n, n);
  }
  SlabCoeffs slab;
  slab.index = index;
  slab.t_start = state.t;
  slab.tau = tau;
  slab.basis = TimeBasisKind::HermiteCubic;
  slab.u = detail::hermite_slots(sd, {state.u[0], state.u[1], u2, u3}, state.t, tau, 1, 0);
  slab.v = detail::hermite_slots(sd, {state.v[0], state.v[1], v2, v3}, state.t, tau, 1, 1);
  return slab;
}

StepState Gcc1Stepper::advance(const SlabCoeffs& slab, double next_tau) const {
  return detail::hermite_handoff(*sd_, slab, 1, next_tau);
}

}  // namespace wavegc
