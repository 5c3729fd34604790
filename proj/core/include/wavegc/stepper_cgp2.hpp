#pragma once

#include "wavegc/stepper.hpp"

namespace wavegc {

/// Continuous Galerkin-Petrov cGP(2): u, v quadratic in time (Lagrange nodes
/// 0, 1/2, 1 of the slab), continuous at t_{n-1}, tested with 1 and 2t-1.
/// Block unknowns x = (u1, u2, v1, v2); the condensed system is posed for u2.
class Cgp2Stepper final : public Stepper {
 public:
  Cgp2Stepper(const SemiDiscrete& sd, const SolverOptions& options);

  Scheme scheme() const override { return Scheme::Cgp2; }
  TimeBasisKind basis() const override { return TimeBasisKind::LagrangeQuadratic; }
  StepState init_state(double tau) const override;
  BlockSystem assemble_block(const StepState& state, double tau) const override;
  SlabCoeffs solve(const StepState& state, int index, double tau) override;
  StepState advance(const SlabCoeffs& slab, double next_tau) const override;

  static std::vector<BlockCoeff> block_pattern(double tau);
};

}  // namespace wavegc
