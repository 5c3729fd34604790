#pragma once

#include "wavegc/stepper.hpp"

namespace wavegc {

/// C1 Galerkin-collocation scheme with cubic Hermite polynomials in time.
/// Block unknowns x = (v2, v3, u2, u3); the condensed system is posed for u2.
class Gcc1Stepper final : public Stepper {
 public:
  Gcc1Stepper(const SemiDiscrete& sd, const SolverOptions& options);

  Scheme scheme() const override { return Scheme::Gcc1; }
  TimeBasisKind basis() const override { return TimeBasisKind::HermiteCubic; }
  StepState init_state(double tau) const override;
  BlockSystem assemble_block(const StepState& state, double tau) const override;
  SlabCoeffs solve(const StepState& state, int index, double tau) override;
  StepState advance(const SlabCoeffs& slab, double next_tau) const override;

  /// Block coefficients alone (rhs left empty).
  static std::vector<BlockCoeff> block_pattern(double tau);
};

}  // namespace wavegc
