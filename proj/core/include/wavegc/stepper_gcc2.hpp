#pragma once

#include "wavegc/stepper.hpp"

namespace wavegc {

/// C2 Galerkin-collocation scheme with quintic Hermite polynomials in time.
/// Block unknowns x = (u3, u4, v5, u5), using v3 = u4/tau and v4 = u5/tau;
/// the condensed system is posed for u4 and scaled to 14400 M + ...
class Gcc2Stepper final : public Stepper {
 public:
  Gcc2Stepper(const SemiDiscrete& sd, const SolverOptions& options);

  Scheme scheme() const override { return Scheme::Gcc2; }
  TimeBasisKind basis() const override { return TimeBasisKind::HermiteQuintic; }
  StepState init_state(double tau) const override;
  BlockSystem assemble_block(const StepState& state, double tau) const override;
  SlabCoeffs solve(const StepState& state, int index, double tau) override;
  StepState advance(const SlabCoeffs& slab, double next_tau) const override;

  static std::vector<BlockCoeff> block_pattern(double tau);
  /// Integrals of the quintic Hermite basis: (1/2, 1/10, 1/120, 1/2, -1/10, 1/120).
  /// Factor applied to both Galerkin rows of the block system.
  static constexpr double kGalerkinScale = 120.0;
  static constexpr double kWeights[6] = {0.5, 0.1, 1.0 / 120.0, 0.5, -0.1, 1.0 / 120.0};
};

}  // namespace wavegc
