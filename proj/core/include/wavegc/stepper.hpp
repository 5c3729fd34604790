#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "wavegc/condense.hpp"
#include "wavegc/linalg.hpp"
#include "wavegc/semidiscrete.hpp"
#include "wavegc/timebasis.hpp"

namespace wavegc {

enum class Scheme { Gcc1, Gcc2, Cgp2 };

enum class SolverStrategy {
  Condensed,        // preconditioned CG on the condensed system
  CondensedDirect,  // condensed system solved by partial fractions
  BlockDirect,      // sparse LU of the full block system
  BlockGmres,       // GMRES on the block system, block-triangular preconditioner
};

std::string to_string(Scheme scheme);
std::string to_string(SolverStrategy strategy);
Scheme parse_scheme(const std::string& name);
SolverStrategy parse_strategy(const std::string& name);

struct SolverOptions {
  SolverStrategy strategy = SolverStrategy::Condensed;
  double rel_tol = 1e-10;
  int max_iter = 2000;
  int gmres_restart = 60;
  /// Scaling of the K_mu M^-1 K_mu preconditioner; 0 picks the scheme default.
  double mu = 0.0;
  InnerSolve inner = InnerSolve::Direct;
};

/// Discrete state at the left end t of the next slab, free DOFs only.
/// Hermite schemes keep l+1 scaled slots per field (slot s = tau^s d^s w(t));
/// cGP(2) keeps the values only.
struct StepState {
  double t = 0.0;
  double tau = 0.0;
  std::vector<Vector> u;
  std::vector<Vector> v;
};

/// Slab solver shared by the schemes: condensed CG, partial fractions, block
/// LU or block GMRES, with per-step-size caching of factorizations.
class SlabSolver {
 public:
  SlabSolver(const SemiDiscrete& sd, SolverOptions options, int retained, double leading, double default_mu,
             bool optimise_mu);

  /// Retained unknown of the condensed system (strategies Condensed*).
  Vector solve_retained(const BlockSystem& system, double tau, const Vector* guess);
  /// All unknowns, stacked (strategies Block*).
  Vector solve_block(const BlockSystem& system, double tau);

  const SolveReport& last_report() const { return report_; }
  const SolverOptions& options() const { return options_; }
  /// Condensation of the most recent system.
  const Condensation& condensation() const { return cache_.condensation; }
  double mu() const { return cache_.mu; }

 private:
  struct Cache {
    double tau = -1.0;
    std::vector<BlockCoeff> blocks;
    Condensation condensation;
    double mu = 0.0;
    std::optional<LinearOperator> precond;
    std::optional<PartialFractionSolver> partial;
    std::shared_ptr<const DirectSolver> block_lu;
    std::optional<LinearOperator> block_precond;
    std::shared_ptr<const SparseMatrix> block_matrix;
  };
  void refresh(const BlockSystem& system, double tau);

  const SemiDiscrete* sd_;
  SolverOptions options_;
  int retained_;
  double leading_;
  double default_mu_;
  bool optimise_mu_;
  Cache cache_;
  SolveReport report_;
  double lambda_max_ = -1.0;
};

/// mu minimising max r / min r over [0, x_max] for
/// r(x) = p(x) / (mu + beta x)^2, p normalised to p(0) = 1.
double optimise_mu(const Polynomial& p, double beta, double x_max, double fallback);

/// Largest eigenvalue of M^-1 A by power iteration.
double estimate_lambda_max(const SemiDiscrete& sd, int iterations = 60);

/// Time-stepping interface common to GCC1(3), GCC2(5) and cGP(2).
class Stepper {
 public:
  virtual ~Stepper() = default;
  virtual Scheme scheme() const = 0;
  virtual TimeBasisKind basis() const = 0;
  /// Initial state at t = 0 scaled for a first step of size tau.
  virtual StepState init_state(double tau) const = 0;
  virtual BlockSystem assemble_block(const StepState& state, double tau) const = 0;
  /// Solves slab `index` starting at state.t; state must already be scaled for tau.
  virtual SlabCoeffs solve(const StepState& state, int index, double tau) = 0;
  /// Hand-off to the next slab with step next_tau.
  virtual StepState advance(const SlabCoeffs& slab, double next_tau) const = 0;

  const SolveReport& last_report() const { return solver_.last_report(); }
  const SlabSolver& solver() const { return solver_; }
  const SemiDiscrete& semidiscrete() const { return *sd_; }

 protected:
  Stepper(const SemiDiscrete& sd, SlabSolver solver) : sd_(&sd), solver_(std::move(solver)) {}
  const SemiDiscrete* sd_;
  SlabSolver solver_;
};

std::unique_ptr<Stepper> make_stepper(Scheme scheme, const SemiDiscrete& sd, const SolverOptions& options);

namespace detail {
/// Rescales slot s by (next_tau / tau)^s.
StepState hermite_handoff(const SemiDiscrete& sd, const SlabCoeffs& slab, int l, double next_tau);
/// Full-length Hermite slots: free values plus the boundary lifting.
std::vector<Vector> hermite_slots(const SemiDiscrete& sd, const std::vector<Vector>& free_slots, double t0, double tau,
                                  int l, int derivative_offset);
}  // namespace detail

}  // namespace wavegc
