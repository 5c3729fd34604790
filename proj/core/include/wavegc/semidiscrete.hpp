#pragma once

#include <memory>

#include "wavegc/fespace.hpp"
#include "wavegc/linalg.hpp"
#include "wavegc/problem.hpp"

namespace wavegc {

/// Method-of-lines system on the free DOFs:
///   M u'' + A u = F(t) - M_FD g''(t) - A_FD g(t),
/// where g holds the Dirichlet nodal values of the boundary data and F is the
/// mass matrix applied to the nodal interpolant of f.
class SemiDiscrete {
 public:
  SemiDiscrete(const WaveProblem& problem, const FeSpace& space, int quadrature_points = 0);

  const WaveProblem& problem() const { return *problem_; }
  const FeSpace& space() const { return *space_; }
  int n_dofs() const { return space_->n_dofs(); }
  int n_free() const { return static_cast<int>(space_->free_dofs().size()); }

  /// Free-free blocks.
  const SparseMatrix& mass() const { return m_ff_; }
  const SparseMatrix& stiffness() const { return a_ff_; }
  std::shared_ptr<const SparseMatrix> mass_ptr() const { return mass_ptr_; }
  std::shared_ptr<const SparseMatrix> stiffness_ptr() const { return stiff_ptr_; }
  /// Cached Cholesky factorization of the free-free mass matrix.
  const SpdSolver& mass_solver() const { return *mass_solver_; }

  bool has_forcing() const { return problem_->has_forcing; }
  bool has_boundary_data() const { return problem_->has_boundary_data && !space_->dirichlet_dofs().empty(); }

  /// M_{F,*} I_h d^s f(t).
  Vector load(double t, int s) const;
  /// M_FD d^s g(t) and A_FD d^s g(t).
  Vector boundary_mass(double t, int s) const;
  Vector boundary_stiffness(double t, int s) const;
  /// load(t,s) - boundary_mass(t,s+2) - boundary_stiffness(t,s): the right-hand
  /// side of the s-th time derivative of the semi-discrete equation.
  Vector collocation_rhs(double t, int s) const;

  /// d^s g(t) at the Dirichlet DOFs.
  Vector dirichlet_values(double t, int s) const;
  Vector restrict_free(const Vector& full) const;
  /// Full-length vector from free values and Dirichlet values.
  Vector extend(const Vector& free_values, const Vector& dirichlet_values) const;
  /// Nodal interpolant restricted to the free DOFs.
  Vector interpolate_free(const PointField& func) const;

 private:
  const WaveProblem* problem_;
  const FeSpace* space_;
  SparseMatrix m_full_rows_;  // M_{F,*}
  SparseMatrix m_ff_;
  SparseMatrix a_ff_;
  SparseMatrix m_fd_;
  SparseMatrix a_fd_;
  std::shared_ptr<const SparseMatrix> mass_ptr_;
  std::shared_ptr<const SparseMatrix> stiff_ptr_;
  std::shared_ptr<const SpdSolver> mass_solver_;
};

}  // namespace wavegc
