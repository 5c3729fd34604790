#pragma once

#include <complex>
#include <functional>
#include <memory>

#include "wavegc/fespace.hpp"

namespace wavegc {

using ComplexVector = Eigen::VectorXcd;
using ComplexSparseMatrix = Eigen::SparseMatrix<std::complex<double>, Eigen::ColMajor, int>;

/// y = Op(x) on vectors of a fixed dimension. Matrix-backed or composite.
class LinearOperator {
 public:
  using ApplyFn = std::function<void(const Vector& x, Vector& y)>;

  LinearOperator() = default;
  LinearOperator(Eigen::Index dim, ApplyFn apply) : dim_(dim), apply_(std::move(apply)) {}

  static LinearOperator identity(Eigen::Index dim);
  /// Keeps a shared reference to the matrix.
  static LinearOperator from_matrix(std::shared_ptr<const SparseMatrix> matrix);
  static LinearOperator from_matrix(const SparseMatrix& matrix);

  Eigen::Index dim() const { return dim_; }
  void apply(const Vector& x, Vector& y) const { apply_(x, y); }
  Vector operator()(const Vector& x) const {
    Vector y(dim_);
    apply_(x, y);
    return y;
  }

 private:
  Eigen::Index dim_ = 0;
  ApplyFn apply_;
};

struct SolveReport {
  int iterations = 0;
  double relative_residual = 0.0;
  bool converged = false;
};

struct SolveResult {
  Vector x;
  SolveReport report;
};

/// Preconditioned conjugate gradients. `precond` applies an approximation of
/// op^{-1}. Stops when ||b - op(x)|| <= rel_tol ||b||; a non-converged report
/// is returned (not thrown) when max_iter is exhausted.
SolveResult cg_solve(const LinearOperator& op, const Vector& b, const LinearOperator& precond,
                     double rel_tol, int max_iter, const Vector* initial_guess = nullptr);

/// Restarted GMRES(m) with right preconditioning, so the monitored residual
/// is the true residual ||b - op(x)||.
SolveResult gmres_solve(const LinearOperator& op, const Vector& b, const LinearOperator& precond,
                        double rel_tol, int restart, int max_iter);

/// Sparse LU of a square non-symmetric matrix, factorized once and reused.
class DirectSolver {
 public:
  explicit DirectSolver(const SparseMatrix& matrix);
  ~DirectSolver();
  DirectSolver(DirectSolver&&) noexcept;
  DirectSolver& operator=(DirectSolver&&) noexcept;

  Eigen::Index dim() const { return dim_; }
  Vector solve(const Vector& b) const;
  LinearOperator as_operator() const;

 private:
  struct Impl;
  std::shared_ptr<Impl> impl_;
  Eigen::Index dim_ = 0;
};

Vector direct_solve(const SparseMatrix& matrix, const Vector& b);

/// Sparse Cholesky of a symmetric positive definite matrix.
class SpdSolver {
 public:
  explicit SpdSolver(const SparseMatrix& matrix);
  ~SpdSolver();
  SpdSolver(SpdSolver&&) noexcept;
  SpdSolver& operator=(SpdSolver&&) noexcept;

  Eigen::Index dim() const { return dim_; }
  Vector solve(const Vector& b) const;
  void solve_in_place(Vector& x) const;
  LinearOperator as_operator() const;

 private:
  struct Impl;
  std::shared_ptr<Impl> impl_;
  Eigen::Index dim_ = 0;
};

/// Sparse LU of a complex matrix (used for shifted pencils A - z M).
class ComplexSolver {
 public:
  explicit ComplexSolver(const ComplexSparseMatrix& matrix);
  ~ComplexSolver();
  ComplexSolver(ComplexSolver&&) noexcept;
  ComplexSolver& operator=(ComplexSolver&&) noexcept;

  ComplexVector solve(const ComplexVector& b) const;

 private:
  struct Impl;
  std::shared_ptr<Impl> impl_;
};

/// alpha*M + beta*A with the union sparsity pattern.
SparseMatrix linear_combination(double alpha, const SparseMatrix& m, double beta, const SparseMatrix& a);

/// How the inner K_mu (and M) systems of the preconditioner are solved.
enum class InnerSolve { Direct, Cg };

inline constexpr double kInnerTolerance = 1e-12;

/// Default scaling of the K_mu M^-1 K_mu preconditioner, sqrt(11/2).
double default_mu();

/// Preconditioner for symmetric operators built from K = alpha*M + beta*A:
/// applies P^{-1} r = K^{-1} (M (K^{-1} r)) for P = K M^{-1} K.
LinearOperator make_kmk_preconditioner(const SparseMatrix& mass, const SparseMatrix& stiffness, double alpha,
                                       double beta, InnerSolve inner = InnerSolve::Direct);

/// P = K_mu M^{-1} K_mu with K_mu = mu*M + (tau^2/4)*A.
LinearOperator make_precond_P(const SparseMatrix& mass, const SparseMatrix& stiffness, double tau,
                              double mu, InnerSolve inner = InnerSolve::Direct);

}  // namespace wavegc
