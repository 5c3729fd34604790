#pragma once

#include <complex>
#include <memory>
#include <vector>

#include "wavegc/linalg.hpp"

namespace wavegc {

/// Coefficients c[m] of sum_m c[m] z^m.
using Polynomial = std::vector<double>;

Polynomial poly_add(const Polynomial& a, const Polynomial& b);
Polynomial poly_mul(const Polynomial& a, const Polynomial& b);
Polynomial poly_scale(const Polynomial& a, double s);
double poly_eval(const Polynomial& a, double z);
std::complex<double> poly_eval(const Polynomial& a, std::complex<double> z);

/// Block alpha*M + beta*A.
struct BlockCoeff {
  double m = 0.0;
  double a = 0.0;
};

/// n x n block system whose blocks are all combinations of M and A.
struct BlockSystem {
  int n = 0;
  std::vector<BlockCoeff> blocks;  // row-major, n*n
  std::vector<Vector> rhs;         // one vector per block row

  const BlockCoeff& at(int row, int col) const { return blocks[static_cast<std::size_t>(row * n + col)]; }
};

/// Assembles the (nJ x nJ) sparse matrix of the block system.
SparseMatrix assemble_block_matrix(const BlockSystem& system, const SparseMatrix& mass, const SparseMatrix& stiffness);
Vector stack_rhs(const BlockSystem& system);

/// Elimination of all unknowns but one. Left-multiplying every block row by
/// M^-1 turns alpha*M + beta*A into alpha + beta*K with K = M^-1 A; all such
/// blocks commute, so Cramer's rule over R[K] gives
///   det(K) x_e = sum_j C_{j,e}(K) M^-1 r_j.
/// Multiplying by M leaves the symmetric operator
///   S_r = det[0] M + sum_{m>=1} det[m] A (M^-1 A)^{m-1}
/// and the right-hand side b_r = sum_j sum_m cof[j][m] (A M^-1)^m r_j.
struct Condensation {
  int eliminated_to = 0;          // index e of the retained unknown
  Polynomial det;                 // scaled so det[0] equals the requested value
  std::vector<Polynomial> cof;    // cof[j] multiplies row j
};

Condensation condense(const std::vector<BlockCoeff>& blocks, int n, int retained, double leading = 1.0);

/// Applies S_r of a condensation without forming M^-1 (Horner in M^-1 A).
class CondensedOperator {
 public:
  CondensedOperator(Polynomial det, std::shared_ptr<const SparseMatrix> mass,
                    std::shared_ptr<const SparseMatrix> stiffness, const SpdSolver* mass_solver);
  void apply(const Vector& x, Vector& y) const;
  LinearOperator as_operator() const;

 private:
  Polynomial det_;
  std::shared_ptr<const SparseMatrix> mass_;
  std::shared_ptr<const SparseMatrix> stiffness_;
  const SpdSolver* mass_solver_;
};

Vector condensed_rhs(const Condensation& c, const std::vector<Vector>& rhs, const SparseMatrix& stiffness,
                     const SpdSolver& mass_solver);

/// Dense S_r for small oracles.
Eigen::MatrixXd dense_condensed_matrix(const Polynomial& det, const Eigen::MatrixXd& mass,
                                       const Eigen::MatrixXd& stiffness);

/// Direct solve of S_r x = b by partial fractions of det: with roots z_r,
/// det(K)^-1 M^-1 = sum_r (A - z_r M)^-1 / det'(z_r). Real roots use a real
/// factorization, each complex-conjugate pair one complex factorization.
class PartialFractionSolver {
 public:
  PartialFractionSolver(const Polynomial& det, const SparseMatrix& mass, const SparseMatrix& stiffness);
  Vector solve(const Vector& b) const;
  const std::vector<std::complex<double>>& roots() const { return roots_; }

 private:
  struct RealTerm {
    double weight;
    LinearOperator solver;  // (A - z M)^-1
  };
  struct ComplexTerm {
    std::complex<double> weight;
    std::shared_ptr<const ComplexSolver> solver;
  };
  std::vector<std::complex<double>> roots_;
  std::vector<RealTerm> real_terms_;
  std::vector<ComplexTerm> complex_terms_;
};

/// Roots of a real polynomial (companion-matrix eigenvalues).
std::vector<std::complex<double>> poly_roots(const Polynomial& p);

}  // namespace wavegc
