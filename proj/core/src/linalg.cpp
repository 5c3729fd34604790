#include "wavegc/linalg.hpp"

#include <cmath>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/SparseCholesky>
#include <Eigen/SparseLU>

#include "wavegc/error.hpp"

namespace wavegc {

using ColMatrix = Eigen::SparseMatrix<double, Eigen::ColMajor, int>;

LinearOperator LinearOperator::identity(Eigen::Index dim) {
  return LinearOperator(dim, [](const Vector& x, Vector& y) { y = x; });
}

LinearOperator LinearOperator::from_matrix(std::shared_ptr<const SparseMatrix> matrix) {
  const Eigen::Index dim = matrix->rows();
  return LinearOperator(dim, [m = std::move(matrix)](const Vector& x, Vector& y) { y.noalias() = *m * x; });
}

LinearOperator LinearOperator::from_matrix(const SparseMatrix& matrix) {
  return from_matrix(std::make_shared<const SparseMatrix>(matrix));
}

namespace {

void check_finite(double value, const char* where) {
  if (!std::isfinite(value)) {
    throw Error(ErrorKind::NumericalBreakdown, std::string("non-finite residual in ") + where);
  }
}

}  // namespace

SolveResult cg_solve(const LinearOperator& op, const Vector& b, const LinearOperator& precond, double rel_tol,
                     int max_iter, const Vector* initial_guess) {
  const Eigen::Index n = b.size();
  SolveResult result;
  result.x = initial_guess ? *initial_guess : Vector::Zero(n);
  const double bnorm = b.norm();
  check_finite(bnorm, "cg (rhs)");
  if (bnorm == 0.0) {
    result.x.setZero();
    result.report = {0, 0.0, true};
    return result;
  }

  Vector r(n);
  Vector q(n);
  Vector z(n);
  op.apply(result.x, q);
  r = b - q;
  double res = r.norm() / bnorm;
  check_finite(res, "cg");
  if (res <= rel_tol) {
    result.report = {0, res, true};
    return result;
  }
  precond.apply(r, z);
  Vector p = z;
  double rz = r.dot(z);

  int it = 0;
  while (it < max_iter) {
    ++it;
    op.apply(p, q);
    const double pq = p.dot(q);
    check_finite(pq, "cg");
    if (pq <= 0.0) {
      throw Error(ErrorKind::NumericalBreakdown, "cg: operator not positive definite on the Krylov space");
    }
    const double alpha = rz / pq;
    result.x.noalias() += alpha * p;
    r.noalias() -= alpha * q;
    res = r.norm() / bnorm;
    check_finite(res, "cg");
    if (res <= rel_tol) {
      // Confirm with the true residual; the recursive one can drift.
      op.apply(result.x, q);
      r = b - q;
      res = r.norm() / bnorm;
      if (res <= rel_tol) {
        result.report = {it, res, true};
        return result;
      }
      precond.apply(r, z);
      p = z;
      rz = r.dot(z);
      continue;
    }
    precond.apply(r, z);
    const double rz_new = r.dot(z);
    check_finite(rz_new, "cg (preconditioner)");
    p = z + (rz_new / rz) * p;
    rz = rz_new;
  }
  op.apply(result.x, q);
  res = (b - q).norm() / bnorm;
  result.report = {it, res, res <= rel_tol};
  return result;
}

SolveResult gmres_solve(const LinearOperator& op, const Vector& b, const LinearOperator& precond, double rel_tol,
                        int restart, int max_iter) {
  const Eigen::Index n = b.size();
  if (restart < 1) throw Error(ErrorKind::InvalidInput, "gmres restart must be >= 1");
  SolveResult result;
  result.x = Vector::Zero(n);
  const double bnorm = b.norm();
  check_finite(bnorm, "gmres (rhs)");
  if (bnorm == 0.0) {
    result.report = {0, 0.0, true};
    return result;
  }

  const int m = restart;
  Eigen::MatrixXd basis(n, m + 1);
  Eigen::MatrixXd hess = Eigen::MatrixXd::Zero(m + 1, m);
  Eigen::VectorXd cs(m);
  Eigen::VectorXd sn(m);
  Eigen::VectorXd g(m + 1);
  Vector w(n);
  Vector z(n);
  Vector r = b;
  double beta = bnorm;
  int it = 0;

  while (true) {
    basis.col(0) = r / beta;
    g.setZero();
    g[0] = beta;
    hess.setZero();
    int j = 0;
    double res = beta / bnorm;
    for (; j < m && it < max_iter; ++j) {
      ++it;
      precond.apply(basis.col(j), z);
      op.apply(z, w);
      for (int i = 0; i <= j; ++i) {
        hess(i, j) = w.dot(basis.col(i));
        w.noalias() -= hess(i, j) * basis.col(i);
      }
      hess(j + 1, j) = w.norm();
      check_finite(hess(j + 1, j), "gmres");
      if (hess(j + 1, j) > 0.0) basis.col(j + 1) = w / hess(j + 1, j);
      for (int i = 0; i < j; ++i) {
        const double t = cs[i] * hess(i, j) + sn[i] * hess(i + 1, j);
        hess(i + 1, j) = -sn[i] * hess(i, j) + cs[i] * hess(i + 1, j);
        hess(i, j) = t;
      }
      const double denom = std::hypot(hess(j, j), hess(j + 1, j));
      if (denom == 0.0) {
        throw Error(ErrorKind::NumericalBreakdown, "gmres: singular Hessenberg matrix");
      }
      cs[j] = hess(j, j) / denom;
      sn[j] = hess(j + 1, j) / denom;
      hess(j, j) = denom;
      hess(j + 1, j) = 0.0;
      g[j + 1] = -sn[j] * g[j];
      g[j] = cs[j] * g[j];
      res = std::abs(g[j + 1]) / bnorm;
      check_finite(res, "gmres");
      if (res <= rel_tol) {
        ++j;
        break;
      }
    }
    if (j > 0) {
      const Eigen::VectorXd y =
          hess.topLeftCorner(j, j).triangularView<Eigen::Upper>().solve(g.head(j));
      precond.apply(basis.leftCols(j) * y, z);
      result.x += z;
    }
    op.apply(result.x, w);
    r = b - w;
    beta = r.norm();
    const double true_res = beta / bnorm;
    check_finite(true_res, "gmres");
    if (true_res <= rel_tol || it >= max_iter) {
      result.report = {it, true_res, true_res <= rel_tol};
      return result;
    }
  }
}

struct DirectSolver::Impl {
  Eigen::SparseLU<ColMatrix, Eigen::COLAMDOrdering<int>> lu;
};

DirectSolver::DirectSolver(const SparseMatrix& matrix) : impl_(std::make_shared<Impl>()), dim_(matrix.rows()) {
  if (matrix.rows() != matrix.cols()) throw Error(ErrorKind::InvalidInput, "direct solve needs a square matrix");
  ColMatrix col = matrix;
  col.makeCompressed();
  impl_->lu.analyzePattern(col);
  impl_->lu.factorize(col);
  if (impl_->lu.info() != Eigen::Success) {
    throw Error(ErrorKind::SingularMatrix, "sparse LU failed: " + impl_->lu.lastErrorMessage());
  }
}

DirectSolver::~DirectSolver() = default;
DirectSolver::DirectSolver(DirectSolver&&) noexcept = default;
DirectSolver& DirectSolver::operator=(DirectSolver&&) noexcept = default;

Vector DirectSolver::solve(const Vector& b) const {
  Vector x = impl_->lu.solve(b);
  if (impl_->lu.info() != Eigen::Success || !x.allFinite()) {
    throw Error(ErrorKind::SingularMatrix, "sparse LU solve failed");
  }
  return x;
}

LinearOperator DirectSolver::as_operator() const {
  return LinearOperator(dim_, [impl = impl_](const Vector& x, Vector& y) { y = impl->lu.solve(x); });
}

Vector direct_solve(const SparseMatrix& matrix, const Vector& b) { return DirectSolver(matrix).solve(b); }

struct SpdSolver::Impl {
  Eigen::SimplicialLLT<ColMatrix, Eigen::Lower, Eigen::AMDOrdering<int>> llt;
};

SpdSolver::SpdSolver(const SparseMatrix& matrix) : impl_(std::make_shared<Impl>()), dim_(matrix.rows()) {
  ColMatrix col = matrix;
  impl_->llt.compute(col);
  if (impl_->llt.info() != Eigen::Success) {
    throw Error(ErrorKind::SingularMatrix, "Cholesky factorization failed (matrix not SPD)");
  }
}

SpdSolver::~SpdSolver() = default;
SpdSolver::SpdSolver(SpdSolver&&) noexcept = default;
SpdSolver& SpdSolver::operator=(SpdSolver&&) noexcept = default;

Vector SpdSolver::solve(const Vector& b) const { return impl_->llt.solve(b); }

void SpdSolver::solve_in_place(Vector& x) const { x = impl_->llt.solve(x); }

LinearOperator SpdSolver::as_operator() const {
  return LinearOperator(dim_, [impl = impl_](const Vector& x, Vector& y) { y = impl->llt.solve(x); });
}

struct ComplexSolver::Impl {
  Eigen::SparseLU<ComplexSparseMatrix, Eigen::COLAMDOrdering<int>> lu;
};

ComplexSolver::ComplexSolver(const ComplexSparseMatrix& matrix) : impl_(std::make_shared<Impl>()) {
  impl_->lu.analyzePattern(matrix);
  impl_->lu.factorize(matrix);
  if (impl_->lu.info() != Eigen::Success) {
    throw Error(ErrorKind::SingularMatrix, "complex sparse LU failed: " + impl_->lu.lastErrorMessage());
  }
}

ComplexSolver::~ComplexSolver() = default;
ComplexSolver::ComplexSolver(ComplexSolver&&) noexcept = default;
ComplexSolver& ComplexSolver::operator=(ComplexSolver&&) noexcept = default;

ComplexVector ComplexSolver::solve(const ComplexVector& b) const { return impl_->lu.solve(b); }

SparseMatrix linear_combination(double alpha, const SparseMatrix& m, double beta, const SparseMatrix& a) {
  SparseMatrix out = alpha * m + beta * a;
  out.makeCompressed();
  return out;
}

double default_mu() { return std::sqrt(11.0 / 2.0); }

LinearOperator make_kmk_preconditioner(const SparseMatrix& mass, const SparseMatrix& stiffness, double alpha,
                                       double beta, InnerSolve inner) {
  if (!(alpha > 0.0) || beta < 0.0) {
    throw Error(ErrorKind::InvalidInput, "preconditioner needs alpha > 0 and beta >= 0");
  }
  auto m = std::make_shared<const SparseMatrix>(mass);
  auto k = std::make_shared<const SparseMatrix>(linear_combination(alpha, mass, beta, stiffness));
  const Eigen::Index n = mass.rows();
  if (inner == InnerSolve::Direct) {
    auto solver = std::make_shared<const SpdSolver>(*k);
    return LinearOperator(n, [m, solver](const Vector& r, Vector& y) {
      Vector t = solver->solve(r);
      y = solver->solve(*m * t);
    });
  }
  // Jacobi-preconditioned inner CG on K.
  const Vector inv_diag = k->diagonal().cwiseInverse();
  const LinearOperator kop = LinearOperator::from_matrix(k);
  const LinearOperator jacobi(n, [inv_diag](const Vector& x, Vector& y) { y = inv_diag.cwiseProduct(x); });
  return LinearOperator(n, [m, kop, jacobi, n](const Vector& r, Vector& y) {
    const int max_inner = static_cast<int>(std::max<Eigen::Index>(1000, 10 * n));
    auto first = cg_solve(kop, r, jacobi, kInnerTolerance, max_inner);
    if (!first.report.converged) {
      throw Error(ErrorKind::PreconditionerFailure, "inner K_mu solve did not converge");
    }
    auto second = cg_solve(kop, *m * first.x, jacobi, kInnerTolerance, max_inner);
    if (!second.report.converged) {
      throw Error(ErrorKind::PreconditionerFailure, "inner K_mu solve did not converge");
    }
    y = std::move(second.x);
  });
}

LinearOperator make_precond_P(const SparseMatrix& mass, const SparseMatrix& stiffness, double tau, double mu,
                              InnerSolve inner) {
  if (!(tau > 0.0) || !(mu > 0.0)) throw Error(ErrorKind::InvalidInput, "preconditioner needs tau > 0, mu > 0");
  return make_kmk_preconditioner(mass, stiffness, mu, 0.25 * tau * tau, inner);
}

}  // namespace wavegc
