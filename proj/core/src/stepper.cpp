#include "wavegc/stepper.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "wavegc/error.hpp"
#include "wavegc/stepper_cgp2.hpp"
#include "wavegc/stepper_gcc1.hpp"
#include "wavegc/stepper_gcc2.hpp"

namespace wavegc {

std::string to_string(Scheme scheme) {
  switch (scheme) {
    case Scheme::Gcc1: return "gcc1";
    case Scheme::Gcc2: return "gcc2";
    case Scheme::Cgp2: return "cgp2";
  }
  return "?";
}

std::string to_string(SolverStrategy strategy) {
  switch (strategy) {
    case SolverStrategy::Condensed: return "condensed";
    case SolverStrategy::CondensedDirect: return "condensed-direct";
    case SolverStrategy::BlockDirect: return "block-direct";
    case SolverStrategy::BlockGmres: return "block-gmres";
  }
  return "?";
}

Scheme parse_scheme(const std::string& name) {
  if (name == "gcc1") return Scheme::Gcc1;
  if (name == "gcc2") return Scheme::Gcc2;
  if (name == "cgp2") return Scheme::Cgp2;
  throw Error(ErrorKind::InvalidInput, "unknown scheme '" + name + "' (expected gcc1, gcc2 or cgp2)");
}

SolverStrategy parse_strategy(const std::string& name) {
  if (name == "condensed") return SolverStrategy::Condensed;
  if (name == "condensed-direct") return SolverStrategy::CondensedDirect;
  if (name == "block-direct") return SolverStrategy::BlockDirect;
  if (name == "block-gmres") return SolverStrategy::BlockGmres;
  throw Error(ErrorKind::InvalidInput, "unknown solver '" + name +
                                           "' (expected condensed, condensed-direct, block-direct or block-gmres)");
}

double optimise_mu(const Polynomial& p, double beta, double x_max, double fallback) {
  if (!(x_max > 0.0) || !std::isfinite(x_max) || p.empty() || !(p[0] > 0.0)) return fallback;
  std::vector<double> xs{0.0};
  const int samples = 400;
  for (int i = 0; i < samples; ++i) xs.push_back(x_max * std::pow(10.0, -8.0 + 8.0 * i / (samples - 1)));
  std::vector<double> px;
  for (double x : xs) px.push_back(poly_eval(p, x) / p[0]);
  auto kappa = [&](double log_mu) {
    const double mu = std::exp(log_mu);
    double lo = std::numeric_limits<double>::infinity();
    double hi = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
      const double d = mu + beta * xs[i];
      const double r = px[i] / (d * d);
      lo = std::min(lo, r);
      hi = std::max(hi, r);
    }
    return hi / lo;
  };
  const double a = std::log(1e-3);
  const double b = std::log(1e3);
  const int grid = 120;
  int best = 0;
  double best_val = std::numeric_limits<double>::infinity();
  for (int i = 0; i <= grid; ++i) {
    const double val = kappa(a + (b - a) * i / grid);
    if (val < best_val) {
      best_val = val;
      best = i;
    }
  }
  double lo = a + (b - a) * std::max(0, best - 1) / grid;
  double hi = a + (b - a) * std::min(grid, best + 1) / grid;
  const double g = 0.5 * (std::sqrt(5.0) - 1.0);
  for (int it = 0; it < 60; ++it) {
    const double m1 = hi - g * (hi - lo);
    const double m2 = lo + g * (hi - lo);
    if (kappa(m1) < kappa(m2)) hi = m2;
    else lo = m1;
  }
  const double mu = std::exp(0.5 * (lo + hi));
  return std::isfinite(mu) && mu > 0.0 ? mu : fallback;
}

double estimate_lambda_max(const SemiDiscrete& sd, int iterations) {
  const int n = sd.n_free();
  if (n == 0) return 0.0;
  Vector x(n);
  for (int i = 0; i < n; ++i) x[i] = 1.0 + 0.5 * std::sin(1.0 + 7.3 * i);
  double lambda = 0.0;
  for (int it = 0; it < iterations; ++it) {
    Vector ax = sd.stiffness() * x;
    const double num = x.dot(ax);
    const double den = x.dot(sd.mass() * x);
    lambda = num / den;
    Vector y = sd.mass_solver().solve(ax);
    const double norm = y.norm();
    if (!(norm > 0.0)) break;
    x = y / norm;
  }
  return lambda;
}

SlabSolver::SlabSolver(const SemiDiscrete& sd, SolverOptions options, int retained, double leading,
                       double default_mu, bool optimise)
    : sd_(&sd),
      options_(options),
      retained_(retained),
      leading_(leading),
      default_mu_(default_mu),
      optimise_mu_(optimise) {}

namespace {

bool same_blocks(const std::vector<BlockCoeff>& a, const std::vector<BlockCoeff>& b) {
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i)
    if (a[i].m != b[i].m || a[i].a != b[i].a) return false;
  return true;
}

LinearOperator block_inverse(const BlockCoeff& b, const SparseMatrix& mass, const SparseMatrix& stiffness) {
  if (b.m == 0.0 && b.a == 0.0) throw Error(ErrorKind::SingularMatrix, "zero diagonal block in block preconditioner");
  if (b.m >= 0.0 && b.a >= 0.0) return SpdSolver(linear_combination(b.m, mass, b.a, stiffness)).as_operator();
  if (b.m <= 0.0 && b.a <= 0.0) {
    LinearOperator inner = SpdSolver(linear_combination(-b.m, mass, -b.a, stiffness)).as_operator();
    return LinearOperator(mass.rows(), [inner](const Vector& x, Vector& y) {
      inner.apply(x, y);
      y = -y;
    });
  }
  return DirectSolver(linear_combination(b.m, mass, b.a, stiffness)).as_operator();
}

// Block lower-triangular (forward Gauss-Seidel) preconditioner.
LinearOperator block_triangular_preconditioner(const BlockSystem& system, std::shared_ptr<const SparseMatrix> mass,
                                               std::shared_ptr<const SparseMatrix> stiffness) {
  const int n = system.n;
  const Eigen::Index j = mass->rows();
  std::vector<LinearOperator> diag;
  for (int i = 0; i < n; ++i) diag.push_back(block_inverse(system.at(i, i), *mass, *stiffness));
  std::vector<BlockCoeff> blocks = system.blocks;
  return LinearOperator(n * j, [=](const Vector& r, Vector& z) {
    z.resize(n * j);
    Vector acc(j);
    Vector xi(j);
    for (int i = 0; i < n; ++i) {
      acc = r.segment(i * j, j);
      for (int c = 0; c < i; ++c) {
        const BlockCoeff& b = blocks[static_cast<std::size_t>(i * n + c)];
        if (b.m != 0.0) acc.noalias() -= b.m * (*mass * z.segment(c * j, j));
        if (b.a != 0.0) acc.noalias() -= b.a * (*stiffness * z.segment(c * j, j));
      }
      diag[i].apply(acc, xi);
      z.segment(i * j, j) = xi;
    }
  });
}

}  // namespace

void SlabSolver::refresh(const BlockSystem& system, double tau) {
  if (tau == cache_.tau && same_blocks(system.blocks, cache_.blocks)) return;
  Cache c;
  c.tau = tau;
  c.blocks = system.blocks;
  const auto strategy = options_.strategy;
  if (strategy == SolverStrategy::Condensed || strategy == SolverStrategy::CondensedDirect) {
    c.condensation = condense(system.blocks, system.n, retained_, leading_);
  }
  if (strategy == SolverStrategy::Condensed) {
    const Polynomial& p = c.condensation.det;
    const double c0 = p[0];
    const double beta = p.size() > 2 && p[2] > 0.0 ? 3.0 * std::sqrt(p[2] / c0) : (p.size() > 1 ? p[1] / c0 : 0.0);
    c.mu = default_mu_;
    if (options_.mu > 0.0) {
      c.mu = options_.mu;
    } else if (optimise_mu_) {
      if (lambda_max_ < 0.0) lambda_max_ = 1.1 * estimate_lambda_max(*sd_);
      c.mu = optimise_mu(poly_scale(p, 1.0 / c0), beta, lambda_max_, default_mu_);
    }
    c.precond = make_kmk_preconditioner(sd_->mass(), sd_->stiffness(), c.mu, beta, options_.inner);
  } else if (strategy == SolverStrategy::CondensedDirect) {
    c.partial.emplace(c.condensation.det, sd_->mass(), sd_->stiffness());
  } else {
    c.block_matrix = std::make_shared<const SparseMatrix>(assemble_block_matrix(system, sd_->mass(), sd_->stiffness()));
    if (strategy == SolverStrategy::BlockDirect) {
      c.block_lu = std::make_shared<const DirectSolver>(*c.block_matrix);
    } else {
      c.block_precond = block_triangular_preconditioner(system, sd_->mass_ptr(), sd_->stiffness_ptr());
    }
  }
  cache_ = std::move(c);
}

Vector SlabSolver::solve_retained(const BlockSystem& system, double tau, const Vector* guess) {
  const auto strategy = options_.strategy;
  if (strategy != SolverStrategy::Condensed && strategy != SolverStrategy::CondensedDirect) {
    throw Error(ErrorKind::InvalidInput, "solve_retained needs a condensed strategy");
  }
  refresh(system, tau);
  const Vector b = condensed_rhs(cache_.condensation, system.rhs, sd_->stiffness(), sd_->mass_solver());
  CondensedOperator op(cache_.condensation.det, sd_->mass_ptr(), sd_->stiffness_ptr(), &sd_->mass_solver());
  if (strategy == SolverStrategy::Condensed) {
    SolveResult res = cg_solve(op.as_operator(), b, *cache_.precond, options_.rel_tol, options_.max_iter, guess);
    report_ = res.report;
    if (!res.report.converged) {
      throw Error(ErrorKind::SolverFailure, "condensed CG did not converge: " + std::to_string(res.report.iterations) +
                                                " iterations, relative residual " +
                                                std::to_string(res.report.relative_residual));
    }
    return std::move(res.x);
  }
  Vector y = cache_.partial->solve(b);
  Vector sy(y.size());
  op.apply(y, sy);
  const double bn = b.norm();
  const double res = bn > 0.0 ? (b - sy).norm() / bn : (sy.norm() == 0.0 ? 0.0 : 1.0);
  report_ = {1, res, res <= options_.rel_tol};
  return y;
}

Vector SlabSolver::solve_block(const BlockSystem& system, double tau) {
  const auto strategy = options_.strategy;
  if (strategy != SolverStrategy::BlockDirect && strategy != SolverStrategy::BlockGmres) {
    throw Error(ErrorKind::InvalidInput, "solve_block needs a block strategy");
  }
  refresh(system, tau);
  const Vector b = stack_rhs(system);
  if (strategy == SolverStrategy::BlockDirect) {
    Vector x = cache_.block_lu->solve(b);
    const double bn = b.norm();
    const double res = bn > 0.0 ? (b - *cache_.block_matrix * x).norm() / bn : 0.0;
    report_ = {1, res, true};
    return x;
  }
  SolveResult res = gmres_solve(LinearOperator::from_matrix(cache_.block_matrix), b, *cache_.block_precond,
                                options_.rel_tol, options_.gmres_restart, options_.max_iter);
  report_ = res.report;
  if (!res.report.converged) {
    throw Error(ErrorKind::SolverFailure, "block GMRES did not converge: " + std::to_string(res.report.iterations) +
                                              " iterations, relative residual " +
                                              std::to_string(res.report.relative_residual));
  }
  return std::move(res.x);
}

std::unique_ptr<Stepper> make_stepper(Scheme scheme, const SemiDiscrete& sd, const SolverOptions& options) {
  switch (scheme) {
    case Scheme::Gcc1: return std::make_unique<Gcc1Stepper>(sd, options);
    case Scheme::Gcc2: return std::make_unique<Gcc2Stepper>(sd, options);
    case Scheme::Cgp2: return std::make_unique<Cgp2Stepper>(sd, options);
  }
  throw Error(ErrorKind::InvalidInput, "unknown scheme");
}

namespace detail {

StepState hermite_handoff(const SemiDiscrete& sd, const SlabCoeffs& slab, int l, double next_tau) {
  if (!(next_tau > 0.0)) throw Error(ErrorKind::InvalidInput, "step size must be positive");
  StepState s;
  s.t = slab.t_end();
  s.tau = next_tau;
  const double ratio = next_tau / slab.tau;
  double scale = 1.0;
  for (int k = 0; k <= l; ++k) {
    Vector u = sd.restrict_free(slab.u[l + 1 + k]);
    Vector v = sd.restrict_free(slab.v[l + 1 + k]);
    if (scale != 1.0) {
      u *= scale;
      v *= scale;
    }
    s.u.push_back(std::move(u));
    s.v.push_back(std::move(v));
    scale *= ratio;
  }
  return s;
}

std::vector<Vector> hermite_slots(const SemiDiscrete& sd, const std::vector<Vector>& free_slots, double t0, double tau,
                                  int l, int derivative_offset) {
  std::vector<Vector> out;
  out.reserve(free_slots.size());
  for (int e = 0; e < 2; ++e) {
    const double t = t0 + e * tau;
    double scale = 1.0;
    for (int s = 0; s <= l; ++s) {
      Vector g = sd.dirichlet_values(t, s + derivative_offset);
      out.push_back(sd.extend(free_slots[e * (l + 1) + s], scale * g));
      scale *= tau;
    }
  }
  return out;
}

}  // namespace detail

}  // namespace wavegc
