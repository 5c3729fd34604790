#include "wavegc/condense.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/Dense>

#include "wavegc/error.hpp"

namespace wavegc {

Polynomial poly_add(const Polynomial& a, const Polynomial& b) {
  Polynomial out(std::max(a.size(), b.size()), 0.0);
  for (std::size_t i = 0; i < a.size(); ++i) out[i] += a[i];
  for (std::size_t i = 0; i < b.size(); ++i) out[i] += b[i];
  return out;
}

Polynomial poly_mul(const Polynomial& a, const Polynomial& b) {
  if (a.empty() || b.empty()) return {};
  Polynomial out(a.size() + b.size() - 1, 0.0);
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < b.size(); ++j) out[i + j] += a[i] * b[j];
  return out;
}

Polynomial poly_scale(const Polynomial& a, double s) {
  Polynomial out = a;
  for (double& c : out) c *= s;
  return out;
}

double poly_eval(const Polynomial& a, double z) {
  double acc = 0.0;
  for (auto it = a.rbegin(); it != a.rend(); ++it) acc = acc * z + *it;
  return acc;
}

std::complex<double> poly_eval(const Polynomial& a, std::complex<double> z) {
  std::complex<double> acc = 0.0;
  for (auto it = a.rbegin(); it != a.rend(); ++it) acc = acc * z + *it;
  return acc;
}

namespace {

// Cofactor arithmetic runs in extended precision so that coefficients which are
// representable in double (e.g. 14400, 720, 24, 1) come out exactly.
using XPoly = std::vector<long double>;
using PolyMatrix = std::vector<std::vector<XPoly>>;

XPoly xmul(const XPoly& a, const XPoly& b) {
  XPoly out(a.size() + b.size() - 1, 0.0L);
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < b.size(); ++j) out[i + j] += a[i] * b[j];
  return out;
}

void xaxpy(XPoly& acc, long double s, const XPoly& a) {
  if (acc.size() < a.size()) acc.resize(a.size(), 0.0L);
  for (std::size_t i = 0; i < a.size(); ++i) acc[i] += s * a[i];
}

XPoly det_of(const PolyMatrix& m) {
  const std::size_t n = m.size();
  if (n == 1) return m[0][0];
  XPoly acc{0.0L};
  for (std::size_t col = 0; col < n; ++col) {
    if (std::all_of(m[0][col].begin(), m[0][col].end(), [](long double c) { return c == 0.0L; })) continue;
    PolyMatrix minor;
    for (std::size_t r = 1; r < n; ++r) {
      std::vector<XPoly> row;
      for (std::size_t c = 0; c < n; ++c)
        if (c != col) row.push_back(m[r][c]);
      minor.push_back(std::move(row));
    }
    xaxpy(acc, col % 2 == 0 ? 1.0L : -1.0L, xmul(m[0][col], det_of(minor)));
  }
  return acc;
}

void trim(XPoly& p) {
  while (p.size() > 1 && p.back() == 0.0L) p.pop_back();
}

Polynomial to_double(const XPoly& p, long double scale) {
  Polynomial out;
  for (long double c : p) out.push_back(static_cast<double>(c * scale));
  return out;
}

Polynomial derivative(const Polynomial& p) {
  Polynomial d;
  for (std::size_t m = 1; m < p.size(); ++m) d.push_back(static_cast<double>(m) * p[m]);
  if (d.empty()) d.push_back(0.0);
  return d;
}

}  // namespace

Condensation condense(const std::vector<BlockCoeff>& blocks, int n, int retained, double leading) {
  if (n < 1 || static_cast<int>(blocks.size()) != n * n || retained < 0 || retained >= n) {
    throw Error(ErrorKind::InvalidInput, "condense: inconsistent block system");
  }
  PolyMatrix pm(n, std::vector<XPoly>(n));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) pm[i][j] = {blocks[i * n + j].m, blocks[i * n + j].a};

  Condensation c;
  c.eliminated_to = retained;
  XPoly det = det_of(pm);
  trim(det);
  if (det[0] == 0.0L) throw Error(ErrorKind::SingularMatrix, "condensed polynomial vanishes at K = 0");
  const long double scale = static_cast<long double>(leading) / det[0];
  c.det = to_double(det, scale);
  c.det[0] = leading;

  for (int j = 0; j < n; ++j) {
    XPoly cof{1.0L};
    if (n > 1) {
      PolyMatrix minor;
      for (int r = 0; r < n; ++r) {
        if (r == j) continue;
        std::vector<XPoly> row;
        for (int col = 0; col < n; ++col)
          if (col != retained) row.push_back(pm[r][col]);
        minor.push_back(std::move(row));
      }
      cof = det_of(minor);
    }
    trim(cof);
    c.cof.push_back(to_double(cof, (j + retained) % 2 == 0 ? scale : -scale));
  }
  return c;
}

CondensedOperator::CondensedOperator(Polynomial det, std::shared_ptr<const SparseMatrix> mass,
                                     std::shared_ptr<const SparseMatrix> stiffness, const SpdSolver* mass_solver)
    : det_(std::move(det)), mass_(std::move(mass)), stiffness_(std::move(stiffness)), mass_solver_(mass_solver) {}

void CondensedOperator::apply(const Vector& x, Vector& y) const {
  const int d = static_cast<int>(det_.size()) - 1;
  if (d == 0) {
    y.noalias() = det_[0] * (*mass_ * x);
    return;
  }
  Vector w = det_[d] * x;
  for (int m = d - 1; m >= 1; --m) {
    Vector aw = *stiffness_ * w;
    mass_solver_->solve_in_place(aw);
    w = det_[m] * x + aw;
  }
  y.noalias() = *stiffness_ * w;
  y.noalias() += det_[0] * (*mass_ * x);
}

LinearOperator CondensedOperator::as_operator() const {
  auto self = std::make_shared<const CondensedOperator>(*this);
  return LinearOperator(mass_->rows(), [self](const Vector& x, Vector& y) { self->apply(x, y); });
}

Vector condensed_rhs(const Condensation& c, const std::vector<Vector>& rhs, const SparseMatrix& stiffness,
                     const SpdSolver& mass_solver) {
  std::size_t degree = 0;
  for (const auto& q : c.cof) degree = std::max(degree, q.size());
  const Eigen::Index n = rhs.at(0).size();
  std::vector<Vector> s(degree, Vector::Zero(n));
  for (std::size_t j = 0; j < c.cof.size(); ++j)
    for (std::size_t m = 0; m < c.cof[j].size(); ++m)
      if (c.cof[j][m] != 0.0) s[m] += c.cof[j][m] * rhs[j];
  Vector w = s.back();
  for (int m = static_cast<int>(degree) - 2; m >= 0; --m) {
    mass_solver.solve_in_place(w);
    w = s[m] + stiffness * w;
  }
  return w;
}

Eigen::MatrixXd dense_condensed_matrix(const Polynomial& det, const Eigen::MatrixXd& mass,
                                       const Eigen::MatrixXd& stiffness) {
  Eigen::MatrixXd s = det[0] * mass;
  const Eigen::MatrixXd k = mass.ldlt().solve(stiffness);
  Eigen::MatrixXd power = stiffness;  // A K^{m-1}
  for (std::size_t m = 1; m < det.size(); ++m) {
    s += det[m] * power;
    power = power * k;
  }
  return s;
}

SparseMatrix assemble_block_matrix(const BlockSystem& system, const SparseMatrix& mass, const SparseMatrix& stiffness) {
  const Eigen::Index j = mass.rows();
  std::vector<Eigen::Triplet<double>> trips;
  for (int r = 0; r < system.n; ++r) {
    for (int c = 0; c < system.n; ++c) {
      const BlockCoeff& b = system.at(r, c);
      if (b.m == 0.0 && b.a == 0.0) continue;
      const SparseMatrix block = linear_combination(b.m, mass, b.a, stiffness);
      for (Eigen::Index row = 0; row < block.outerSize(); ++row)
        for (SparseMatrix::InnerIterator it(block, row); it; ++it)
          trips.emplace_back(static_cast<int>(r * j + row), static_cast<int>(c * j + it.col()), it.value());
    }
  }
  SparseMatrix out(system.n * j, system.n * j);
  out.setFromTriplets(trips.begin(), trips.end());
  return out;
}

Vector stack_rhs(const BlockSystem& system) {
  const Eigen::Index j = system.rhs.at(0).size();
  Vector b(system.n * j);
  for (int r = 0; r < system.n; ++r) b.segment(r * j, j) = system.rhs[r];
  return b;
}

std::vector<std::complex<double>> poly_roots(const Polynomial& p) {
  Polynomial q = p;
  while (q.size() > 1 && q.back() == 0.0) q.pop_back();
  const int d = static_cast<int>(q.size()) - 1;
  if (d < 1) return {};
  // Balance the variable so that the end coefficients have equal magnitude.
  const double s = std::pow(std::abs(q[0] / q[d]), 1.0 / d);
  Polynomial r(q.size());
  for (int m = 0; m <= d; ++m) r[m] = q[m] * std::pow(s, m) / (q[d] * std::pow(s, d));
  Eigen::MatrixXd companion = Eigen::MatrixXd::Zero(d, d);
  for (int i = 1; i < d; ++i) companion(i, i - 1) = 1.0;
  for (int i = 0; i < d; ++i) companion(i, d - 1) = -r[i];
  Eigen::EigenSolver<Eigen::MatrixXd> es(companion);
  std::vector<std::complex<double>> roots;
  for (int i = 0; i < d; ++i) roots.push_back(es.eigenvalues()[i] * s);
  return roots;
}

PartialFractionSolver::PartialFractionSolver(const Polynomial& det, const SparseMatrix& mass,
                                             const SparseMatrix& stiffness)
    : roots_(poly_roots(det)) {
  const Polynomial dp = derivative(det);
  for (const auto& z : roots_) {
    const double scale = std::max(1.0, std::abs(z));
    if (std::abs(z.imag()) <= 1e-12 * scale) {
      RealTerm term;
      term.weight = 1.0 / poly_eval(dp, z.real());
      const SparseMatrix shifted = linear_combination(-z.real(), mass, 1.0, stiffness);
      // A - zM is SPD for z < 0.
      term.solver = z.real() < 0.0 ? SpdSolver(shifted).as_operator() : DirectSolver(shifted).as_operator();
      real_terms_.push_back(std::move(term));
    } else if (z.imag() > 0.0) {
      ComplexSparseMatrix shifted =
          stiffness.cast<std::complex<double>>() - z * mass.cast<std::complex<double>>();
      shifted.makeCompressed();
      ComplexTerm term;
      term.weight = 1.0 / poly_eval(dp, z);
      term.solver = std::make_shared<const ComplexSolver>(shifted);
      complex_terms_.push_back(std::move(term));
    }
  }
}

Vector PartialFractionSolver::solve(const Vector& b) const {
  Vector x = Vector::Zero(b.size());
  for (const auto& t : real_terms_) x += t.weight * t.solver(b);
  if (!complex_terms_.empty()) {
    const ComplexVector bc = b.cast<std::complex<double>>();
    for (const auto& t : complex_terms_) x += 2.0 * (t.weight * t.solver->solve(bc)).real();
  }
  return x;
}

}  // namespace wavegc
