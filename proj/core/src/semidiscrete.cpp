#include "wavegc/semidiscrete.hpp"

#include <vector>

#include "wavegc/error.hpp"

namespace wavegc {

namespace {

// Rows of the selection matrix pick `indices` out of a length-n vector.
SparseMatrix selection(const std::vector<int>& indices, int n) {
  SparseMatrix s(static_cast<Eigen::Index>(indices.size()), n);
  std::vector<Eigen::Triplet<double>> trips;
  trips.reserve(indices.size());
  for (std::size_t r = 0; r < indices.size(); ++r) trips.emplace_back(static_cast<int>(r), indices[r], 1.0);
  s.setFromTriplets(trips.begin(), trips.end());
  return s;
}

}  // namespace

SemiDiscrete::SemiDiscrete(const WaveProblem& problem, const FeSpace& space, int quadrature_points)
    : problem_(&problem), space_(&space) {
  const int n = space.n_dofs();
  const SparseMatrix mass = assemble_mass(space, quadrature_points);
  const SparseMatrix stiff = assemble_stiffness(space, problem.csq, quadrature_points);
  const SparseMatrix pf = selection(space.free_dofs(), n);
  const SparseMatrix pd = selection(space.dirichlet_dofs(), n);
  const SparseMatrix pft = pf.transpose();
  const SparseMatrix pdt = pd.transpose();
  m_full_rows_ = pf * mass;
  m_ff_ = m_full_rows_ * pft;
  m_fd_ = m_full_rows_ * pdt;
  const SparseMatrix a_rows = pf * stiff;
  a_ff_ = a_rows * pft;
  a_fd_ = a_rows * pdt;
  for (SparseMatrix* m : {&m_full_rows_, &m_ff_, &m_fd_, &a_ff_, &a_fd_}) m->makeCompressed();
  mass_ptr_ = std::make_shared<const SparseMatrix>(m_ff_);
  stiff_ptr_ = std::make_shared<const SparseMatrix>(a_ff_);
  mass_solver_ = std::make_shared<const SpdSolver>(m_ff_);
}

Vector SemiDiscrete::load(double t, int s) const {
  if (!problem_->has_forcing) return Vector::Zero(n_free());
  const auto& coords = space_->dof_coords();
  Vector f(space_->n_dofs());
  for (int i = 0; i < space_->n_dofs(); ++i) f[i] = problem_->f(coords[i], t, s);
  return m_full_rows_ * f;
}

Vector SemiDiscrete::dirichlet_values(double t, int s) const {
  const auto& dofs = space_->dirichlet_dofs();
  Vector g = Vector::Zero(static_cast<Eigen::Index>(dofs.size()));
  if (!problem_->has_boundary_data) return g;
  const auto& coords = space_->dof_coords();
  for (std::size_t k = 0; k < dofs.size(); ++k) g[static_cast<Eigen::Index>(k)] = problem_->gu(coords[dofs[k]], t, s);
  return g;
}

Vector SemiDiscrete::boundary_mass(double t, int s) const {
  if (!has_boundary_data()) return Vector::Zero(n_free());
  return m_fd_ * dirichlet_values(t, s);
}

Vector SemiDiscrete::boundary_stiffness(double t, int s) const {
  if (!has_boundary_data()) return Vector::Zero(n_free());
  return a_fd_ * dirichlet_values(t, s);
}

Vector SemiDiscrete::collocation_rhs(double t, int s) const {
  Vector r = load(t, s);
  if (has_boundary_data()) r -= boundary_mass(t, s + 2) + boundary_stiffness(t, s);
  return r;
}

Vector SemiDiscrete::restrict_free(const Vector& full) const {
  const auto& dofs = space_->free_dofs();
  Vector out(static_cast<Eigen::Index>(dofs.size()));
  for (std::size_t k = 0; k < dofs.size(); ++k) out[static_cast<Eigen::Index>(k)] = full[dofs[k]];
  return out;
}

Vector SemiDiscrete::extend(const Vector& free_values, const Vector& dirichlet_values) const {
  const auto& fd = space_->free_dofs();
  const auto& dd = space_->dirichlet_dofs();
  if (free_values.size() != static_cast<Eigen::Index>(fd.size()) ||
      dirichlet_values.size() != static_cast<Eigen::Index>(dd.size())) {
    throw Error(ErrorKind::InvalidInput, "extend: vector sizes do not match the DOF partition");
  }
  Vector out(space_->n_dofs());
  for (std::size_t k = 0; k < fd.size(); ++k) out[fd[k]] = free_values[static_cast<Eigen::Index>(k)];
  for (std::size_t k = 0; k < dd.size(); ++k) out[dd[k]] = dirichlet_values[static_cast<Eigen::Index>(k)];
  return out;
}

Vector SemiDiscrete::interpolate_free(const PointField& func) const {
  return restrict_free(interpolate(*space_, func));
}

}  // namespace wavegc
