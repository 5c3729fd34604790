#pragma once

#include <functional>
#include <span>
#include <vector>

#include <Eigen/Core>
#include <Eigen/SparseCore>

#include "wavegc/mesh.hpp"
#include "wavegc/quadrature.hpp"

namespace wavegc {

using Vector = Eigen::VectorXd;
/// Compressed sparse row storage.
using SparseMatrix = Eigen::SparseMatrix<double, Eigen::RowMajor, int>;

using ScalarField = std::function<double(Point)>;
using CellFilter = std::function<bool(int)>;

enum class NodePlacement { Equispaced, GaussLobatto };

/// Lagrange polynomials of degree p on [0,1] through the given nodes.
class LagrangeBasis1D {
 public:
  LagrangeBasis1D(int degree, NodePlacement placement);

  int degree() const { return static_cast<int>(nodes_.size()) - 1; }
  const std::vector<double>& nodes() const { return nodes_; }
  double value(int i, double s) const;
  double derivative(int i, double s) const;

 private:
  std::vector<double> nodes_;
  std::vector<double> denominators_;
};

/// Continuous Q_p Lagrange space on a structured mesh. Global nodes form a
/// (p*nx+1) x (p*ny+1) lattice numbered x-fastest; each cell references its
/// (p+1)^2 nodes in lexicographic order.
class FeSpace {
 public:
  FeSpace(Mesh mesh, int degree, NodePlacement placement = NodePlacement::Equispaced);

  const Mesh& mesh() const { return mesh_; }
  int degree() const { return degree_; }
  NodePlacement placement() const { return placement_; }
  const LagrangeBasis1D& basis_1d() const { return basis_; }

  int n_dofs() const { return static_cast<int>(dof_coords_.size()); }
  int dofs_per_cell() const { return (degree_ + 1) * (degree_ + 1); }
  int lattice_nx() const { return degree_ * mesh_.nx() + 1; }
  int lattice_ny() const { return degree_ * mesh_.ny() + 1; }

  const std::vector<Point>& dof_coords() const { return dof_coords_; }
  std::span<const int> cell_dofs(int cell) const {
    return {cell_dofs_.data() + static_cast<std::size_t>(cell) * dofs_per_cell(),
            static_cast<std::size_t>(dofs_per_cell())};
  }
  const std::vector<int>& dirichlet_dofs() const { return dirichlet_dofs_; }
  const std::vector<int>& free_dofs() const { return free_dofs_; }
  bool is_dirichlet(int dof) const { return is_dirichlet_[dof] != 0; }

 private:
  Mesh mesh_;
  int degree_;
  NodePlacement placement_;
  LagrangeBasis1D basis_;
  std::vector<Point> dof_coords_;
  std::vector<int> cell_dofs_;
  std::vector<int> dirichlet_dofs_;
  std::vector<int> free_dofs_;
  std::vector<char> is_dirichlet_;
};

FeSpace build_space(const Mesh& mesh, int degree,
                    NodePlacement placement = NodePlacement::Equispaced);

/// Reference-cell tables for a tensor Gauss-Legendre rule: basis values and
/// reference gradients at every quadrature point.
struct CellQuadrature {
  QuadratureRule rule_1d;
  std::vector<double> points_x;  // reference coordinates, x fastest
  std::vector<double> points_y;
  std::vector<double> weights;   // reference weights (sum 1)
  Eigen::MatrixXd values;        // n_qpoints x dofs_per_cell
  Eigen::MatrixXd grad_x;        // d/ds on the reference cell
  Eigen::MatrixXd grad_y;

  CellQuadrature(const LagrangeBasis1D& basis, int points_per_direction);
  int n_points() const { return static_cast<int>(weights.size()); }
};

/// Default assembly rule: p+2 Gauss points per direction.
int default_quadrature_points(int degree);

SparseMatrix assemble_mass(const FeSpace& space, int quadrature_points = 0);

/// A_ij = <csq grad phi_i, grad phi_j>; cells rejected by `filter` are skipped.
SparseMatrix assemble_stiffness(const FeSpace& space, const ScalarField& csq,
                                int quadrature_points = 0, const CellFilter& filter = {});

/// Nodal interpolant; rejects non-finite nodal values.
Vector interpolate(const FeSpace& space, const ScalarField& func);

std::vector<double> eval_field(const FeSpace& space, const Vector& coeffs,
                               std::span<const Point> points);

double l2_norm(const FeSpace& space, const Vector& coeffs);
double h1_seminorm(const FeSpace& space, const Vector& coeffs);

/// Evaluates finite element fields at every quadrature point of the mesh.
/// Quadrature points of a structured mesh form a global tensor grid; point
/// (ix, iy) has index iy * xs().size() + ix.
class FieldSampler {
 public:
  FieldSampler(const FeSpace& space, int points_per_direction);

  const std::vector<double>& xs() const { return xs_; }
  const std::vector<double>& ys() const { return ys_; }
  const std::vector<double>& weights() const { return weights_; }
  int n_points() const { return static_cast<int>(weights_.size()); }

  void values(const Vector& coeffs, Vector& out) const;
  void gradients(const Vector& coeffs, Vector& gx, Vector& gy) const;
  /// Linear functional c with c.dot(w) = sum_q weight_q * g(x_q) * w_h(x_q).
  Vector weighted_functional(const Vector& pointwise) const;

 private:
  const FeSpace* space_;
  CellQuadrature quad_;
  int nq_;
  std::vector<double> xs_;
  std::vector<double> ys_;
  std::vector<double> weights_;
  std::vector<int> point_index_;  // per cell, per local quadrature point
};

}  // namespace wavegc
