#include "wavegc/fespace.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "wavegc/error.hpp"

namespace wavegc {

LagrangeBasis1D::LagrangeBasis1D(int degree, NodePlacement placement) {
  if (degree < 1) throw Error(ErrorKind::InvalidInput, "polynomial degree must be >= 1");
  if (placement == NodePlacement::GaussLobatto && degree > 1) {
    nodes_ = gauss_lobatto(degree + 1).points;
  } else {
    nodes_.resize(degree + 1);
    for (int i = 0; i <= degree; ++i) nodes_[i] = static_cast<double>(i) / degree;
  }
  nodes_.front() = 0.0;
  nodes_.back() = 1.0;
  denominators_.assign(nodes_.size(), 1.0);
  for (std::size_t i = 0; i < nodes_.size(); ++i) {
    for (std::size_t k = 0; k < nodes_.size(); ++k) {
      if (k != i) denominators_[i] *= nodes_[i] - nodes_[k];
    }
  }
}

double LagrangeBasis1D::value(int i, double s) const {
  double num = 1.0;
  for (std::size_t k = 0; k < nodes_.size(); ++k) {
    if (static_cast<int>(k) != i) num *= s - nodes_[k];
  }
  return num / denominators_[i];
}

double LagrangeBasis1D::derivative(int i, double s) const {
  double sum = 0.0;
  for (std::size_t m = 0; m < nodes_.size(); ++m) {
    if (static_cast<int>(m) == i) continue;
    double prod = 1.0;
    for (std::size_t k = 0; k < nodes_.size(); ++k) {
      if (static_cast<int>(k) != i && k != m) prod *= s - nodes_[k];
    }
    sum += prod;
  }
  return sum / denominators_[i];
}

FeSpace::FeSpace(Mesh mesh, int degree, NodePlacement placement)
    : mesh_(std::move(mesh)), degree_(degree), placement_(placement), basis_(degree, placement) {
  const int p = degree_;
  const int nx = mesh_.nx();
  const int ny = mesh_.ny();
  const int lx = lattice_nx();
  const int ly = lattice_ny();
  const Rect& dom = mesh_.domain();
  const double hx = mesh_.cell_width();
  const double hy = mesh_.cell_height();
  const auto& s = basis_.nodes();

  auto coord = [&](int index, int cells, double lo, double hi, double size) {
    if (index == p * cells) return hi;
    const int cell = index / p;
    const int local = index % p;
    return lo + cell * size + s[local] * size;
  };

  dof_coords_.resize(static_cast<std::size_t>(lx) * ly);
  for (int J = 0; J < ly; ++J) {
    const double y = coord(J, ny, dom.y0, dom.y1, hy);
    for (int I = 0; I < lx; ++I) {
      dof_coords_[static_cast<std::size_t>(J) * lx + I] = {coord(I, nx, dom.x0, dom.x1, hx), y};
    }
  }

  cell_dofs_.resize(mesh_.n_cells() * dofs_per_cell());
  for (int j = 0; j < ny; ++j) {
    for (int i = 0; i < nx; ++i) {
      int* dofs = cell_dofs_.data() + static_cast<std::size_t>(mesh_.cell_index(i, j)) * dofs_per_cell();
      for (int b = 0; b <= p; ++b) {
        for (int a = 0; a <= p; ++a) {
          dofs[b * (p + 1) + a] = (j * p + b) * lx + (i * p + a);
        }
      }
    }
  }

  is_dirichlet_.assign(dof_coords_.size(), 0);
  for (const BoundaryFace& face : mesh_.boundary_faces()) {
    if (face.label != BoundaryLabel::Dirichlet) continue;
    const auto dofs = cell_dofs(face.cell);
    for (int k = 0; k <= p; ++k) {
      int local = 0;
      switch (face.local_face) {
        case 0: local = k; break;
        case 1: local = k * (p + 1) + p; break;
        case 2: local = p * (p + 1) + k; break;
        default: local = k * (p + 1); break;
      }
      is_dirichlet_[dofs[local]] = 1;
    }
  }
  for (int d = 0; d < n_dofs(); ++d) {
    (is_dirichlet_[d] ? dirichlet_dofs_ : free_dofs_).push_back(d);
  }
}

FeSpace build_space(const Mesh& mesh, int degree, NodePlacement placement) {
  return FeSpace(mesh, degree, placement);
}

CellQuadrature::CellQuadrature(const LagrangeBasis1D& basis, int points_per_direction)
    : rule_1d(gauss_legendre(points_per_direction)) {
  const int nq = points_per_direction;
  const int p = basis.degree();
  const int nloc = (p + 1) * (p + 1);
  const int npts = nq * nq;
  points_x.resize(npts);
  points_y.resize(npts);
  weights.resize(npts);
  values.resize(npts, nloc);
  grad_x.resize(npts, nloc);
  grad_y.resize(npts, nloc);
  for (int qy = 0; qy < nq; ++qy) {
    for (int qx = 0; qx < nq; ++qx) {
      const int q = qy * nq + qx;
      const double sx = rule_1d.points[qx];
      const double sy = rule_1d.points[qy];
      points_x[q] = sx;
      points_y[q] = sy;
      weights[q] = rule_1d.weights[qx] * rule_1d.weights[qy];
      for (int b = 0; b <= p; ++b) {
        const double vy = basis.value(b, sy);
        const double dy = basis.derivative(b, sy);
        for (int a = 0; a <= p; ++a) {
          const double vx = basis.value(a, sx);
          const double dx = basis.derivative(a, sx);
          const int i = b * (p + 1) + a;
          values(q, i) = vx * vy;
          grad_x(q, i) = dx * vy;
          grad_y(q, i) = vx * dy;
        }
      }
    }
  }
}

int default_quadrature_points(int degree) { return degree + 2; }

namespace {

SparseMatrix from_triplets(int n, std::vector<Eigen::Triplet<double>>& triplets) {
  SparseMatrix m(n, n);
  m.setFromTriplets(triplets.begin(), triplets.end());
  m.makeCompressed();
  return m;
}

}  // namespace

SparseMatrix assemble_mass(const FeSpace& space, int quadrature_points) {
  const int nq = quadrature_points > 0 ? quadrature_points : default_quadrature_points(space.degree());
  const CellQuadrature quad(space.basis_1d(), nq);
  const double jac = space.mesh().cell_width() * space.mesh().cell_height();
  // Uniform cells share one local matrix.
  const Eigen::MatrixXd local =
      jac * quad.values.transpose() * Eigen::VectorXd::Map(quad.weights.data(), quad.n_points()).asDiagonal() *
      quad.values;
  const int nloc = space.dofs_per_cell();
  std::vector<Eigen::Triplet<double>> triplets;
  triplets.reserve(space.mesh().n_cells() * nloc * nloc);
  for (int c = 0; c < static_cast<int>(space.mesh().n_cells()); ++c) {
    const auto dofs = space.cell_dofs(c);
    for (int i = 0; i < nloc; ++i) {
      for (int j = 0; j < nloc; ++j) triplets.emplace_back(dofs[i], dofs[j], local(i, j));
    }
  }
  return from_triplets(space.n_dofs(), triplets);
}

SparseMatrix assemble_stiffness(const FeSpace& space, const ScalarField& csq, int quadrature_points,
                                const CellFilter& filter) {
  const int nq = quadrature_points > 0 ? quadrature_points : default_quadrature_points(space.degree());
  const CellQuadrature quad(space.basis_1d(), nq);
  const Mesh& mesh = space.mesh();
  const double hx = mesh.cell_width();
  const double hy = mesh.cell_height();
  const double jac = hx * hy;
  const int nloc = space.dofs_per_cell();
  const int npts = quad.n_points();
  // Physical gradients on an axis-aligned cell: d/dx = (1/hx) d/ds.
  const Eigen::MatrixXd gx = quad.grad_x / hx;
  const Eigen::MatrixXd gy = quad.grad_y / hy;

  std::vector<Eigen::Triplet<double>> triplets;
  triplets.reserve(mesh.n_cells() * nloc * nloc);
  Eigen::VectorXd w(npts);
  Eigen::MatrixXd local(nloc, nloc);
  for (int c = 0; c < static_cast<int>(mesh.n_cells()); ++c) {
    if (filter && !filter(c)) continue;
    const Point origin = mesh.cell_origin(c);
    for (int q = 0; q < npts; ++q) {
      const Point x{origin.x + quad.points_x[q] * hx, origin.y + quad.points_y[q] * hy};
      const double value = csq(x);
      if (!(value > 0.0) || !std::isfinite(value)) {
        throw Error(ErrorKind::InvalidCoefficient,
                    "c^2 must be positive, got " + std::to_string(value) + " at (" + std::to_string(x.x) +
                        ", " + std::to_string(x.y) + ")");
      }
      w[q] = jac * quad.weights[q] * value;
    }
    local.noalias() = gx.transpose() * w.asDiagonal() * gx;
    local.noalias() += gy.transpose() * w.asDiagonal() * gy;
    const auto dofs = space.cell_dofs(c);
    for (int i = 0; i < nloc; ++i) {
      for (int j = 0; j < nloc; ++j) triplets.emplace_back(dofs[i], dofs[j], local(i, j));
    }
  }
  return from_triplets(space.n_dofs(), triplets);
}

Vector interpolate(const FeSpace& space, const ScalarField& func) {
  Vector w(space.n_dofs());
  const auto& nodes = space.dof_coords();
  for (int d = 0; d < space.n_dofs(); ++d) {
    const double value = func(nodes[d]);
    if (!std::isfinite(value)) {
      throw Error(ErrorKind::InvalidData, "non-finite value at node " + std::to_string(d));
    }
    w[d] = value;
  }
  return w;
}

std::vector<double> eval_field(const FeSpace& space, const Vector& coeffs, std::span<const Point> points) {
  if (coeffs.size() != space.n_dofs()) {
    throw Error(ErrorKind::InvalidInput, "coefficient vector length does not match the space");
  }
  const Mesh& mesh = space.mesh();
  const Rect& dom = mesh.domain();
  const double hx = mesh.cell_width();
  const double hy = mesh.cell_height();
  const double tol = 1e-12 * std::max(dom.width(), dom.height());
  const auto& basis = space.basis_1d();
  const int p = space.degree();
  std::vector<double> out;
  out.reserve(points.size());
  for (const Point& x : points) {
    if (!dom.contains(x, tol)) {
      throw Error(ErrorKind::OutOfDomain,
                  "point (" + std::to_string(x.x) + ", " + std::to_string(x.y) + ") outside the mesh");
    }
    const int i = std::clamp(static_cast<int>(std::floor((x.x - dom.x0) / hx)), 0, mesh.nx() - 1);
    const int j = std::clamp(static_cast<int>(std::floor((x.y - dom.y0) / hy)), 0, mesh.ny() - 1);
    const int cell = mesh.cell_index(i, j);
    const Point o = mesh.cell_origin(cell);
    const double sx = (x.x - o.x) / hx;
    const double sy = (x.y - o.y) / hy;
    const auto dofs = space.cell_dofs(cell);
    double value = 0.0;
    for (int b = 0; b <= p; ++b) {
      const double vy = basis.value(b, sy);
      for (int a = 0; a <= p; ++a) value += coeffs[dofs[b * (p + 1) + a]] * basis.value(a, sx) * vy;
    }
    out.push_back(value);
  }
  return out;
}

double l2_norm(const FeSpace& space, const Vector& coeffs) {
  const FieldSampler sampler(space, default_quadrature_points(space.degree()));
  Vector values;
  sampler.values(coeffs, values);
  return std::sqrt((values.array().square() * Eigen::ArrayXd::Map(sampler.weights().data(), values.size())).sum());
}

double h1_seminorm(const FeSpace& space, const Vector& coeffs) {
  const FieldSampler sampler(space, default_quadrature_points(space.degree()));
  Vector gx;
  Vector gy;
  sampler.gradients(coeffs, gx, gy);
  const auto w = Eigen::ArrayXd::Map(sampler.weights().data(), gx.size());
  return std::sqrt(((gx.array().square() + gy.array().square()) * w).sum());
}

FieldSampler::FieldSampler(const FeSpace& space, int points_per_direction)
    : space_(&space), quad_(space.basis_1d(), points_per_direction), nq_(points_per_direction) {
  const Mesh& mesh = space.mesh();
  const Rect& dom = mesh.domain();
  const double hx = mesh.cell_width();
  const double hy = mesh.cell_height();
  const auto& pts = quad_.rule_1d.points;
  const auto& wts = quad_.rule_1d.weights;
  xs_.resize(static_cast<std::size_t>(mesh.nx()) * nq_);
  ys_.resize(static_cast<std::size_t>(mesh.ny()) * nq_);
  std::vector<double> wx(xs_.size());
  std::vector<double> wy(ys_.size());
  for (int i = 0; i < mesh.nx(); ++i) {
    for (int q = 0; q < nq_; ++q) {
      xs_[i * nq_ + q] = dom.x0 + (i + pts[q]) * hx;
      wx[i * nq_ + q] = wts[q] * hx;
    }
  }
  for (int j = 0; j < mesh.ny(); ++j) {
    for (int q = 0; q < nq_; ++q) {
      ys_[j * nq_ + q] = dom.y0 + (j + pts[q]) * hy;
      wy[j * nq_ + q] = wts[q] * hy;
    }
  }
  const std::size_t nxq = xs_.size();
  weights_.resize(nxq * ys_.size());
  for (std::size_t iy = 0; iy < ys_.size(); ++iy) {
    for (std::size_t ix = 0; ix < nxq; ++ix) weights_[iy * nxq + ix] = wx[ix] * wy[iy];
  }
  const int npts = nq_ * nq_;
  point_index_.resize(mesh.n_cells() * npts);
  for (int c = 0; c < static_cast<int>(mesh.n_cells()); ++c) {
    const auto [i, j] = mesh.cell_ij(c);
    for (int qy = 0; qy < nq_; ++qy) {
      for (int qx = 0; qx < nq_; ++qx) {
        point_index_[static_cast<std::size_t>(c) * npts + qy * nq_ + qx] =
            static_cast<int>((j * nq_ + qy) * nxq + (i * nq_ + qx));
      }
    }
  }
}

void FieldSampler::values(const Vector& coeffs, Vector& out) const {
  const int nloc = space_->dofs_per_cell();
  const int npts = nq_ * nq_;
  out.resize(n_points());
  Eigen::VectorXd local(nloc);
  Eigen::VectorXd at_q(npts);
  for (int c = 0; c < static_cast<int>(space_->mesh().n_cells()); ++c) {
    const auto dofs = space_->cell_dofs(c);
    for (int i = 0; i < nloc; ++i) local[i] = coeffs[dofs[i]];
    at_q.noalias() = quad_.values * local;
    const int* idx = point_index_.data() + static_cast<std::size_t>(c) * npts;
    for (int q = 0; q < npts; ++q) out[idx[q]] = at_q[q];
  }
}

void FieldSampler::gradients(const Vector& coeffs, Vector& gx, Vector& gy) const {
  const int nloc = space_->dofs_per_cell();
  const int npts = nq_ * nq_;
  const double hx = space_->mesh().cell_width();
  const double hy = space_->mesh().cell_height();
  gx.resize(n_points());
  gy.resize(n_points());
  Eigen::VectorXd local(nloc);
  Eigen::VectorXd ax(npts);
  Eigen::VectorXd ay(npts);
  for (int c = 0; c < static_cast<int>(space_->mesh().n_cells()); ++c) {
    const auto dofs = space_->cell_dofs(c);
    for (int i = 0; i < nloc; ++i) local[i] = coeffs[dofs[i]];
    ax.noalias() = quad_.grad_x * local;
    ay.noalias() = quad_.grad_y * local;
    const int* idx = point_index_.data() + static_cast<std::size_t>(c) * npts;
    for (int q = 0; q < npts; ++q) {
      gx[idx[q]] = ax[q] / hx;
      gy[idx[q]] = ay[q] / hy;
    }
  }
}

Vector FieldSampler::weighted_functional(const Vector& pointwise) const {
  const int nloc = space_->dofs_per_cell();
  const int npts = nq_ * nq_;
  Vector out = Vector::Zero(space_->n_dofs());
  Eigen::VectorXd wq(npts);
  for (int c = 0; c < static_cast<int>(space_->mesh().n_cells()); ++c) {
    const int* idx = point_index_.data() + static_cast<std::size_t>(c) * npts;
    bool any = false;
    for (int q = 0; q < npts; ++q) {
      wq[q] = weights_[idx[q]] * pointwise[idx[q]];
      any = any || wq[q] != 0.0;
    }
    if (!any) continue;
    const Eigen::VectorXd local = quad_.values.transpose() * wq;
    const auto dofs = space_->cell_dofs(c);
    for (int i = 0; i < nloc; ++i) out[dofs[i]] += local[i];
  }
  return out;
}

}  // namespace wavegc
