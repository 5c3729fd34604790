#include "wavegc/mesh.hpp"

#include <cmath>
#include <string>

#include "wavegc/error.hpp"

namespace wavegc {

std::string_view to_string(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::InvalidInput: return "invalid input";
    case ErrorKind::InvalidCoefficient: return "invalid coefficient";
    case ErrorKind::InvalidData: return "invalid data";
    case ErrorKind::InvalidIndex: return "invalid index";
    case ErrorKind::OutOfDomain: return "out of domain";
    case ErrorKind::OutOfSlab: return "out of slab";
    case ErrorKind::NumericalBreakdown: return "numerical breakdown";
    case ErrorKind::SingularMatrix: return "singular matrix";
    case ErrorKind::PreconditionerFailure: return "preconditioner failure";
    case ErrorKind::SolverFailure: return "solver failure";
    case ErrorKind::InsufficientData: return "insufficient data";
    case ErrorKind::Io: return "i/o error";
  }
  return "error";
}

namespace {

// Faces are enumerated side by side: bottom, right, top, left, each in the
// direction of increasing coordinate.
template <class LabelFn>
std::vector<BoundaryFace> enumerate_boundary(int nx, int ny, LabelFn&& label) {
  std::vector<BoundaryFace> faces;
  faces.reserve(2 * static_cast<std::size_t>(nx + ny));
  for (int i = 0; i < nx; ++i) faces.push_back({i, 0, label(0, i)});
  for (int j = 0; j < ny; ++j) faces.push_back({j * nx + nx - 1, 1, label(1, j)});
  for (int i = 0; i < nx; ++i) faces.push_back({(ny - 1) * nx + i, 2, label(2, i)});
  for (int j = 0; j < ny; ++j) faces.push_back({j * nx, 3, label(3, j)});
  return faces;
}

}  // namespace

Mesh::Mesh(Rect domain, int nx, int ny, std::vector<BoundaryFace> boundary_faces)
    : domain_(domain), nx_(nx), ny_(ny), boundary_faces_(std::move(boundary_faces)) {
  if (nx < 1 || ny < 1) {
    throw Error(ErrorKind::InvalidInput, "mesh needs nx >= 1 and ny >= 1");
  }
  if (!(domain.width() > 0.0) || !(domain.height() > 0.0)) {
    throw Error(ErrorKind::InvalidInput, "degenerate rectangle");
  }
  vertices_.reserve(static_cast<std::size_t>(nx + 1) * (ny + 1));
  for (int j = 0; j <= ny; ++j) {
    // Pin the last vertex to the exact upper bound so refinement preserves
    // the bounding box bit for bit.
    const double y = j == ny ? domain.y1 : domain.y0 + j * cell_height();
    for (int i = 0; i <= nx; ++i) {
      const double x = i == nx ? domain.x1 : domain.x0 + i * cell_width();
      vertices_.push_back({x, y});
    }
  }
  cells_.reserve(n_cells());
  for (int j = 0; j < ny; ++j) {
    for (int i = 0; i < nx; ++i) {
      const int v = j * (nx + 1) + i;
      cells_.push_back({v, v + 1, v + nx + 2, v + nx + 1});
    }
  }
}

double Mesh::h() const { return std::hypot(cell_width(), cell_height()); }

Point Mesh::cell_origin(int cell) const { return vertices_[cells_[cell][0]]; }

Rect Mesh::cell_rect(int cell) const {
  const Point lo = vertices_[cells_[cell][0]];
  const Point hi = vertices_[cells_[cell][2]];
  return {lo.x, hi.x, lo.y, hi.y};
}

Point Mesh::face_midpoint(int cell, int local_face) const {
  const Rect r = cell_rect(cell);
  const double xm = 0.5 * (r.x0 + r.x1);
  const double ym = 0.5 * (r.y0 + r.y1);
  switch (local_face) {
    case 0: return {xm, r.y0};
    case 1: return {r.x1, ym};
    case 2: return {xm, r.y1};
    default: return {r.x0, ym};
  }
}

Mesh build_rect_mesh(Rect domain, int nx, int ny, const DirichletPredicate& dirichlet) {
  if (nx < 1 || ny < 1) {
    throw Error(ErrorKind::InvalidInput, "mesh needs nx >= 1 and ny >= 1");
  }
  if (!(domain.width() > 0.0) || !(domain.height() > 0.0)) {
    throw Error(ErrorKind::InvalidInput, "degenerate rectangle");
  }
  const double hx = domain.width() / nx;
  const double hy = domain.height() / ny;
  auto label = [&](int side, int k) {
    Point m{};
    switch (side) {
      case 0: m = {domain.x0 + (k + 0.5) * hx, domain.y0}; break;
      case 1: m = {domain.x1, domain.y0 + (k + 0.5) * hy}; break;
      case 2: m = {domain.x0 + (k + 0.5) * hx, domain.y1}; break;
      default: m = {domain.x0, domain.y0 + (k + 0.5) * hy}; break;
    }
    return dirichlet(m) ? BoundaryLabel::Dirichlet : BoundaryLabel::Neumann;
  };
  return Mesh(domain, nx, ny, enumerate_boundary(nx, ny, label));
}

Mesh refine_uniform(const Mesh& mesh) {
  const int nx = mesh.nx();
  const int ny = mesh.ny();
  const auto& parent = mesh.boundary_faces();
  // Offsets of each side's run inside the parent face list.
  const int offset[4] = {0, nx, nx + ny, 2 * nx + ny};
  auto label = [&](int side, int k) { return parent[offset[side] + k / 2].label; };
  return Mesh(mesh.domain(), 2 * nx, 2 * ny, enumerate_boundary(2 * nx, 2 * ny, label));
}

}  // namespace wavegc
