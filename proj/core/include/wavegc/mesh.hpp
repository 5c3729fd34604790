#pragma once

#include <array>
#include <cstddef>
#include <functional>
#include <vector>

#include "wavegc/geometry.hpp"

namespace wavegc {

enum class BoundaryLabel { Dirichlet, Neumann };

/// Local face numbering of a cell: 0 bottom, 1 right, 2 top, 3 left.
struct BoundaryFace {
  int cell = 0;
  int local_face = 0;
  BoundaryLabel label = BoundaryLabel::Dirichlet;
};

using DirichletPredicate = std::function<bool(Point)>;

/// Structured quadrilateral mesh of a rectangle. Cells are numbered
/// lexicographically (x fastest), vertices likewise; each cell lists its
/// vertices counter-clockwise starting at the lower-left corner.
class Mesh {
 public:
  Mesh(Rect domain, int nx, int ny, std::vector<BoundaryFace> boundary_faces);

  const Rect& domain() const { return domain_; }
  int nx() const { return nx_; }
  int ny() const { return ny_; }
  std::size_t n_cells() const { return static_cast<std::size_t>(nx_) * ny_; }
  std::size_t n_vertices() const { return vertices_.size(); }

  double cell_width() const { return domain_.width() / nx_; }
  double cell_height() const { return domain_.height() / ny_; }
  /// Maximum cell diagonal.
  double h() const;

  const std::vector<Point>& vertices() const { return vertices_; }
  const std::vector<std::array<int, 4>>& cells() const { return cells_; }
  const std::vector<BoundaryFace>& boundary_faces() const { return boundary_faces_; }

  int cell_index(int i, int j) const { return j * nx_ + i; }
  std::array<int, 2> cell_ij(int cell) const { return {cell % nx_, cell / nx_}; }
  Point cell_origin(int cell) const;
  Rect cell_rect(int cell) const;
  Point face_midpoint(int cell, int local_face) const;

 private:
  Rect domain_;
  int nx_;
  int ny_;
  std::vector<Point> vertices_;
  std::vector<std::array<int, 4>> cells_;
  std::vector<BoundaryFace> boundary_faces_;
};

/// Boundary faces are labelled Dirichlet where `dirichlet` holds at the face
/// midpoint and Neumann elsewhere.
Mesh build_rect_mesh(Rect domain, int nx, int ny, const DirichletPredicate& dirichlet);

/// Splits every cell into four; child boundary faces inherit the parent label.
Mesh refine_uniform(const Mesh& mesh);

inline DirichletPredicate all_dirichlet() {
  return [](Point) { return true; };
}

}  // namespace wavegc
