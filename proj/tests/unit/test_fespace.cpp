#include <array>
#include <cmath>
#include <limits>

#include <Eigen/Eigenvalues>
#include <gtest/gtest.h>

#include "wavegc/error.hpp"
#include "wavegc/fespace.hpp"
#include "wavegc/problem.hpp"
#include "wavegc_test_support.hpp"

using namespace wavegc;
using wavegc::testing::dense;

namespace {

FeSpace unit_cell(int p) { return build_space(build_rect_mesh(unit_square(), 1, 1, all_dirichlet()), p); }

// Lattice numbering is x-fastest; the analytic matrices list the corners
// counter-clockwise from the origin.
constexpr std::array<int, 4> kCcw = {0, 1, 3, 2};

Eigen::MatrixXd ccw(const SparseMatrix& m) {
  const Eigen::MatrixXd d = dense(m);
  Eigen::MatrixXd out(4, 4);
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) out(i, j) = d(kCcw[i], kCcw[j]);
  return out;
}

}  // namespace

TEST(FeSpace, DofCounts) {
  EXPECT_EQ(unit_cell(1).n_dofs(), 4);
  const Mesh m4 = build_rect_mesh(unit_square(), 4, 4, all_dirichlet());
  EXPECT_EQ(build_space(m4, 3).n_dofs(), 169);
  const FeSpace s = build_space(build_rect_mesh(unit_square(), 2, 2, all_dirichlet()), 1);
  EXPECT_EQ(s.dirichlet_dofs().size(), 8u);
  ASSERT_EQ(s.free_dofs().size(), 1u);
  EXPECT_EQ(s.free_dofs()[0], 4);
}

TEST(FeSpace, PartitionAndConformity) {
  const Mesh m = build_rect_mesh(unit_square(), 3, 2, [](Point p) { return p.x < 1e-12; });
  const FeSpace s = build_space(m, 2);
  EXPECT_EQ(s.n_dofs(), (2 * 3 + 1) * (2 * 2 + 1));
  EXPECT_EQ(s.dirichlet_dofs().size() + s.free_dofs().size(), static_cast<std::size_t>(s.n_dofs()));
  for (int d : s.dirichlet_dofs()) EXPECT_NEAR(s.dof_coords()[d].x, 0.0, 1e-14);
  // Cells 0 and 1 share their common edge nodes.
  const auto c0 = s.cell_dofs(0);
  const auto c1 = s.cell_dofs(1);
  for (int j = 0; j <= 2; ++j) EXPECT_EQ(c0[j * 3 + 2], c1[j * 3 + 0]);
}

TEST(FeSpace, Q1MassMatchesAnalytic) {
  Eigen::Matrix4d expected;
  expected << 4, 2, 1, 2, 2, 4, 2, 1, 1, 2, 4, 2, 2, 1, 2, 4;
  expected /= 36.0;
  EXPECT_LE((ccw(assemble_mass(unit_cell(1))) - expected).cwiseAbs().maxCoeff(), 1e-14);
}

TEST(FeSpace, Q1StiffnessMatchesAnalytic) {
  Eigen::Matrix4d expected;
  expected << 4, -1, -2, -1, -1, 4, -1, -2, -2, -1, 4, -1, -1, -2, -1, 4;
  expected /= 6.0;
  const SparseMatrix a = assemble_stiffness(unit_cell(1), [](Point) { return 1.0; });
  EXPECT_LE((ccw(a) - expected).cwiseAbs().maxCoeff(), 1e-14);
}

TEST(FeSpace, MassSumsToArea) {
  for (int p : {1, 2, 3, 5}) {
    const Rect d{-1, 1, -0.5, 1};
    const FeSpace s = build_space(build_rect_mesh(d, 3, 4, all_dirichlet()), p);
    EXPECT_NEAR(dense(assemble_mass(s)).sum(), d.area(), 1e-13) << "p=" << p;
  }
}

TEST(FeSpace, StiffnessKillsConstants) {
  const FeSpace s = build_space(build_rect_mesh(unit_square(), 3, 3, all_dirichlet()), 3);
  const SparseMatrix a = assemble_stiffness(s, [](Point p) { return 1.0 + p.x * p.y; });
  EXPECT_LE((a * Vector::Ones(s.n_dofs())).cwiseAbs().maxCoeff(), 1e-12);
}

TEST(FeSpace, MassSpdAndFreeStiffnessSpd) {
  const FeSpace s = build_space(build_rect_mesh(unit_square(), 2, 2, all_dirichlet()), 1);
  const Eigen::MatrixXd m = dense(assemble_mass(s));
  EXPECT_LE((m - m.transpose()).cwiseAbs().maxCoeff(), 0.0);
  EXPECT_GT(Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(m).eigenvalues().minCoeff(), 0.0);

  const FeSpace s3 = build_space(build_rect_mesh(unit_square(), 3, 3, all_dirichlet()), 2);
  const Eigen::MatrixXd a = dense(assemble_stiffness(s3, [](Point) { return 1.0; }));
  EXPECT_LE((a - a.transpose()).cwiseAbs().maxCoeff(), 1e-15);
  const Eigen::VectorXd ev = Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(a).eigenvalues();
  EXPECT_GT(ev.minCoeff(), -1e-12);
  const auto& free = s3.free_dofs();
  Eigen::MatrixXd aff(free.size(), free.size());
  for (std::size_t i = 0; i < free.size(); ++i)
    for (std::size_t j = 0; j < free.size(); ++j) aff(i, j) = a(free[i], free[j]);
  EXPECT_GT(Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(aff).eigenvalues().minCoeff(), 0.0);
}

TEST(FeSpace, QuadratureOrderInvariance) {
  const FeSpace s = build_space(build_rect_mesh(unit_square(), 2, 3, all_dirichlet()), 3);
  const int q = default_quadrature_points(3);
  EXPECT_EQ(q, 5);
  const Eigen::MatrixXd m0 = dense(assemble_mass(s));
  const Eigen::MatrixXd m1 = dense(assemble_mass(s, q + 1));
  EXPECT_LE((m0 - m1).norm(), 1e-14 * m0.norm());
  auto one = [](Point) { return 1.0; };
  const Eigen::MatrixXd a0 = dense(assemble_stiffness(s, one));
  const Eigen::MatrixXd a1 = dense(assemble_stiffness(s, one, q + 1));
  EXPECT_LE((a0 - a1).norm(), 1e-14 * a0.norm());
}

TEST(FeSpace, NonpositiveCoefficientRejected) {
  try {
    assemble_stiffness(unit_cell(2), [](Point p) { return p.x - 0.5; });
    FAIL() << "expected an error";
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::InvalidCoefficient);
  }
}

TEST(FeSpace, ShmCoefficientSplitAssembly) {
  const WaveProblem shm = shm_problem(0.05);
  const Mesh m = build_rect_mesh(shm.domain, 10, 10, all_dirichlet());
  const FeSpace s = build_space(m, 2);
  auto lower = [&](int c) { return m.cell_rect(c).y1 <= 0.2 + 1e-12; };
  auto upper = [&](int c) { return !lower(c); };
  auto one = [](Point) { return 1.0; };
  const Eigen::MatrixXd full = dense(assemble_stiffness(s, shm.csq));
  const Eigen::MatrixXd split =
      dense(assemble_stiffness(s, one, 0, lower)) + 81.0 * dense(assemble_stiffness(s, one, 0, upper));
  EXPECT_LE((full - split).norm(), 1e-12 * full.norm());
}

TEST(FeSpace, InterpolateBasics) {
  const FeSpace s = build_space(build_rect_mesh(unit_square(), 2, 2, all_dirichlet()), 1);
  EXPECT_EQ(interpolate(s, [](Point) { return 0.0; }).norm(), 0.0);
  const Vector x = interpolate(s, [](Point p) { return p.x; });
  for (int i = 0; i < s.n_dofs(); ++i) EXPECT_EQ(x[i], s.dof_coords()[i].x);
  try {
    interpolate(s, [](Point) { return std::numeric_limits<double>::quiet_NaN(); });
    FAIL() << "expected an error";
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::InvalidData);
  }
}

TEST(FeSpace, InterpolateReproducesMmsSpatialFactor) {
  const WaveProblem p = mms_u1();
  const FeSpace s = build_space(build_rect_mesh(unit_square(), 4, 4, all_dirichlet()), 3);
  const double t = 0.125;
  const Vector w = interpolate(s, [&](Point x) { return p.exact->u(x, t, 0); });
  // L2 difference by fine quadrature through the field sampler.
  FieldSampler sampler(s, 7);
  Vector vals;
  sampler.values(w, vals);
  double err2 = 0.0;
  for (int iy = 0; iy < static_cast<int>(sampler.ys().size()); ++iy)
    for (int ix = 0; ix < static_cast<int>(sampler.xs().size()); ++ix) {
      const int k = iy * static_cast<int>(sampler.xs().size()) + ix;
      const double d = vals[k] - p.exact->u(Point{sampler.xs()[ix], sampler.ys()[iy]}, t, 0);
      err2 += sampler.weights()[k] * d * d;
    }
  EXPECT_LT(std::sqrt(err2), 1e-14);
}

TEST(FeSpace, InterpolationReproducesQp) {
  for (auto placement : {NodePlacement::Equispaced, NodePlacement::GaussLobatto}) {
    const FeSpace s = build_space(build_rect_mesh(Rect{0, 2, -1, 1}, 2, 3, all_dirichlet()), 3, placement);
    auto q3 = [](Point p) { return std::pow(p.x, 3) * p.y * p.y - 2.0 * p.x * std::pow(p.y, 3) + 0.5; };
    const Vector w = interpolate(s, q3);
    const std::vector<Point> pts = {{0.1, 0.3}, {1.7, -0.9}, {0.55, 0.05}, {2.0, 1.0}};
    const auto vals = eval_field(s, w, pts);
    for (std::size_t i = 0; i < pts.size(); ++i) EXPECT_NEAR(vals[i], q3(pts[i]), 1e-13);
  }
}

TEST(FeSpace, EvalFieldNodalBasis) {
  const FeSpace s = build_space(build_rect_mesh(unit_square(), 2, 2, all_dirichlet()), 2);
  const std::vector<Point> where = {{0.3, 0.7}};
  EXPECT_NEAR(eval_field(s, Vector::Constant(s.n_dofs(), 2.5), where)[0], 2.5, 1e-14);
  const int j = 7;
  Vector e = Vector::Zero(s.n_dofs());
  e[j] = 1.0;
  const std::vector<Point> own = {s.dof_coords()[j], s.dof_coords()[j + 1]};
  const auto v = eval_field(s, e, own);
  EXPECT_NEAR(v[0], 1.0, 1e-14);
  EXPECT_NEAR(v[1], 0.0, 1e-14);
  const std::vector<Point> outside = {{1.5, 0.5}};
  try {
    eval_field(s, e, outside);
    FAIL() << "expected an error";
  } catch (const Error& err) {
    EXPECT_EQ(err.kind(), ErrorKind::OutOfDomain);
  }
}

TEST(FeSpace, Norms) {
  const FeSpace s = build_space(build_rect_mesh(unit_square(), 3, 3, all_dirichlet()), 2);
  EXPECT_EQ(l2_norm(s, Vector::Zero(s.n_dofs())), 0.0);
  EXPECT_NEAR(l2_norm(s, Vector::Ones(s.n_dofs())), 1.0, 1e-14);
  EXPECT_NEAR(h1_seminorm(s, interpolate(s, [](Point p) { return p.x; })), 1.0, 1e-14);
}
