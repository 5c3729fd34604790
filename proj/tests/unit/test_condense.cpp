#include <cmath>
#include <complex>
#include <random>

#include <Eigen/Dense>
#include <gtest/gtest.h>

#include "wavegc/condense.hpp"
#include "wavegc/stepper_cgp2.hpp"
#include "wavegc/stepper_gcc1.hpp"
#include "wavegc/stepper_gcc2.hpp"
#include "wavegc_test_support.hpp"

using namespace wavegc;
using wavegc::testing::dense;

namespace {

struct FreePair {
  Eigen::MatrixXd m;
  Eigen::MatrixXd a;
};

FreePair free_pair(int n, int p) {
  const FeSpace s = build_space(build_rect_mesh(unit_square(), n, n, [](Point x) { return x.y < 1e-12; }), p);
  const auto& free = s.free_dofs();
  const Eigen::MatrixXd mf = dense(assemble_mass(s));
  const Eigen::MatrixXd af = dense(assemble_stiffness(s, [](Point) { return 1.0; }));
  const int k = static_cast<int>(free.size());
  FreePair out{Eigen::MatrixXd(k, k), Eigen::MatrixXd(k, k)};
  for (int i = 0; i < k; ++i)
    for (int j = 0; j < k; ++j) {
      out.m(i, j) = mf(free[i], free[j]);
      out.a(i, j) = af(free[i], free[j]);
    }
  return out;
}

Eigen::MatrixXd dense_block(const std::vector<BlockCoeff>& blocks, int n, const Eigen::MatrixXd& m,
                            const Eigen::MatrixXd& a) {
  const Eigen::Index k = m.rows();
  Eigen::MatrixXd out(n * k, n * k);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      const BlockCoeff& b = blocks[i * n + j];
      out.block(i * k, j * k, k, k) = b.m * m + b.a * a;
    }
  return out;
}

Vector random_vector(Eigen::Index n, unsigned seed) {
  std::mt19937 gen(seed);
  std::normal_distribution<double> g;
  Vector v(n);
  for (Eigen::Index i = 0; i < n; ++i) v[i] = g(gen);
  return v;
}

}  // namespace

TEST(Polynomials, Arithmetic) {
  const Polynomial a = {1, 2};
  const Polynomial b = {0, 1, 3};
  EXPECT_EQ(poly_mul(a, b), (Polynomial{0, 1, 5, 6}));
  EXPECT_EQ(poly_add(a, b), (Polynomial{1, 3, 3}));
  EXPECT_EQ(poly_scale(b, 2.0), (Polynomial{0, 2, 6}));
  EXPECT_EQ(poly_eval(b, 2.0), 14.0);
  const auto z = poly_eval(a, std::complex<double>(0, 1));
  EXPECT_EQ(z, std::complex<double>(1, 2));
}

TEST(Polynomials, Roots) {
  // (z - 1)(z + 2)(z^2 + 1)
  const Polynomial p = poly_mul(poly_mul(Polynomial{-1, 1}, Polynomial{2, 1}), Polynomial{1, 0, 1});
  auto r = poly_roots(p);
  ASSERT_EQ(r.size(), 4u);
  for (const auto& z : r) EXPECT_LE(std::abs(poly_eval(p, z)), 1e-12);
}

TEST(Condense, Gcc1CoefficientsMatchPrintedCondensedSystem) {
  for (double tau : {1.0, 0.1, 0.37}) {
    const Condensation c = condense(Gcc1Stepper::block_pattern(tau), 4, 2, 1.0);
    ASSERT_EQ(c.det.size(), 3u);
    EXPECT_DOUBLE_EQ(c.det[0], 1.0);
    EXPECT_DOUBLE_EQ(c.det[1], tau * tau / 12.0);
    EXPECT_DOUBLE_EQ(c.det[2], std::pow(tau, 4) / 144.0);
  }
}

TEST(Condense, Gcc2CoefficientsMatchPrintedCondensedSystem) {
  const Condensation c = condense(Gcc2Stepper::block_pattern(1.0), 4, 1, 14400.0);
  ASSERT_EQ(c.det.size(), 4u);
  EXPECT_DOUBLE_EQ(c.det[0], 14400.0);
  EXPECT_DOUBLE_EQ(c.det[1], 720.0);
  EXPECT_DOUBLE_EQ(c.det[2], 24.0);
  EXPECT_DOUBLE_EQ(c.det[3], 1.0);
  EXPECT_NEAR(poly_eval(c.det, 1.0), 15145.0, 1e-9);
  const double tau = 0.2;
  const Condensation d = condense(Gcc2Stepper::block_pattern(tau), 4, 1, 14400.0);
  EXPECT_NEAR(d.det[1], 720.0 * tau * tau, 1e-12);
  EXPECT_NEAR(d.det[2], 24.0 * std::pow(tau, 4), 1e-14);
  EXPECT_NEAR(d.det[3], std::pow(tau, 6), 1e-16);
}

TEST(Condense, ZeroStiffnessLeavesScaledMass) {
  // With A = 0 only det[0] contributes: S_r = leading * M.
  const FreePair fp = free_pair(2, 2);
  const Eigen::MatrixXd zero = Eigen::MatrixXd::Zero(fp.m.rows(), fp.m.cols());
  const Condensation c = condense(Gcc2Stepper::block_pattern(0.1), 4, 1, 14400.0);
  EXPECT_LE((dense_condensed_matrix(c.det, fp.m, zero) - 14400.0 * fp.m).norm(), 1e-9);
}

TEST(Condense, RetainedUnknownMatchesDenseBlockSolve) {
  const FreePair fp = free_pair(2, 2);
  const SparseMatrix ms = fp.m.sparseView();
  const SparseMatrix as = fp.a.sparseView();
  const SpdSolver minv(ms);
  const Eigen::Index k = fp.m.rows();
  struct Case {
    std::vector<BlockCoeff> blocks;
    int retained;
    double leading;
  };
  const double tau = 0.15;
  const std::vector<Case> cases = {{Gcc1Stepper::block_pattern(tau), 2, 1.0},
                                   {Gcc2Stepper::block_pattern(tau), 1, 14400.0},
                                   {Cgp2Stepper::block_pattern(tau), 1, 1.0}};
  for (const Case& cs : cases) {
    std::vector<Vector> rhs;
    for (unsigned j = 0; j < 4; ++j) rhs.push_back(random_vector(k, 10 + j));
    Vector stacked(4 * k);
    for (int j = 0; j < 4; ++j) stacked.segment(j * k, k) = rhs[j];
    const Vector x = dense_block(cs.blocks, 4, fp.m, fp.a).lu().solve(stacked);
    const Vector want = x.segment(cs.retained * k, k);

    const Condensation c = condense(cs.blocks, 4, cs.retained, cs.leading);
    const Vector br = condensed_rhs(c, rhs, as, minv);
    const Eigen::MatrixXd sr = dense_condensed_matrix(c.det, fp.m, fp.a);
    EXPECT_LE((sr - sr.transpose()).norm(), 1e-10 * sr.norm());
    const Vector got = sr.lu().solve(br);
    EXPECT_LE((got - want).norm(), 1e-10 * want.norm());

    // Matrix-free operator agrees with the dense one.
    const CondensedOperator op(c.det, std::make_shared<const SparseMatrix>(ms), std::make_shared<const SparseMatrix>(as),
                               &minv);
    Vector y(k);
    op.apply(got, y);
    EXPECT_LE((y - br).norm(), 1e-10 * br.norm());

    // Partial fractions give the same solution.
    const PartialFractionSolver pf(c.det, ms, as);
    EXPECT_LE((pf.solve(br) - want).norm(), 1e-9 * want.norm());
  }
}

TEST(Condense, BlockMatrixAssembly) {
  const FreePair fp = free_pair(2, 1);
  const double tau = 0.3;
  BlockSystem sys;
  sys.n = 4;
  sys.blocks = Gcc1Stepper::block_pattern(tau);
  const SparseMatrix big = assemble_block_matrix(sys, SparseMatrix(fp.m.sparseView()), SparseMatrix(fp.a.sparseView()));
  EXPECT_LE((dense(big) - dense_block(sys.blocks, 4, fp.m, fp.a)).norm(), 1e-15);
}
