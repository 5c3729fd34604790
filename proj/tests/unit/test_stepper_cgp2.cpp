#include <cmath>

#include <Eigen/Dense>
#include <gtest/gtest.h>

#include "wavegc/stepper_cgp2.hpp"
#include "wavegc_test_support.hpp"

using namespace wavegc;
using wavegc::testing::rel_diff;

namespace {

struct Discretised {
  WaveProblem problem;
  FeSpace space;
  SemiDiscrete sd;
  Discretised(WaveProblem p, int n, int deg)
      : problem(std::move(p)),
        space(build_space(build_rect_mesh(problem.domain, n, n, problem.dirichlet), deg)),
        sd(problem, space) {}
};

SlabCoeffs one_step(const SemiDiscrete& sd, SolverStrategy strategy, double tau) {
  SolverOptions o;
  o.strategy = strategy;
  o.rel_tol = 1e-13;
  auto st = make_stepper(Scheme::Cgp2, sd, o);
  return st->solve(st->init_state(tau), 1, tau);
}

}  // namespace

TEST(Cgp2, QuadraticMotionIsExact) {
  // Scalar M = 1, A = 0, u'' = c. Unknowns (u1, u2, v1, v2) at t = tau/2, tau.
  const double tau = 0.3, u0 = 0.4, v0 = -0.8, c = 3.0;
  const auto b = Cgp2Stepper::block_pattern(tau);
  Eigen::Matrix4d k;
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) k(i, j) = b[i * 4 + j].m;
  // Rows: u-eq psi_1, u-eq psi_0, v-eq psi_1, v-eq psi_0 (see the stepper).
  const Eigen::Vector4d rhs(-2.0 / 3.0 * u0 - tau / 6.0 * v0, u0 + tau / 6.0 * v0, -2.0 / 3.0 * v0, tau * c + v0);
  const Eigen::Vector4d x = k.lu().solve(rhs);
  EXPECT_NEAR(x[0], u0 + v0 * tau / 2 + c * tau * tau / 8, 1e-14);
  EXPECT_NEAR(x[1], u0 + v0 * tau + c * tau * tau / 2, 1e-14);
  EXPECT_NEAR(x[2], v0 + c * tau / 2, 1e-14);
  EXPECT_NEAR(x[3], v0 + c * tau, 1e-14);
}

TEST(Cgp2, StrategiesAgree) {
  const Discretised s(mms_u2(), 3, 2);
  const double tau = 0.05;
  const SlabCoeffs ref = one_step(s.sd, SolverStrategy::BlockDirect, tau);
  for (auto st : {SolverStrategy::Condensed, SolverStrategy::CondensedDirect, SolverStrategy::BlockGmres}) {
    const SlabCoeffs got = one_step(s.sd, st, tau);
    for (int i = 0; i < 3; ++i) {
      EXPECT_LE(rel_diff(got.u[i], ref.u[i]), 1e-8) << to_string(st) << " u" << i;
      EXPECT_LE(rel_diff(got.v[i], ref.v[i]), 1e-8) << to_string(st) << " v" << i;
    }
  }
}

TEST(Cgp2, ContinuousButNotDifferentiable) {
  const Discretised s(mms_u2(), 2, 2);
  SolverOptions o;
  o.rel_tol = 1e-12;
  const auto slabs = wavegc::testing::collect_slabs(s.problem, s.space, Scheme::Cgp2, o, 0.05, 0.5);
  ASSERT_EQ(slabs.size(), 10u);
  double jump = 0.0;
  for (std::size_t n = 1; n < slabs.size(); ++n) {
    const double t = slabs[n].t_start;
    for (Field f : {Field::U, Field::V}) {
      const Vector l = slab_eval(slabs[n - 1], f, t);
      EXPECT_LE((l - slab_eval(slabs[n], f, t)).norm(), 1e-12 * std::max(1.0, l.norm()));
      jump = std::max(jump, (slab_eval(slabs[n - 1], f, t, 1) - slab_eval(slabs[n], f, t, 1)).norm());
    }
  }
  EXPECT_GT(jump, 1e-6);
}

TEST(Cgp2, NodalSuperconvergence) {
  const wavegc::testing::ScalarOscillator osc(2.0 * M_PI);
  const double e1 = osc.nodal_error(Scheme::Cgp2, 0.05, 1.0);
  const double e2 = osc.nodal_error(Scheme::Cgp2, 0.025, 1.0);
  EXPECT_NEAR(std::log2(e1 / e2), 4.0, 0.1);
}
