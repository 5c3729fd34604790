#include <cmath>

#include <gtest/gtest.h>

#include "wavegc/error.hpp"
#include "wavegc/harness.hpp"
#include "wavegc_test_support.hpp"

using namespace wavegc;

namespace {

// u = t x1 + x2 solves u_tt = lap u and lies in every discrete space.
WaveProblem linear_problem() {
  WaveProblem p;
  p.name = "linear";
  p.domain = unit_square();
  p.final_time = 0.5;
  p.csq = [](Point) { return 1.0; };
  p.has_forcing = false;
  p.f = [](Point, double, int) { return 0.0; };
  auto u = [](Point x, double t, int s) { return s == 0 ? t * x.x + x.y : (s == 1 ? x.x : 0.0); };
  p.gu = u;
  p.u0 = [](Point x) { return x.y; };
  p.v0 = [](Point x) { return x.x; };
  p.dtv0 = p.dt2v0 = [](Point) { return 0.0; };
  p.dirichlet = all_dirichlet();
  ExactSolution e;
  e.u = u;
  e.terms = [](double t, ExactQuantity q) {
    auto one = [](double) { return 1.0; };
    auto id = [](double z) { return z; };
    switch (q) {
      case ExactQuantity::U:
        return std::vector<SeparableTerm>{{[t](double z) { return t * z; }, one}, {one, id}};
      case ExactQuantity::V:
        return std::vector<SeparableTerm>{{id, one}};
      case ExactQuantity::Ux:
        return std::vector<SeparableTerm>{{[t](double) { return t; }, one}};
      default:
        return std::vector<SeparableTerm>{{one, one}};
    }
  };
  p.exact = e;
  return p;
}

std::array<double, 6> run_norms(const WaveProblem& p, const FeSpace& s, Scheme scheme, double tau,
                                double density = 0.05) {
  ErrorAccumulator acc(s, p, density);
  SolverOptions o;
  o.rel_tol = 1e-13;
  run_simulation(p, s, scheme, o, tau, p.final_time, [&](const SlabCoeffs& slab) { acc.add(slab); });
  return acc.norms();
}

}  // namespace

TEST(Harness, EocTable) {
  std::vector<ErrorRow> rows(3);
  rows[0].tau = 1.0;
  rows[1].tau = 0.5;
  rows[2].tau = 0.25;
  for (int k = 0; k < 6; ++k) {
    rows[0].norms[k] = 1.0;
    rows[1].norms[k] = 1.0 / 16.0;
    rows[2].norms[k] = 1.0 / 1024.0;
  }
  const ErrorReport r = eoc_table(rows);
  for (int k = 0; k < 6; ++k) {
    EXPECT_TRUE(std::isnan(r.rows[0].eoc[k]));
    EXPECT_NEAR(r.rows[1].eoc[k], 4.0, 1e-14);
    EXPECT_NEAR(r.rows[2].eoc[k], 6.0, 1e-14);
  }
}

TEST(Harness, SlabCount) {
  EXPECT_EQ(slab_count(1.0, 0.1), 10);
  EXPECT_EQ(slab_count(1.0, 0.3), 4);
  EXPECT_EQ(slab_count(1.0, 0.1 / 16), 160);
  EXPECT_EQ(slab_count(0.01, 1.0), 1);
  EXPECT_THROW(slab_count(1.0, 0.0), Error);
  EXPECT_THROW(slab_count(-1.0, 0.1), Error);
}

TEST(Harness, ShortenedLastSlab) {
  const WaveProblem p = linear_problem();
  const FeSpace s = build_space(build_rect_mesh(p.domain, 2, 2, p.dirichlet), 1);
  const auto slabs = wavegc::testing::collect_slabs(p, s, Scheme::Gcc1, SolverOptions{}, 0.2, 0.5);
  ASSERT_EQ(slabs.size(), 3u);
  EXPECT_NEAR(slabs.back().tau, 0.1, 1e-15);
  EXPECT_NEAR(slabs.back().t_end(), 0.5, 1e-15);
}

TEST(Harness, DiscreteSolutionHasZeroError) {
  const WaveProblem p = linear_problem();
  const FeSpace s = build_space(build_rect_mesh(p.domain, 3, 3, p.dirichlet), 1);
  for (Scheme sc : {Scheme::Gcc1, Scheme::Gcc2, Scheme::Cgp2}) {
    const auto n = run_norms(p, s, sc, 0.1);
    for (int k = 0; k < 6; ++k) EXPECT_LE(n[k], 1e-10) << to_string(sc) << " " << kNormNames[k];
  }
}

TEST(Harness, NormConsistency) {
  const WaveProblem p = mms_u1();
  const FeSpace s = build_space(build_rect_mesh(p.domain, 2, 2, p.dirichlet), 2);
  const auto n = run_norms(p, s, Scheme::Gcc1, 0.1);
  const double root_t = std::sqrt(p.final_time);
  // L2 in time never exceeds sqrt(T) times the sampled maximum by more than the sampling gap.
  EXPECT_LE(n[kUL2], 1.05 * root_t * n[kULinf]);
  EXPECT_LE(n[kVL2], 1.05 * root_t * n[kVLinf]);
  EXPECT_GE(n[kELinf], n[kVLinf]);
  EXPECT_GE(n[kEL2], n[kVL2]);
  for (double v : n) EXPECT_GT(v, 0.0);
}

TEST(Harness, DeterministicRuns) {
  const WaveProblem p = mms_u2();
  const FeSpace s = build_space(build_rect_mesh(p.domain, 2, 2, p.dirichlet), 2);
  EXPECT_EQ(run_norms(p, s, Scheme::Gcc2, 0.1), run_norms(p, s, Scheme::Gcc2, 0.1));
}

TEST(Harness, AccumulatorNeedsExactSolution) {
  const WaveProblem p = shm_problem();
  const FeSpace s = build_space(build_rect_mesh(p.domain, 2, 2, p.dirichlet), 1);
  EXPECT_THROW(ErrorAccumulator(s, p), Error);
  const WaveProblem q = mms_u1();
  EXPECT_THROW(ErrorAccumulator(s, q, 0.0), Error);
}

TEST(Harness, ControlFunctional) {
  const double hc = 0.05;
  const Rect region{0.75 - hc, 0.75 + hc, -hc, hc};
  // The region straddles cell boundaries of this mesh.
  const FeSpace s = build_space(build_rect_mesh(Rect{-1, 1, -1, 1}, 7, 9, all_dirichlet()), 2);
  const ControlFunctional c = make_control_functional(s, region);
  EXPECT_FALSE(c.empty);
  EXPECT_NEAR(c.area, 4 * hc * hc, 1e-15);
  EXPECT_NEAR(c.apply(Vector::Ones(s.n_dofs())), 4 * hc * hc, 1e-15);
  EXPECT_NEAR(c.apply(interpolate(s, [](Point x) { return x.x; })), 0.75 * 4 * hc * hc, 1e-15);
  EXPECT_NEAR(c.apply(interpolate(s, [](Point x) { return x.y * x.y; })), 2 * hc * 2 * hc * hc * hc / 3, 1e-16);

  const ControlFunctional none = make_control_functional(s, Rect{2, 3, 2, 3});
  EXPECT_TRUE(none.empty);
}

TEST(Harness, ControlRecorderInterpolatesInTime) {
  const WaveProblem p = linear_problem();
  const FeSpace s = build_space(build_rect_mesh(p.domain, 2, 2, p.dirichlet), 1);
  const Rect region{0.25, 0.75, 0.0, 0.5};
  const std::vector<double> times = {0.0, 0.13, 0.25, 0.5};
  const auto slabs = wavegc::testing::collect_slabs(p, s, Scheme::Gcc1, SolverOptions{}, 0.1, 0.5);
  const auto values = control_quantity(slabs, s, region, times);
  // int (t x + y) over the region = 0.25 (0.5 t + 0.25).
  for (std::size_t i = 0; i < times.size(); ++i) EXPECT_NEAR(values[i], 0.25 * (0.5 * times[i] + 0.25), 1e-12);
}

TEST(Harness, RelativeDeviation) {
  const std::vector<double> ref = {1.0, 2.0, 3.0};
  EXPECT_EQ(relative_l2_deviation(ref, ref), 0.0);
  EXPECT_NEAR(relative_l2_deviation({2.0, 4.0, 6.0}, ref), 1.0, 1e-15);
  // Trapezoidal weights: only the middle sample differs.
  EXPECT_NEAR(relative_l2_deviation({1.0, 3.0, 3.0}, ref), std::sqrt(1.0 / (0.5 + 4.0 + 4.5)), 1e-15);
  EXPECT_THROW(relative_l2_deviation({1.0}, ref), Error);
}
