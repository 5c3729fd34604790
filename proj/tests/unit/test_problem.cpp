#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "wavegc/error.hpp"
#include "wavegc/problem.hpp"

using namespace wavegc;

namespace {

// Fourth-order centred Laplacian; truncation ~1e-12, roundoff ~1e-9.
double laplacian(const SpaceTimeField& u, Point x, double t) {
  const double h = 1e-3;
  auto d2 = [&](double dx, double dy) {
    auto at = [&](double k) { return u({x.x + k * dx, x.y + k * dy}, t, 0); };
    return (-at(2) + 16 * at(1) - 30 * at(0) + 16 * at(-1) - at(-2)) / (12 * h * h);
  };
  return d2(h, 0) + d2(0, h);
}

void check_strong_residual(const WaveProblem& p) {
  std::mt19937 gen(17);
  std::uniform_real_distribution<double> ux(0.01, 0.99), ut(0.0, 1.0);
  for (int i = 0; i < 100; ++i) {
    const Point x{ux(gen), ux(gen)};
    const double t = ut(gen);
    const double r = p.exact->u(x, t, 2) - p.csq(x) * laplacian(p.exact->u, x, t) - p.f(x, t, 0);
    EXPECT_NEAR(r, 0.0, 1e-8) << "x=(" << x.x << "," << x.y << ") t=" << t;
  }
}

}  // namespace

TEST(MmsU1, Values) {
  const WaveProblem p = mms_u1();
  EXPECT_NEAR(p.exact->u({0.5, 0.5}, 0.125, 0), 0.0625, 1e-15);
  for (double t : {0.0, 0.3, 0.77})
    for (double s : {0.0, 0.25, 1.0}) {
      EXPECT_EQ(p.exact->u({0.0, s}, t, 0), 0.0);
      EXPECT_EQ(p.exact->u({s, 1.0}, t, 0), 0.0);
    }
  EXPECT_NEAR(p.f({0.5, 0.5}, 0.0, 0), 0.0, 1e-14);
  EXPECT_EQ(p.csq({0.3, 0.3}), 1.0);
}

TEST(MmsU1, StrongFormResidual) { check_strong_residual(mms_u1()); }

TEST(MmsU1, ForcingIdentityExact) {
  // u = S(t) P(x) with P = x(x-1)y(y-1): lap P = 2[y(y-1) + x(x-1)].
  const WaveProblem p = mms_u1();
  const double w = 4 * M_PI;
  for (double t : {0.1, 0.4, 0.9}) {
    const Point x{0.3, 0.8};
    const double P = x.x * (x.x - 1) * x.y * (x.y - 1);
    const double lap = 2 * (x.y * (x.y - 1) + x.x * (x.x - 1));
    EXPECT_NEAR(p.f(x, t, 0), -w * w * std::sin(w * t) * P - std::sin(w * t) * lap, 1e-12);
  }
}

TEST(MmsU2, Values) {
  const WaveProblem p = mms_u2();
  for (double x1 : {0.0, 0.4, 1.0}) EXPECT_NEAR(p.exact->u({x1, 0.6}, 0.0, 0), 0.0, 1e-16);
  const Point x{0.3, 0.7};
  EXPECT_NEAR(p.exact->u(x, 0.0, 1), std::sin(0.3) * 2 * M_PI * 0.7, 1e-14);
  EXPECT_NEAR(p.v0(x), std::sin(0.3) * 2 * M_PI * 0.7, 1e-14);
  EXPECT_NE(p.gu({0.0, 0.5}, 0.3, 0), 0.0);
  EXPECT_EQ(p.gu({0.0, 0.5}, 0.3, 0), p.exact->u({0.0, 0.5}, 0.3, 0));
}

TEST(MmsU2, StrongFormResidual) { check_strong_residual(mms_u2()); }

TEST(MmsU2, InitialDerivativeData) {
  const WaveProblem p = mms_u2();
  for (Point x : {Point{0.2, 0.9}, Point{0.6, 0.1}}) {
    EXPECT_NEAR(p.dtv0(x), p.exact->u(x, 0.0, 2), 1e-12);
    EXPECT_NEAR(p.dt2v0(x), p.exact->u(x, 0.0, 3), 1e-10);
  }
}

TEST(Problems, TimeDerivativeConsistency) {
  EXPECT_NO_THROW(check_time_derivatives(mms_u1()));
  EXPECT_NO_THROW(check_time_derivatives(mms_u2()));
  WaveProblem broken = mms_u2();
  broken.f = [](Point x, double t, int s) { return s == 0 ? x.x * t : 0.0; };
  try {
    check_time_derivatives(broken);
    FAIL() << "expected an error";
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::InvalidData);
  }
}

TEST(Shm, Data) {
  const WaveProblem p = shm_problem(0.05);
  EXPECT_NEAR(p.u0({0.0, 0.0}), 1.0, 1e-15);
  EXPECT_EQ(p.u0({0.01, 0.0}), 0.0);
  EXPECT_EQ(p.u0({0.2, -0.3}), 0.0);
  EXPECT_EQ(p.csq({0.0, 0.5}), 81.0);
  EXPECT_EQ(p.csq({0.0, 0.1}), 1.0);
  EXPECT_EQ(p.v0({0.001, 0.0}), 0.0);
  EXPECT_FALSE(p.has_forcing);
  ASSERT_TRUE(p.control_region.has_value());
  EXPECT_NEAR(p.control_region->x0, 0.70, 1e-15);
  EXPECT_NEAR(p.control_region->x1, 0.80, 1e-15);
  EXPECT_NEAR(p.control_region->y0, -0.05, 1e-15);
  EXPECT_NEAR(p.control_region->y1, 0.05, 1e-15);
  EXPECT_EQ(p.domain.x0, -1.0);
  EXPECT_EQ(p.domain.y1, 1.0);
}

TEST(Shm, InitialAccelerationIsLaplacian) {
  const WaveProblem p = shm_problem(0.05);
  // c = 1 near the source; compare c^2 lap u0 with a centred difference.
  for (Point x : {Point{0.002, 0.001}, Point{-0.004, 0.003}}) {
    const double h = 1e-6;
    const double lap = (p.u0({x.x + h, x.y}) + p.u0({x.x - h, x.y}) + p.u0({x.x, x.y + h}) + p.u0({x.x, x.y - h}) -
                        4 * p.u0(x)) /
                       (h * h);
    EXPECT_NEAR(p.dtv0(x), lap, 1e-4 * std::abs(lap));
  }
  EXPECT_EQ(p.dtv0({0.5, 0.5}), 0.0);
}

TEST(Shm, ControlWidthRange) {
  for (double hc : {0.0, -0.1, 0.25, 0.3}) {
    try {
      shm_problem(hc);
      FAIL() << "hc=" << hc;
    } catch (const Error& e) {
      EXPECT_EQ(e.kind(), ErrorKind::InvalidInput);
    }
  }
}

TEST(Problems, ByName) {
  EXPECT_EQ(problem_by_name("mms_u1").name, "mms_u1");
  EXPECT_EQ(problem_by_name("mms_u2").name, "mms_u2");
  EXPECT_NEAR(problem_by_name("shm", 0.1).control_region->x1, 0.85, 1e-15);
  EXPECT_THROW(problem_by_name("nope"), Error);
}
