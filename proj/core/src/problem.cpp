#include "wavegc/problem.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "wavegc/error.hpp"

namespace wavegc {

namespace {

constexpr double kPi = std::numbers::pi;

double binomial(int n, int k) {
  double r = 1.0;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

// d^n/dt^n sin(w t + phase)
double dsin(double w, double t, double phase, int n) {
  return std::pow(w, n) * std::sin(w * t + phase + 0.5 * n * kPi);
}

}  // namespace

void eval_separable(const std::vector<SeparableTerm>& terms, const std::vector<double>& xs,
                    const std::vector<double>& ys, std::vector<double>& out) {
  const std::size_t nx = xs.size();
  out.assign(nx * ys.size(), 0.0);
  std::vector<double> fx(nx);
  for (const auto& term : terms) {
    for (std::size_t i = 0; i < nx; ++i) fx[i] = term.fx(xs[i]);
    for (std::size_t j = 0; j < ys.size(); ++j) {
      const double fy = term.fy(ys[j]);
      if (fy == 0.0) continue;
      double* row = out.data() + j * nx;
      for (std::size_t i = 0; i < nx; ++i) row[i] += fx[i] * fy;
    }
  }
}

WaveProblem mms_u1() {
  WaveProblem p;
  p.name = "mms_u1";
  p.domain = unit_square();
  p.final_time = 1.0;
  const double w = 4.0 * kPi;
  auto time = [w](double t, int n) { return dsin(w, t, 0.0, n); };
  auto shape = [](Point x) { return x.x * (x.x - 1.0) * x.y * (x.y - 1.0); };
  auto lap_shape = [](Point x) { return 2.0 * x.y * (x.y - 1.0) + 2.0 * x.x * (x.x - 1.0); };

  p.csq = [](Point) { return 1.0; };
  p.f = [=](Point x, double t, int s) { return time(t, s + 2) * shape(x) - time(t, s) * lap_shape(x); };
  p.gu = [](Point, double, int) { return 0.0; };
  p.has_boundary_data = false;
  p.u0 = [=](Point x) { return time(0.0, 0) * shape(x); };
  p.v0 = [=](Point x) { return time(0.0, 1) * shape(x); };
  p.dtv0 = [=](Point x) { return time(0.0, 2) * shape(x); };
  p.dt2v0 = [=](Point x) { return time(0.0, 3) * shape(x); };
  p.dirichlet = all_dirichlet();

  ExactSolution exact;
  exact.u = [=](Point x, double t, int s) { return time(t, s) * shape(x); };
  exact.terms = [=](double t, ExactQuantity q) {
    auto bubble = [](double z) { return z * (z - 1.0); };
    auto dbubble = [](double z) { return 2.0 * z - 1.0; };
    const double a = time(t, q == ExactQuantity::V ? 1 : 0);
    auto scaled = [a](auto g) { return [a, g](double z) { return a * g(z); }; };
    switch (q) {
      case ExactQuantity::Ux:
        return std::vector<SeparableTerm>{{scaled(dbubble), bubble}};
      case ExactQuantity::Uy:
        return std::vector<SeparableTerm>{{scaled(bubble), dbubble}};
      default:
        return std::vector<SeparableTerm>{{scaled(bubble), bubble}};
    }
  };
  p.exact = exact;
  check_time_derivatives(p);
  return p;
}

WaveProblem mms_u2() {
  WaveProblem p;
  p.name = "mms_u2";
  p.domain = unit_square();
  p.final_time = 1.0;
  const double w = 2.0 * kPi;
  // u = a(t, x1) b(t, x2); a = sin(w t + x1), b = sin(w t x2).
  auto a = [w](double t, double x1, int n) { return dsin(w, t, x1, n); };
  auto b = [w](double t, double x2, int n) { return dsin(w * x2, t, 0.0, n); };
  auto u = [=](Point x, double t, int s) {
    double acc = 0.0;
    for (int k = 0; k <= s; ++k) acc += binomial(s, k) * a(t, x.x, k) * b(t, x.y, s - k);
    return acc;
  };
  // -lap u = (1 + w^2 t^2) u, so f = u'' + q u with q(t) = 1 + w^2 t^2.
  auto q = [w](double t, int n) {
    if (n == 0) return 1.0 + w * w * t * t;
    if (n == 1) return 2.0 * w * w * t;
    if (n == 2) return 2.0 * w * w;
    return 0.0;
  };

  p.csq = [](Point) { return 1.0; };
  p.f = [=](Point x, double t, int s) {
    double acc = u(x, t, s + 2);
    for (int k = 0; k <= std::min(s, 2); ++k) acc += binomial(s, k) * q(t, k) * u(x, t, s - k);
    return acc;
  };
  p.gu = u;
  p.u0 = [=](Point x) { return u(x, 0.0, 0); };
  p.v0 = [=](Point x) { return u(x, 0.0, 1); };
  p.dtv0 = [=](Point x) { return u(x, 0.0, 2); };
  p.dt2v0 = [=](Point x) { return u(x, 0.0, 3); };
  p.dirichlet = all_dirichlet();

  ExactSolution exact;
  exact.u = u;
  exact.terms = [=](double t, ExactQuantity quantity) {
    auto fa = [=](int n) { return [=](double x1) { return a(t, x1, n); }; };
    auto fb = [=](int n) { return [=](double x2) { return b(t, x2, n); }; };
    switch (quantity) {
      case ExactQuantity::V:
        return std::vector<SeparableTerm>{{fa(1), fb(0)}, {fa(0), fb(1)}};
      case ExactQuantity::Ux:
        return std::vector<SeparableTerm>{{[=](double x1) { return std::cos(w * t + x1); }, fb(0)}};
      case ExactQuantity::Uy:
        return std::vector<SeparableTerm>{
            {fa(0), [=](double x2) { return w * t * std::cos(w * t * x2); }}};
      default:
        return std::vector<SeparableTerm>{{fa(0), fb(0)}};
    }
  };
  p.exact = exact;
  check_time_derivatives(p);
  return p;
}

WaveProblem shm_problem(double hc) {
  if (!(hc > 0.0 && hc < 0.25)) {
    throw Error(ErrorKind::InvalidInput, "control half-width hc must lie in (0, 0.25), got " + std::to_string(hc));
  }
  WaveProblem p;
  p.name = "shm";
  p.domain = Rect{-1.0, 1.0, -1.0, 1.0};
  p.final_time = 1.0;
  p.csq = [](Point x) { return x.y < 0.2 ? 1.0 : 81.0; };
  p.f = [](Point, double, int) { return 0.0; };
  p.has_forcing = false;
  p.gu = [](Point, double, int) { return 0.0; };
  p.has_boundary_data = false;
  p.u0 = [](Point x) {
    const double r2 = 1e4 * (x.x * x.x + x.y * x.y);
    return r2 < 1.0 ? std::exp(-r2) * (1.0 - r2) : 0.0;
  };
  p.v0 = [](Point) { return 0.0; };
  p.dtv0 = [csq = p.csq](Point x) {
    const double r2 = 1e4 * (x.x * x.x + x.y * x.y);
    if (r2 >= 1.0) return 0.0;
    return csq(x) * 1e4 * std::exp(-r2) * (-8.0 + 16.0 * r2 - 4.0 * r2 * r2);
  };
  p.dt2v0 = [](Point) { return 0.0; };
  p.dirichlet = all_dirichlet();
  p.control_region = Rect{0.75 - hc, 0.75 + hc, -hc, hc};
  // 80 cells over (-1,1) put a cell edge on x2 = 0.2.
  p.nx = 80;
  p.ny = 80;
  return p;
}

WaveProblem problem_by_name(const std::string& name, double hc) {
  if (name == "mms_u1") return mms_u1();
  if (name == "mms_u2") return mms_u2();
  if (name == "shm") return shm_problem(hc);
  throw Error(ErrorKind::InvalidInput, "unknown problem '" + name + "' (expected mms_u1, mms_u2 or shm)");
}

void check_time_derivatives(const WaveProblem& problem, double rel_tol) {
  const double h = 1e-5;
  const Rect& d = problem.domain;
  const Point samples[] = {{d.x0 + 0.21 * d.width(), d.y0 + 0.67 * d.height()},
                           {d.x0 + 0.83 * d.width(), d.y0 + 0.12 * d.height()},
                           {d.x0, d.y0 + 0.44 * d.height()}};
  auto check = [&](const SpaceTimeField& g, int max_order, const char* what) {
    for (const Point& x : samples) {
      for (double t : {0.13, 0.37, 0.71}) {
        for (int s = 1; s <= max_order; ++s) {
          const double fd = (g(x, t + h, s - 1) - g(x, t - h, s - 1)) / (2.0 * h);
          const double ref = g(x, t, s);
          const double scale = std::max({1.0, std::abs(ref), std::abs(fd)});
          if (std::abs(fd - ref) > rel_tol * scale) {
            throw Error(ErrorKind::InvalidData, std::string(what) + " time derivative of order " +
                                                    std::to_string(s) + " is inconsistent");
          }
        }
      }
    }
  };
  if (problem.has_forcing) check(problem.f, 2, "forcing");
  if (problem.has_boundary_data) check(problem.gu, 3, "boundary data");
}

}  // namespace wavegc
