#pragma once

#include <cmath>
#include <memory>
#include <vector>

#include <Eigen/Dense>

#include "wavegc/fespace.hpp"
#include "wavegc/harness.hpp"
#include "wavegc/mesh.hpp"
#include "wavegc/problem.hpp"
#include "wavegc/semidiscrete.hpp"
#include "wavegc/stepper.hpp"

namespace wavegc::testing {

inline double rel_diff(const Vector& a, const Vector& b) {
  const double scale = std::max(a.norm(), b.norm());
  return scale == 0.0 ? 0.0 : (a - b).norm() / scale;
}

inline double rel_diff(double a, double b) {
  const double scale = std::max(std::abs(a), std::abs(b));
  return scale == 0.0 ? 0.0 : std::abs(a - b) / scale;
}

inline Eigen::MatrixXd dense(const SparseMatrix& m) { return Eigen::MatrixXd(m); }

/// Single free DOF: a 2x2 all-Dirichlet p=1 mesh with homogeneous data, so the
/// free-free matrices are the scalars M = [m], A = [a] and the semi-discrete
/// problem is u'' + omega^2 u = 0 with omega^2 = a/m. The coefficient csq is
/// chosen to hit the requested omega. Exact solution u = cos(omega t).
class ScalarOscillator {
 public:
  explicit ScalarOscillator(double omega) : omega_(omega) {
    const Mesh mesh = build_rect_mesh(unit_square(), 2, 2, all_dirichlet());
    space_ = std::make_unique<FeSpace>(build_space(mesh, 1));
    const double m = assemble_mass(*space_).coeff(4, 4);
    const double a1 = assemble_stiffness(*space_, [](Point) { return 1.0; }).coeff(4, 4);
    const double csq = omega * omega * m / a1;
    const double w2 = omega * omega;

    problem_.name = "oscillator";
    problem_.domain = unit_square();
    problem_.final_time = 1.0;
    problem_.csq = [csq](Point) { return csq; };
    problem_.has_forcing = false;
    problem_.has_boundary_data = false;
    problem_.u0 = [](Point) { return 1.0; };
    problem_.v0 = [](Point) { return 0.0; };
    problem_.dtv0 = [w2](Point) { return -w2; };
    problem_.dt2v0 = [](Point) { return 0.0; };
    problem_.dirichlet = all_dirichlet();
    sd_ = std::make_unique<SemiDiscrete>(problem_, *space_);
  }
  ScalarOscillator(const ScalarOscillator&) = delete;
  ScalarOscillator& operator=(const ScalarOscillator&) = delete;

  double omega() const { return omega_; }
  const WaveProblem& problem() const { return problem_; }
  const FeSpace& space() const { return *space_; }
  const SemiDiscrete& sd() const { return *sd_; }
  double exact_u(double t) const { return std::cos(omega_ * t); }
  double exact_v(double t) const { return -omega_ * std::sin(omega_ * t); }

  /// Max over the time nodes of |u_h(t_n) - u(t_n)| for a uniform run to T.
  double nodal_error(Scheme scheme, double tau, double final_time,
                     SolverStrategy strategy = SolverStrategy::BlockDirect) const {
    SolverOptions options;
    options.strategy = strategy;
    options.rel_tol = 1e-13;
    double err = 0.0;
    run_simulation(problem_, *space_, scheme, options, tau, final_time, [&](const SlabCoeffs& slab) {
      const double uh = slab_eval(slab, Field::U, slab.t_end())[4];
      err = std::max(err, std::abs(uh - exact_u(slab.t_end())));
    });
    return err;
  }

 private:
  double omega_;
  std::unique_ptr<FeSpace> space_;
  WaveProblem problem_;
  std::unique_ptr<SemiDiscrete> sd_;
};

/// Runs a scheme and keeps every slab.
inline std::vector<SlabCoeffs> collect_slabs(const WaveProblem& problem, const FeSpace& space, Scheme scheme,
                                             const SolverOptions& options, double tau, double final_time) {
  std::vector<SlabCoeffs> slabs;
  run_simulation(problem, space, scheme, options, tau, final_time,
                 [&](const SlabCoeffs& s) { slabs.push_back(s); });
  return slabs;
}

}  // namespace wavegc::testing
