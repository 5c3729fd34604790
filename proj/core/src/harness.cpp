#include "wavegc/harness.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <limits>
#include <mutex>
#include <thread>

#include "wavegc/error.hpp"
#include "wavegc/quadrature.hpp"
#include "wavegc/semidiscrete.hpp"

namespace wavegc {

namespace {
thread_local bool tl_in_worker = false;
}

int worker_count(int requested) {
  int hw = static_cast<int>(std::thread::hardware_concurrency());
  if (hw <= 0) hw = 1;
  int n = requested > 0 ? requested : hw;
  if (const char* env = std::getenv("WAVEGC_THREADS")) {
    const int cap = std::atoi(env);
    if (cap > 0) n = std::min(n, cap);
  }
  return std::max(1, n);
}

void parallel_for(int n, int workers, const std::function<void(int)>& fn) {
  workers = std::min(workers, n);
  if (workers <= 1 || tl_in_worker) {
    for (int i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<int> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  std::vector<std::thread> pool;
  for (int w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      tl_in_worker = true;
      for (int i = next++; i < n; i = next++) {
        try {
          fn(i);
        } catch (...) {
          std::lock_guard<std::mutex> lock(failure_mutex);
          if (!failure) failure = std::current_exception();
        }
      }
    });
  }
  for (auto& t : pool) t.join();
  if (failure) std::rethrow_exception(failure);
}

ErrorReport eoc_table(std::vector<ErrorRow> rows) {
  const double nan = std::numeric_limits<double>::quiet_NaN();
  for (std::size_t i = 0; i < rows.size(); ++i) {
    for (int k = 0; k < 6; ++k) {
      if (i == 0) {
        rows[i].eoc[k] = nan;
        continue;
      }
      const double ratio = rows[i - 1].tau / rows[i].tau;
      const double base = ratio == 2.0 ? std::log(2.0) : std::log(ratio);
      rows[i].eoc[k] = std::log(rows[i - 1].norms[k] / rows[i].norms[k]) / base;
    }
  }
  return ErrorReport{std::move(rows)};
}

ErrorAccumulator::ErrorAccumulator(const FeSpace& space, const WaveProblem& problem, double knorm_density)
    : space_(&space),
      problem_(&problem),
      sampler_(space, default_quadrature_points(space.degree())),
      samples_per_slab_(static_cast<int>(std::lround(1.0 / knorm_density))) {
  if (!problem.exact) throw Error(ErrorKind::InvalidInput, "error norms need an exact solution");
  if (!(knorm_density > 0.0) || knorm_density > 1.0 || samples_per_slab_ < 1) {
    throw Error(ErrorKind::InvalidInput, "knorm density must lie in (0, 1]");
  }
}

ErrorAccumulator::Sample ErrorAccumulator::sample(const std::vector<Vector>& u, const std::vector<Vector>& gx,
                                                  const std::vector<Vector>& gy, const std::vector<Vector>& v,
                                                  const TimeBasis& basis, double t, double that) const {
  thread_local std::vector<double> exact;
  thread_local Vector du;
  thread_local Vector dv;
  thread_local Vector dgx;
  thread_local Vector dgy;
  const int n = sampler_.n_points();
  du.setZero(n);
  dv.setZero(n);
  dgx.setZero(n);
  dgy.setZero(n);
  for (int l = 0; l < basis.size(); ++l) {
    const double w = basis.eval(l, that, 0);
    if (w == 0.0) continue;
    du.noalias() += w * u[l];
    dv.noalias() += w * v[l];
    dgx.noalias() += w * gx[l];
    dgy.noalias() += w * gy[l];
  }
  const auto& weights = sampler_.weights();
  auto error2 = [&](ExactQuantity q, const Vector& discrete) {
    eval_separable(problem_->exact->terms(t, q), sampler_.xs(), sampler_.ys(), exact);
    double acc = 0.0;
    for (int i = 0; i < n; ++i) {
      const double e = discrete[i] - exact[i];
      acc += weights[i] * e * e;
    }
    return acc;
  };
  Sample s;
  s.eu2 = error2(ExactQuantity::U, du);
  s.ev2 = error2(ExactQuantity::V, dv);
  s.eg2 = error2(ExactQuantity::Ux, dgx) + error2(ExactQuantity::Uy, dgy);
  return s;
}

void ErrorAccumulator::add(const SlabCoeffs& slab) {
  const TimeBasis basis(slab.basis);
  const int k = basis.size();
  std::vector<Vector> u(k), gx(k), gy(k), v(k);
  for (int l = 0; l < k; ++l) {
    sampler_.values(slab.u[l], u[l]);
    sampler_.gradients(slab.u[l], gx[l], gy[l]);
    sampler_.values(slab.v[l], v[l]);
  }
  const int d_count = samples_per_slab_;
  const QuadratureRule gauss = gauss_legendre(2 * (basis.degree() + 1));
  const int g_count = static_cast<int>(gauss.points.size());
  std::vector<Sample> results(static_cast<std::size_t>(d_count + g_count));
  parallel_for(d_count + g_count, worker_count(), [&](int i) {
    const double that = i < d_count ? static_cast<double>(i) / d_count : gauss.points[i - d_count];
    results[i] = sample(u, gx, gy, v, basis, slab.t_start + that * slab.tau, that);
  });
  for (int i = 0; i < d_count; ++i) {
    const Sample& s = results[i];
    max_u_ = std::max(max_u_, std::sqrt(s.eu2));
    max_v_ = std::max(max_v_, std::sqrt(s.ev2));
    max_e_ = std::max(max_e_, std::sqrt(s.eg2 + s.ev2));
  }
  for (int g = 0; g < g_count; ++g) {
    const Sample& s = results[d_count + g];
    const double w = slab.tau * gauss.weights[g];
    int_u_ += w * s.eu2;
    int_v_ += w * s.ev2;
    int_e_ += w * (s.eg2 + s.ev2);
  }
}

std::array<double, 6> ErrorAccumulator::norms() const {
  return {max_u_, max_v_, max_e_, std::sqrt(int_u_), std::sqrt(int_v_), std::sqrt(int_e_)};
}

ControlFunctional make_control_functional(const FeSpace& space, const Rect& region) {
  const Mesh& mesh = space.mesh();
  const LagrangeBasis1D& b = space.basis_1d();
  const int p = space.degree();
  const QuadratureRule rule = gauss_legendre(default_quadrature_points(p));
  ControlFunctional c;
  c.weights = Vector::Zero(space.n_dofs());
  std::vector<double> bx(p + 1), by(p + 1);
  for (int cell = 0; cell < static_cast<int>(mesh.n_cells()); ++cell) {
    const Rect r = mesh.cell_rect(cell);
    const double x0 = std::max(r.x0, region.x0), x1 = std::min(r.x1, region.x1);
    const double y0 = std::max(r.y0, region.y0), y1 = std::min(r.y1, region.y1);
    if (!(x1 > x0) || !(y1 > y0)) continue;
    c.empty = false;
    c.area += (x1 - x0) * (y1 - y0);
    const auto dofs = space.cell_dofs(cell);
    for (std::size_t qy = 0; qy < rule.points.size(); ++qy) {
      const double y = y0 + rule.points[qy] * (y1 - y0);
      const double sy = (y - r.y0) / r.height();
      for (int j = 0; j <= p; ++j) by[j] = b.value(j, sy);
      for (std::size_t qx = 0; qx < rule.points.size(); ++qx) {
        const double x = x0 + rule.points[qx] * (x1 - x0);
        const double sx = (x - r.x0) / r.width();
        for (int i = 0; i <= p; ++i) bx[i] = b.value(i, sx);
        const double w = rule.weights[qx] * rule.weights[qy] * (x1 - x0) * (y1 - y0);
        for (int j = 0; j <= p; ++j)
          for (int i = 0; i <= p; ++i) c.weights[dofs[j * (p + 1) + i]] += w * bx[i] * by[j];
      }
    }
  }
  return c;
}

ControlRecorder::ControlRecorder(const FeSpace& space, const Rect& region, std::vector<double> times)
    : functional_(make_control_functional(space, region)), times_(std::move(times)) {
  std::sort(times_.begin(), times_.end());
  values_.assign(times_.size(), 0.0);
}

void ControlRecorder::add(const SlabCoeffs& slab) {
  const TimeBasis basis(slab.basis);
  std::vector<double> c(static_cast<std::size_t>(basis.size()));
  bool ready = false;
  const double tol = 1e-12 * slab.tau;
  while (next_ < times_.size() && times_[next_] <= slab.t_end() + tol) {
    const double t = times_[next_];
    if (t >= slab.t_start - tol) {
      if (!ready && !functional_.empty) {
        for (int l = 0; l < basis.size(); ++l) c[l] = functional_.apply(slab.u[l]);
        ready = true;
      }
      double value = 0.0;
      if (!functional_.empty) {
        const double that = std::clamp((t - slab.t_start) / slab.tau, 0.0, 1.0);
        for (int l = 0; l < basis.size(); ++l) value += c[l] * basis.eval(l, that, 0);
      }
      values_[next_] = value;
    }
    ++next_;
  }
}

std::vector<double> control_quantity(const std::vector<SlabCoeffs>& slabs, const FeSpace& space, const Rect& region,
                                     const std::vector<double>& times) {
  ControlRecorder rec(space, region, times);
  for (const auto& s : slabs) rec.add(s);
  return rec.values();
}

int slab_count(double final_time, double tau) {
  if (!(tau > 0.0) || !(final_time > 0.0)) throw Error(ErrorKind::InvalidInput, "tau and T must be positive");
  return std::max(1, static_cast<int>(std::ceil(final_time / tau - 1e-9)));
}

RunStats run_simulation(const WaveProblem& problem, const FeSpace& space, Scheme scheme, const SolverOptions& options,
                        double tau, double final_time, const SlabObserver& observer) {
  const SemiDiscrete sd(problem, space);
  auto stepper = make_stepper(scheme, sd, options);
  const int n_slabs = slab_count(final_time, tau);
  auto step_size = [&](int n) { return n < n_slabs ? tau : final_time - (n_slabs - 1) * tau; };
  RunStats stats;
  StepState state = stepper->init_state(step_size(1));
  for (int n = 1; n <= n_slabs; ++n) {
    const double tn = step_size(n);
    SlabCoeffs slab;
    try {
      slab = stepper->solve(state, n, tn);
    } catch (const Error& e) {
      throw Error(e.kind(), "slab " + std::to_string(n) + ": " + e.what());
    }
    const SolveReport& r = stepper->last_report();
    stats.total_iterations += r.iterations;
    stats.max_iterations = std::max(stats.max_iterations, r.iterations);
    stats.max_residual = std::max(stats.max_residual, r.relative_residual);
    if (observer) observer(slab);
    if (n < n_slabs) state = stepper->advance(slab, step_size(n + 1));
    stats.steps = n;
    stats.final_time = slab.t_end();
  }
  return stats;
}

Mesh build_problem_mesh(const WaveProblem& problem, int nx, int ny) {
  return build_rect_mesh(problem.domain, nx > 0 ? nx : problem.nx, ny > 0 ? ny : problem.ny, problem.dirichlet);
}

RunStats run_simulation(const RunConfig& config, const SlabObserver& observer, int refinement_level) {
  const WaveProblem problem = problem_by_name(config.problem, config.hc);
  Mesh mesh = build_problem_mesh(problem, config.nx, config.ny);
  for (int i = 0; i < refinement_level; ++i) mesh = refine_uniform(mesh);
  const FeSpace space = build_space(mesh, config.p, config.placement);
  const double t_final = config.final_time > 0.0 ? config.final_time : problem.final_time;
  return run_simulation(problem, space, config.scheme, config.solver, config.tau0, t_final, observer);
}

ErrorReport convergence_study(const RunConfig& config) {
  const int rows = config.refinements + 1;
  std::vector<ErrorRow> out(static_cast<std::size_t>(rows));
  parallel_for(rows, worker_count(config.threads), [&](int i) {
    const WaveProblem problem = problem_by_name(config.problem, config.hc);
    Mesh mesh = build_problem_mesh(problem, config.nx, config.ny);
    if (config.refine == Refinement::SpaceTime)
      for (int k = 0; k < i; ++k) mesh = refine_uniform(mesh);
    const FeSpace space = build_space(mesh, config.p, config.placement);
    const double tau = config.tau0 / std::pow(2.0, i);
    const double t_final = config.final_time > 0.0 ? config.final_time : problem.final_time;
    ErrorAccumulator acc(space, problem, config.knorm_density);
    run_simulation(problem, space, config.scheme, config.solver, tau, t_final,
                   [&](const SlabCoeffs& s) { acc.add(s); });
    out[i].tau = tau;
    out[i].h = mesh.h();
    out[i].norms = acc.norms();
  });
  return eoc_table(std::move(out));
}

double relative_l2_deviation(const std::vector<double>& a, const std::vector<double>& reference) {
  if (a.size() != reference.size()) throw Error(ErrorKind::InvalidInput, "series lengths differ");
  double num = 0.0, den = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    // Trapezoidal weights on the uniform grid.
    const double w = (i == 0 || i + 1 == a.size()) ? 0.5 : 1.0;
    num += w * (a[i] - reference[i]) * (a[i] - reference[i]);
    den += w * reference[i] * reference[i];
  }
  return den > 0.0 ? std::sqrt(num / den) : std::sqrt(num);
}

ShmComparison shm_compare(const RunConfig& config, const std::vector<Scheme>& schemes) {
  const WaveProblem problem = problem_by_name(config.problem, config.hc);
  if (!problem.control_region) throw Error(ErrorKind::InvalidInput, "problem has no control region");
  const Mesh mesh = build_problem_mesh(problem, config.nx, config.ny);
  const FeSpace space = build_space(mesh, config.p, config.placement);
  const double t_final = config.final_time > 0.0 ? config.final_time : problem.final_time;

  ShmComparison cmp;
  const int n_samples = std::max(2, config.control_samples);
  for (int i = 0; i < n_samples; ++i) cmp.times.push_back(t_final * i / (n_samples - 1));

  struct Job {
    Scheme scheme;
    double multiplier;
  };
  std::vector<Job> jobs;
  for (Scheme s : schemes) {
    jobs.push_back({s, 1.0});
    for (double m : config.multipliers)
      if (m != 1.0) jobs.push_back({s, m});
  }
  std::vector<ShmCurve> curves(jobs.size());
  parallel_for(static_cast<int>(jobs.size()), worker_count(config.threads), [&](int j) {
    const Job& job = jobs[j];
    ControlRecorder rec(space, *problem.control_region, cmp.times);
    const double tau = config.tau0 * job.multiplier;
    run_simulation(problem, space, job.scheme, config.solver, tau, t_final, [&](const SlabCoeffs& s) { rec.add(s); });
    curves[j] = ShmCurve{job.scheme, job.multiplier, tau, rec.values(), 0.0};
  });
  for (std::size_t j = 0; j < jobs.size(); ++j) {
    if (jobs[j].multiplier == 1.0) cmp.reference.push_back(curves[j]);
  }
  for (std::size_t j = 0; j < jobs.size(); ++j) {
    if (jobs[j].multiplier == 1.0) continue;
    for (const auto& ref : cmp.reference) {
      if (ref.scheme == jobs[j].scheme) curves[j].deviation = relative_l2_deviation(curves[j].values, ref.values);
    }
    cmp.curves.push_back(curves[j]);
  }
  return cmp;
}

}  // namespace wavegc
