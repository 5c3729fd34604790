#pragma once

#include <array>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "wavegc/fespace.hpp"
#include "wavegc/problem.hpp"
#include "wavegc/stepper.hpp"

namespace wavegc {

/// Column order of the six error norms.
enum NormIndex { kULinf = 0, kVLinf, kELinf, kUL2, kVL2, kEL2 };
inline constexpr std::array<const char*, 6> kNormNames = {"eu_linf_l2", "ev_linf_l2", "energy_linf",
                                                          "eu_l2_l2",   "ev_l2_l2",   "energy_l2"};

struct ErrorRow {
  double tau = 0.0;
  double h = 0.0;
  std::array<double, 6> norms{};
  std::array<double, 6> eoc{};  // NaN on the first row
};

struct ErrorReport {
  std::vector<ErrorRow> rows;
};

/// Fills the EOC columns: log(e_{i-1}/e_i) / log(tau_{i-1}/tau_i).
ErrorReport eoc_table(std::vector<ErrorRow> rows);

/// Streams slabs and accumulates the six error norms against the exact
/// solution. L-infinity norms are maxima over t = t_{n-1} + d k tau
/// (d = 0 .. 1/k - 1); L2-in-time integrals use 2(k+1) Gauss points per slab.
class ErrorAccumulator {
 public:
  ErrorAccumulator(const FeSpace& space, const WaveProblem& problem, double knorm_density = 0.001);
  void add(const SlabCoeffs& slab);
  std::array<double, 6> norms() const;

 private:
  struct Sample {
    double eu2 = 0.0;
    double ev2 = 0.0;
    double eg2 = 0.0;
  };
  Sample sample(const std::vector<Vector>& u, const std::vector<Vector>& gx, const std::vector<Vector>& gy,
                const std::vector<Vector>& v, const TimeBasis& basis, double t, double that) const;

  const FeSpace* space_;
  const WaveProblem* problem_;
  FieldSampler sampler_;
  int samples_per_slab_;
  double max_u_ = 0.0;
  double max_v_ = 0.0;
  double max_e_ = 0.0;
  double int_u_ = 0.0;
  double int_v_ = 0.0;
  double int_e_ = 0.0;
};

/// Linear functional c with c . w = int_{region} w_h dx, built from Gauss
/// rules on every cell clipped to the region (exact for Q_p fields).
struct ControlFunctional {
  Vector weights;
  double area = 0.0;
  bool empty = true;

  double apply(const Vector& coeffs) const { return weights.dot(coeffs); }
};

ControlFunctional make_control_functional(const FeSpace& space, const Rect& region);

/// u_c(t) at the requested times from a sequence of slabs.
std::vector<double> control_quantity(const std::vector<SlabCoeffs>& slabs, const FeSpace& space, const Rect& region,
                                     const std::vector<double>& times);

/// Streaming variant: records u_c at sorted sample times as slabs arrive.
class ControlRecorder {
 public:
  ControlRecorder(const FeSpace& space, const Rect& region, std::vector<double> times);
  void add(const SlabCoeffs& slab);
  const std::vector<double>& times() const { return times_; }
  const std::vector<double>& values() const { return values_; }
  bool region_empty() const { return functional_.empty; }

 private:
  ControlFunctional functional_;
  std::vector<double> times_;
  std::vector<double> values_;
  std::size_t next_ = 0;
};

enum class Refinement { Time, SpaceTime };

struct RunConfig {
  std::string problem = "mms_u1";
  Scheme scheme = Scheme::Gcc1;
  SolverOptions solver;
  int p = 3;
  int nx = 0;  // 0: problem default
  int ny = 0;
  double tau0 = 0.1;
  int refinements = 0;
  Refinement refine = Refinement::Time;
  double knorm_density = 0.001;
  double hc = 0.05;
  double final_time = 0.0;  // 0: problem default
  NodePlacement placement = NodePlacement::Equispaced;
  std::string out_dir;
  int threads = 0;  // 0: WAVEGC_THREADS or hardware concurrency
  std::vector<double> multipliers = {0.25, 1, 2, 25, 35, 50, 100, 200};
  int control_samples = 4001;
};

struct RunStats {
  int steps = 0;
  double final_time = 0.0;
  long total_iterations = 0;
  int max_iterations = 0;
  double max_residual = 0.0;
};

using SlabObserver = std::function<void(const SlabCoeffs&)>;

/// Number of slabs for [0, T] with step tau: ceil(T/tau) up to roundoff.
int slab_count(double final_time, double tau);

/// Marches N = ceil(T/tau) slabs (the last one shortened if needed) and hands
/// each slab to the observer. Solver failures are rethrown with the slab index.
RunStats run_simulation(const WaveProblem& problem, const FeSpace& space, Scheme scheme, const SolverOptions& options,
                        double tau, double final_time, const SlabObserver& observer);

/// Builds problem, mesh and space from the configuration, then runs.
RunStats run_simulation(const RunConfig& config, const SlabObserver& observer, int refinement_level = 0);

/// Refinement study: row i uses tau0/2^i and, for space-time refinement, the
/// base mesh refined i times. Rows may run on parallel workers.
ErrorReport convergence_study(const RunConfig& config);

struct ShmCurve {
  Scheme scheme;
  double multiplier;
  double tau;
  std::vector<double> values;
  double deviation = 0.0;  // relative L2-in-time distance to the reference
};

struct ShmComparison {
  std::vector<double> times;
  std::vector<ShmCurve> reference;  // one per scheme at multiplier 1
  std::vector<ShmCurve> curves;
};

/// Control-quantity sweep of GCC1(3) and cGP(2) over step-size multipliers of
/// tau0; each scheme is compared against its own tau0 run.
ShmComparison shm_compare(const RunConfig& config, const std::vector<Scheme>& schemes = {Scheme::Gcc1, Scheme::Cgp2});

/// Relative L2 distance of two series sampled on a uniform grid.
double relative_l2_deviation(const std::vector<double>& a, const std::vector<double>& reference);

/// Worker count from WAVEGC_THREADS, capped by hardware concurrency.
int worker_count(int requested = 0);
/// Runs fn(i) for i in [0, n) on up to `workers` threads; serial inside a worker.
void parallel_for(int n, int workers, const std::function<void(int)>& fn);

Mesh build_problem_mesh(const WaveProblem& problem, int nx, int ny);

}  // namespace wavegc
