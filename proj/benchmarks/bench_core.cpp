#include <memory>

#include <benchmark/benchmark.h>

#include "wavegc/condense.hpp"
#include "wavegc/fespace.hpp"
#include "wavegc/harness.hpp"
#include "wavegc/semidiscrete.hpp"
#include "wavegc/stepper_gcc1.hpp"

using namespace wavegc;

namespace {

FeSpace space_for(const WaveProblem& p, int n, int deg) {
  return build_space(build_rect_mesh(p.domain, n, n, p.dirichlet), deg);
}

void BM_AssembleStiffness(benchmark::State& state) {
  const WaveProblem p = mms_u1();
  const FeSpace s = space_for(p, static_cast<int>(state.range(0)), 3);
  for (auto _ : state) benchmark::DoNotOptimize(assemble_stiffness(s, p.csq));
  state.counters["dofs"] = s.n_dofs();
}
BENCHMARK(BM_AssembleStiffness)->Arg(16)->Arg(32)->Arg(64)->Unit(benchmark::kMillisecond);

void BM_AssembleMass(benchmark::State& state) {
  const WaveProblem p = mms_u1();
  const FeSpace s = space_for(p, static_cast<int>(state.range(0)), 3);
  for (auto _ : state) benchmark::DoNotOptimize(assemble_mass(s));
}
BENCHMARK(BM_AssembleMass)->Arg(16)->Arg(32)->Arg(64)->Unit(benchmark::kMillisecond);

void BM_CondensedApply(benchmark::State& state) {
  const WaveProblem p = mms_u1();
  const FeSpace s = space_for(p, static_cast<int>(state.range(0)), 3);
  const SemiDiscrete sd(p, s);
  const Condensation c = condense(Gcc1Stepper::block_pattern(0.01), 4, 2, 1.0);
  const CondensedOperator op(c.det, sd.mass_ptr(), sd.stiffness_ptr(), &sd.mass_solver());
  const Vector x = Vector::Ones(sd.n_free());
  Vector y(sd.n_free());
  for (auto _ : state) {
    op.apply(x, y);
    benchmark::DoNotOptimize(y.data());
  }
}
BENCHMARK(BM_CondensedApply)->Arg(16)->Arg(32)->Arg(64)->Unit(benchmark::kMicrosecond);

void BM_Step(benchmark::State& state) {
  const WaveProblem p = mms_u2();
  const FeSpace s = space_for(p, static_cast<int>(state.range(0)), 3);
  const SemiDiscrete sd(p, s);
  SolverOptions o;
  o.strategy = static_cast<SolverStrategy>(state.range(1));
  const Scheme scheme = static_cast<Scheme>(state.range(2));
  auto st = make_stepper(scheme, sd, o);
  const double tau = 0.01;
  const StepState init = st->init_state(tau);
  st->solve(init, 1, tau);  // warm the factorization caches
  for (auto _ : state) benchmark::DoNotOptimize(st->solve(init, 1, tau));
  state.SetLabel(to_string(scheme) + "/" + to_string(o.strategy));
}
BENCHMARK(BM_Step)
    ->ArgsProduct({{16, 32},
                   {static_cast<int>(SolverStrategy::Condensed), static_cast<int>(SolverStrategy::CondensedDirect)},
                   {static_cast<int>(Scheme::Gcc1), static_cast<int>(Scheme::Gcc2), static_cast<int>(Scheme::Cgp2)}})
    ->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
