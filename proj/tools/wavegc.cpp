// Command-line driver: single runs, refinement studies and the SHM sweep.
#include <chrono>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <map>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "wavegc/config.hpp"
#include "wavegc/error.hpp"
#include "wavegc/harness.hpp"
#include "wavegc/output.hpp"
#include "wavegc/semidiscrete.hpp"

namespace fs = std::filesystem;
using namespace wavegc;

namespace {

struct Overrides {
  std::string config;
  std::map<std::string, std::string> flags;
};

void add_common(CLI::App* cmd, Overrides& o) {
  cmd->add_option("--config", o.config, "key=value configuration file");
  for (const char* key : {"problem", "scheme", "solver", "p", "nx", "ny", "tau0", "refinements", "refine", "out",
                          "knorm-density", "hc", "final-time", "placement", "rel-tol", "mu", "multipliers"}) {
    std::string name = std::string("--") + key;
    cmd->add_option_function<std::string>(
        name, [&o, key](const std::string& v) {
          std::string k = key;
          for (char& c : k)
            if (c == '-') c = '_';
          o.flags[k] = v;
        },
        std::string("override '") + key + "'");
  }
}

RunConfig resolve(const Overrides& o, RunConfig base) {
  if (!o.config.empty()) apply_settings(base, read_key_value_file(o.config));
  apply_settings(base, o.flags);
  validate(base);
  return base;
}

std::string out_path(const RunConfig& c, const std::string& file) {
  const fs::path dir = c.out_dir.empty() ? fs::path(".") : fs::path(c.out_dir);
  fs::create_directories(dir);
  return (dir / file).string();
}

void print_report(const ErrorReport& r) {
  std::printf("%-10s %-10s", "tau", "h");
  for (const char* n : kNormNames) std::printf(" %-12s %-5s", n, "eoc");
  std::printf("\n");
  for (const auto& row : r.rows) {
    std::printf("%-10.4e %-10.4e", row.tau, row.h);
    for (int k = 0; k < 6; ++k) std::printf(" %-12.4e %-5.2f", row.norms[k], row.eoc[k]);
    std::printf("\n");
  }
}

int cmd_run(const RunConfig& c) {
  const WaveProblem problem = problem_by_name(c.problem, c.hc);
  const Mesh mesh = build_problem_mesh(problem, c.nx, c.ny);
  const FeSpace space = build_space(mesh, c.p, c.placement);
  const double t_final = c.final_time > 0.0 ? c.final_time : problem.final_time;
  std::optional<ErrorAccumulator> acc;
  if (problem.exact) acc.emplace(space, problem, c.knorm_density);
  std::optional<ControlRecorder> rec;
  if (problem.control_region) {
    std::vector<double> times;
    for (int i = 0; i < c.control_samples; ++i) times.push_back(t_final * i / (c.control_samples - 1));
    rec.emplace(space, *problem.control_region, times);
  }
  SlabCoeffs last;
  const auto start = std::chrono::steady_clock::now();
  const RunStats stats = run_simulation(problem, space, c.scheme, c.solver, c.tau0, t_final, [&](const SlabCoeffs& s) {
    if (acc) acc->add(s);
    if (rec) rec->add(s);
    last = s;
  });
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  std::printf("%s %s/%s: %d slabs to t=%.6g, %d DOFs, %.2f s, iterations total %ld max %d, max residual %.2e\n",
              c.problem.c_str(), to_string(c.scheme).c_str(), to_string(c.solver.strategy).c_str(), stats.steps,
              stats.final_time, space.n_dofs(), secs, stats.total_iterations, stats.max_iterations, stats.max_residual);
  if (acc) {
    const ErrorReport r = eoc_table({ErrorRow{c.tau0, mesh.h(), acc->norms(), {}}});
    print_report(r);
    write_error_csv(out_path(c, "errors.csv"), r);
  }
  if (rec) write_series_csv(out_path(c, "control.csv"), rec->times(), rec->values());
  write_vtk(out_path(c, "final_u.vtk"), space, slab_eval(last, Field::U, last.t_end()), "u");
  return 0;
}

int cmd_convergence(const RunConfig& c) {
  const ErrorReport r = convergence_study(c);
  print_report(r);
  write_error_csv(out_path(c, "convergence.csv"), r);
  return 0;
}

int cmd_shm(const RunConfig& c) {
  const ShmComparison cmp = shm_compare(c);
  std::printf("%-6s %-10s %-12s %s\n", "scheme", "multiplier", "tau", "relative L2 deviation");
  for (const auto& curve : cmp.curves)
    std::printf("%-6s %-10g %-12.4e %.4e\n", to_string(curve.scheme).c_str(), curve.multiplier, curve.tau,
                curve.deviation);
  write_shm_csv(out_path(c, "shm_control.csv"), out_path(c, "shm_deviation.csv"), cmp);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Galerkin-collocation wave equation solver"};
  app.require_subcommand(1);
  Overrides run_o, conv_o, shm_o;
  auto* run = app.add_subcommand("run", "single simulation");
  auto* conv = app.add_subcommand("convergence", "refinement study with error norms and EOCs");
  auto* shm = app.add_subcommand("shm-compare", "GCC1(3) vs cGP(2) control-quantity step-size sweep");
  add_common(run, run_o);
  add_common(conv, conv_o);
  add_common(shm, shm_o);
  CLI11_PARSE(app, argc, argv);

  try {
    if (*run) return cmd_run(resolve(run_o, RunConfig{}));
    if (*conv) return cmd_convergence(resolve(conv_o, RunConfig{}));
    if (*shm) {
      RunConfig base;
      base.problem = "shm";
      base.tau0 = 2e-4;
      base.solver.strategy = SolverStrategy::CondensedDirect;
      return cmd_shm(resolve(shm_o, base));
    }
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  return 0;
}
