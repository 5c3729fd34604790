#include "wavegc/config.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

#include "wavegc/error.hpp"

namespace wavegc {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

double to_double(const std::string& key, const std::string& v) {
  try {
    std::size_t used = 0;
    const double x = std::stod(v, &used);
    if (used != v.size()) throw std::invalid_argument(v);
    return x;
  } catch (const std::exception&) {
    throw Error(ErrorKind::InvalidInput, "setting '" + key + "' expects a number, got '" + v + "'");
  }
}

int to_int(const std::string& key, const std::string& v) {
  int x = 0;
  const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), x);
  if (ec != std::errc() || ptr != v.data() + v.size()) {
    throw Error(ErrorKind::InvalidInput, "setting '" + key + "' expects an integer, got '" + v + "'");
  }
  return x;
}

}  // namespace

std::map<std::string, std::string> parse_key_values(const std::string& text) {
  std::map<std::string, std::string> out;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.resize(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw Error(ErrorKind::InvalidInput, "config line " + std::to_string(lineno) + ": expected key = value");
    }
    const std::string key = trim(line.substr(0, eq));
    if (key.empty()) throw Error(ErrorKind::InvalidInput, "config line " + std::to_string(lineno) + ": empty key");
    out[key] = trim(line.substr(eq + 1));
  }
  return out;
}

std::map<std::string, std::string> read_key_value_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::Io, "cannot read config '" + path + "'");
  std::ostringstream s;
  s << in.rdbuf();
  return parse_key_values(s.str());
}

void apply_setting(RunConfig& c, const std::string& key, const std::string& value) {
  if (key == "problem") c.problem = value;
  else if (key == "scheme") c.scheme = parse_scheme(value);
  else if (key == "solver") c.solver.strategy = parse_strategy(value);
  else if (key == "p") c.p = to_int(key, value);
  else if (key == "nx") c.nx = to_int(key, value);
  else if (key == "ny") c.ny = to_int(key, value);
  else if (key == "tau0") c.tau0 = to_double(key, value);
  else if (key == "refinements") c.refinements = to_int(key, value);
  else if (key == "refine") {
    if (value == "time") c.refine = Refinement::Time;
    else if (value == "spacetime") c.refine = Refinement::SpaceTime;
    else throw Error(ErrorKind::InvalidInput, "refine must be time or spacetime, got '" + value + "'");
  } else if (key == "knorm_density") c.knorm_density = to_double(key, value);
  else if (key == "hc") c.hc = to_double(key, value);
  else if (key == "final_time") c.final_time = to_double(key, value);
  else if (key == "placement") {
    if (value == "equispaced") c.placement = NodePlacement::Equispaced;
    else if (value == "gauss-lobatto") c.placement = NodePlacement::GaussLobatto;
    else throw Error(ErrorKind::InvalidInput, "placement must be equispaced or gauss-lobatto");
  } else if (key == "out") c.out_dir = value;
  else if (key == "threads") c.threads = to_int(key, value);
  else if (key == "rel_tol") c.solver.rel_tol = to_double(key, value);
  else if (key == "max_iter") c.solver.max_iter = to_int(key, value);
  else if (key == "gmres_restart") c.solver.gmres_restart = to_int(key, value);
  else if (key == "mu") c.solver.mu = to_double(key, value);
  else if (key == "inner") {
    if (value == "direct") c.solver.inner = InnerSolve::Direct;
    else if (value == "cg") c.solver.inner = InnerSolve::Cg;
    else throw Error(ErrorKind::InvalidInput, "inner must be direct or cg");
  } else if (key == "control_samples") c.control_samples = to_int(key, value);
  else if (key == "multipliers") {
    c.multipliers.clear();
    std::istringstream in(value);
    std::string item;
    while (std::getline(in, item, ',')) c.multipliers.push_back(to_double(key, trim(item)));
  } else {
    throw Error(ErrorKind::InvalidInput, "unknown setting '" + key + "'");
  }
}

void apply_settings(RunConfig& config, const std::map<std::string, std::string>& settings) {
  for (const auto& [k, v] : settings) apply_setting(config, k, v);
}

void validate(const RunConfig& c) {
  auto require = [](bool ok, const char* what) {
    if (!ok) throw Error(ErrorKind::InvalidInput, what);
  };
  require(c.p >= 1, "p must be >= 1");
  require(c.nx >= 0 && c.ny >= 0, "nx, ny must be positive (0 selects the problem default)");
  require(c.tau0 > 0.0, "tau0 must be positive");
  require(c.refinements >= 0, "refinements must be >= 0");
  require(c.knorm_density > 0.0 && c.knorm_density <= 1.0, "knorm_density must lie in (0, 1]");
  require(c.final_time >= 0.0, "final_time must be >= 0");
  require(c.solver.rel_tol > 0.0, "rel_tol must be positive");
  require(c.solver.max_iter > 0, "max_iter must be positive");
  require(c.solver.gmres_restart > 0, "gmres_restart must be positive");
  require(c.solver.mu >= 0.0, "mu must be >= 0");
  require(c.control_samples >= 2, "control_samples must be >= 2");
  for (double m : c.multipliers) require(m > 0.0, "multipliers must be positive");
}

}  // namespace wavegc
