#include "wavegc/output.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "wavegc/error.hpp"

namespace wavegc {

namespace {

std::string fmt(double x) {
  if (std::isnan(x)) return "nan";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.10e", x);
  return buf;
}

void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorKind::Io, "cannot open '" + path + "' for writing");
  out << text;
  if (!out) throw Error(ErrorKind::Io, "write to '" + path + "' failed");
}

}  // namespace

std::string error_csv(const ErrorReport& report) {
  std::ostringstream s;
  s << "tau,h";
  for (const char* n : kNormNames) s << ',' << n;
  for (const char* n : kNormNames) s << ",eoc_" << n;
  s << '\n';
  for (const auto& row : report.rows) {
    s << fmt(row.tau) << ',' << fmt(row.h);
    for (double v : row.norms) s << ',' << fmt(v);
    for (double v : row.eoc) s << ',' << fmt(v);
    s << '\n';
  }
  return s.str();
}

void write_error_csv(const std::string& path, const ErrorReport& report) { write_text(path, error_csv(report)); }

void write_series_csv(const std::string& path, const std::vector<double>& times, const std::vector<double>& values) {
  if (times.size() != values.size()) throw Error(ErrorKind::InvalidInput, "series lengths differ");
  std::ostringstream s;
  s << "t,u_c\n";
  for (std::size_t i = 0; i < times.size(); ++i) s << fmt(times[i]) << ',' << fmt(values[i]) << '\n';
  write_text(path, s.str());
}

void write_shm_csv(const std::string& series_path, const std::string& summary_path, const ShmComparison& cmp) {
  std::vector<const ShmCurve*> all;
  for (const auto& c : cmp.reference) all.push_back(&c);
  for (const auto& c : cmp.curves) all.push_back(&c);
  std::ostringstream s;
  s << 't';
  for (const ShmCurve* c : all) s << ',' << to_string(c->scheme) << "_x" << c->multiplier;
  s << '\n';
  for (std::size_t i = 0; i < cmp.times.size(); ++i) {
    s << fmt(cmp.times[i]);
    for (const ShmCurve* c : all) s << ',' << fmt(c->values[i]);
    s << '\n';
  }
  write_text(series_path, s.str());

  std::ostringstream d;
  d << "scheme,multiplier,tau,relative_l2_deviation\n";
  for (const auto& c : cmp.curves)
    d << to_string(c.scheme) << ',' << c.multiplier << ',' << fmt(c.tau) << ',' << fmt(c.deviation) << '\n';
  write_text(summary_path, d.str());
}

std::string vtk_string(const FeSpace& space, const Vector& coeffs, const std::string& name) {
  if (coeffs.size() != space.n_dofs()) throw Error(ErrorKind::InvalidInput, "coefficient vector has wrong length");
  // DOFs are numbered x-fastest on the node lattice, which is VTK point order.
  std::ostringstream s;
  s << "# vtk DataFile Version 3.0\n" << name << " snapshot\nASCII\nDATASET STRUCTURED_GRID\n";
  s << "DIMENSIONS " << space.lattice_nx() << ' ' << space.lattice_ny() << " 1\n";
  s << "POINTS " << space.n_dofs() << " double\n";
  for (const Point& p : space.dof_coords()) s << fmt(p.x) << ' ' << fmt(p.y) << " 0\n";
  s << "POINT_DATA " << space.n_dofs() << "\nSCALARS " << name << " double 1\nLOOKUP_TABLE default\n";
  for (Eigen::Index i = 0; i < coeffs.size(); ++i) s << fmt(coeffs[i]) << '\n';
  return s.str();
}

void write_vtk(const std::string& path, const FeSpace& space, const Vector& coeffs, const std::string& name) {
  write_text(path, vtk_string(space, coeffs, name));
}

}  // namespace wavegc
