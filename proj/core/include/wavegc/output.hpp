#pragma once

#include <string>
#include <vector>

#include "wavegc/fespace.hpp"
#include "wavegc/harness.hpp"

namespace wavegc {

/// CSV with columns tau, h, the six norms and their six EOCs.
void write_error_csv(const std::string& path, const ErrorReport& report);
std::string error_csv(const ErrorReport& report);

/// Two-column CSV (t, u_c).
void write_series_csv(const std::string& path, const std::vector<double>& times, const std::vector<double>& values);

/// One column per curve plus the time column; a second file lists deviations.
void write_shm_csv(const std::string& series_path, const std::string& summary_path, const ShmComparison& cmp);

/// Legacy ASCII VTK STRUCTURED_GRID with the nodal values as POINT_DATA.
void write_vtk(const std::string& path, const FeSpace& space, const Vector& coeffs, const std::string& name = "u");
std::string vtk_string(const FeSpace& space, const Vector& coeffs, const std::string& name = "u");

}  // namespace wavegc
