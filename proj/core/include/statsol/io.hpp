#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>

#include "statsol/ensemble.hpp"
#include "statsol/grid.hpp"

namespace statsol {

/// Decimal text with 17 significant digits; round-trips binary doubles.
std::string format_double(double value);

/// CSV with header x_center,value, one row per cell.
void write_grid_function_csv(const GridFunction& u, std::ostream& out);
void write_grid_function_csv(const GridFunction& u, const std::filesystem::path& path);

/// CSV with header member,x_center,value, member-major row order.
void write_ensemble_csv(const Ensemble& ensemble, std::ostream& out);
void write_ensemble_csv(const Ensemble& ensemble, const std::filesystem::path& path);

/// Ensemble CSV extended by a leading time column: time,member,x_center,value.
void write_trajectory_csv(const Trajectory& traj, std::ostream& out);
void write_trajectory_csv(const Trajectory& traj, const std::filesystem::path& path);

/// Readers rebuild the uniform grid from the x_center column. The CSV schema
/// does not carry periodicity, so the caller states it (torus by default).
GridFunction read_grid_function_csv(const std::filesystem::path& path, bool periodic = true);
Ensemble read_ensemble_csv(const std::filesystem::path& path, bool periodic = true);
Trajectory read_trajectory_csv(const std::filesystem::path& path, bool periodic = true);

}  // namespace statsol
