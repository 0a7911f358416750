#pragma once

#include <functional>
#include <string>
#include <vector>

namespace statsol {

/// Flux function of a scalar conservation law, its derivative (for CFL
/// estimates and upwinding), and the interior critical points needed to
/// locate flux extrema between two states.
struct FluxModel {
  std::string name;
  std::function<double(double)> flux;
  std::function<double(double)> flux_derivative;
  std::vector<double> critical_points;
};

/// f(u) = u^2 / 2.
FluxModel burgers_flux();

/// f(u) = speed * u.
FluxModel advection_flux(double speed = 1.0);

/// Resolves the CLI names "burgers" and "advection".
FluxModel flux_by_name(const std::string& name, double speed = 1.0);

}  // namespace statsol
