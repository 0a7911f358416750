#include "statsol/flux.hpp"

#include <stdexcept>

namespace statsol {

FluxModel burgers_flux() {
  return FluxModel{
      "burgers",
      [](double u) { return 0.5 * u * u; },
      [](double u) { return u; },
      {0.0},
  };
}

FluxModel advection_flux(double speed) {
  return FluxModel{
      "advection",
      [speed](double u) { return speed * u; },
      [speed](double) { return speed; },
      {},
  };
}

FluxModel flux_by_name(const std::string& name, double speed) {
  if (name == "burgers") return burgers_flux();
  if (name == "advection") return advection_flux(speed);
  throw std::invalid_argument("unknown flux model '" + name +
                              "' (expected burgers or advection)");
}

}  // namespace statsol
