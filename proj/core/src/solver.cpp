#include "statsol/solver.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace statsol {

double godunov_flux(const FluxModel& model, double a, double b) {
  const double lo = std::min(a, b);
  const double hi = std::max(a, b);
  double extremum = model.flux(a);
  const double fb = model.flux(b);
  if (a <= b) {
    extremum = std::min(extremum, fb);
    for (double c : model.critical_points) {
      if (c > lo && c < hi) extremum = std::min(extremum, model.flux(c));
    }
  } else {
    extremum = std::max(extremum, fb);
    for (double c : model.critical_points) {
      if (c > lo && c < hi) extremum = std::max(extremum, model.flux(c));
    }
  }
  return extremum;
}

double max_wave_speed(const FluxModel& model, const GridFunction& u) {
  double speed = 0.0;
  for (double v : u.values()) speed = std::max(speed, std::abs(model.flux_derivative(v)));
  return speed;
}

GridFunction step(const GridFunction& u, const FluxModel& model, double dt) {
  if (!(dt > 0.0)) throw std::invalid_argument("step: dt must be positive");
  const double dx = u.dx();
  const double cfl_ratio = dt * max_wave_speed(model, u) / dx;
  if (cfl_ratio > 1.0 + 1e-12) {
    throw std::invalid_argument("step: CFL violation, dt*max|f'|/dx = " +
                                std::to_string(cfl_ratio));
  }

  const std::size_t n = u.n_cells();
  const auto values = u.values();
  const bool periodic = u.domain().periodic;
  auto left_state = [&](std::size_t j) {
    if (j == 0) return periodic ? values[n - 1] : values[0];
    return values[j - 1];
  };
  auto right_state = [&](std::size_t j) {
    if (j + 1 == n) return periodic ? values[0] : values[n - 1];
    return values[j + 1];
  };

  const double lambda = dt / dx;
  std::vector<double> next(n);
  double flux_left = godunov_flux(model, left_state(0), values[0]);
  for (std::size_t j = 0; j < n; ++j) {
    const double flux_right = godunov_flux(model, values[j], right_state(j));
    next[j] = values[j] - lambda * (flux_right - flux_left);
    flux_left = flux_right;
  }
  return u.with_values(std::move(next));
}

GridFunction evolve(const GridFunction& u, const FluxModel& model, double T, double cfl) {
  if (T < 0.0) throw std::invalid_argument("evolve: T must be nonnegative");
  if (!(cfl > 0.0) || cfl > 1.0) throw std::invalid_argument("evolve: cfl must lie in (0, 1]");
  if (T == 0.0) return u;

  GridFunction state = u;
  double t = 0.0;
  while (t < T) {
    const double speed = max_wave_speed(model, state);
    const double remaining = T - t;
    double dt = remaining;
    if (speed > 0.0) dt = std::min(remaining, cfl * state.dx() / speed);
    if (dt >= remaining) {
      dt = remaining;
      t = T;
    } else {
      t += dt;
    }
    state = step(state, model, dt);
  }
  return state;
}

double exact_riemann_burgers(double uL, double uR, double x, double t) {
  if (!(t > 0.0)) throw std::invalid_argument("exact_riemann_burgers: t must be positive");
  if (uL > uR) {
    const double shock_speed = 0.5 * (uL + uR);
    return x < shock_speed * t ? uL : uR;
  }
  if (x <= uL * t) return uL;
  if (x >= uR * t) return uR;
  return x / t;
}

}  // namespace statsol
