#pragma once

#include "statsol/flux.hpp"
#include "statsol/grid.hpp"

namespace statsol {

/// Exact Riemann flux for a scalar law: min of f over [a, b] when a <= b,
/// max of f over [b, a] otherwise. The extremum is found by scanning f at the
/// two states and at the interior critical points of the model.
double godunov_flux(const FluxModel& model, double a, double b);

/// max_j |f'(u_j)|; the wave-speed bound used for CFL time steps.
double max_wave_speed(const FluxModel& model, const GridFunction& u);

/// One conservative explicit update with Godunov fluxes. Ghost cells follow
/// the grid flag: wrap-around when periodic, copied edge values (outflow)
/// otherwise. Rejects dt violating dt * max|f'| <= dx.
GridFunction step(const GridFunction& u, const FluxModel& model, double dt);

/// Repeated `step` up to time T, recomputing dt = cfl * dx / max|f'| each
/// step and shortening the final step to land exactly on T.
GridFunction evolve(const GridFunction& u, const FluxModel& model, double T, double cfl = 0.9);

/// Entropy solution of the Burgers Riemann problem with jump at x = 0:
/// a single shock when uL > uR, a rarefaction fan otherwise. Requires t > 0.
double exact_riemann_burgers(double uL, double uR, double x, double t);

}  // namespace statsol
