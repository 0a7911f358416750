#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "statsol/ensemble.hpp"
#include "statsol/flux.hpp"
#include "statsol/grid.hpp"

namespace statsol {

/// The empirical k-point correlation marginal at fixed spatial locations:
/// one phase-space atom (u_m(x_1), ..., u_m(x_k)) per member, stored row-major
/// with stride k.
struct MarginalSample {
  std::vector<double> points;
  std::vector<double> atoms;

  std::size_t order() const { return points.size(); }
  std::size_t size() const { return order() ? atoms.size() / order() : 0; }
  double atom(std::size_t m, std::size_t i) const { return atoms[m * order() + i]; }
};

/// Evaluates every member at the k query points (1 <= k <= 6).
MarginalSample marginal_samples(const Ensemble& ensemble, std::span<const double> points);

/// Empirical moment m^k(x) = (1/M) sum_m prod_i u_m(x_i), accumulated in
/// member order.
double moment(const Ensemble& ensemble, std::span<const double> points);

/// Moment with the flux applied in one slot:
/// (1/M) sum_m u_m(x_1) ... f(u_m(x_{slot})) ... u_m(x_k); `flux_slot` is a
/// zero-based index below k.
double flux_moment(const Ensemble& ensemble, std::span<const double> points,
                   const FluxModel& model, std::size_t flux_slot);

struct StructureFunctionResult {
  double value = 0.0;
  /// Set when r < dx: the estimator is dominated by the grid resolution.
  bool below_resolution = false;
};

/// Two-point structure function at radius r: the empirical estimate of
/// int_D avg_{B_r(x)} <nu^2_{x,y}, |xi1 - xi2|^p> dy dx, with wrapped
/// distances on periodic domains and balls clipped to bounded ones.
StructureFunctionResult structure_function(const Ensemble& ensemble, double r, double p);

/// Monte Carlo projection of the ensemble onto a partition: each member and
/// each realization draws one uniform point per partition cell from the
/// stream (seed, member, realization) and emits the piecewise-constant
/// function of the sampled values, resampled onto the original grid. Output
/// members are ordered member-major: index = member * realizations + rho.
Ensemble project_ensemble(const Ensemble& ensemble, const Partition& partition,
                          std::size_t realizations, std::uint64_t seed);

}  // namespace statsol
