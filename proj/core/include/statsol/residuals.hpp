#pragma once

#include <span>
#include <vector>

#include "statsol/ensemble.hpp"
#include "statsol/flux.hpp"
#include "statsol/grid.hpp"

namespace statsol {

/// Smooth compactly supported space-time test function: a C-infinity bump
/// psi(x) = exp(1 - 1/(1 - s^2)), s = (x - center)/half_width, tensorized over
/// the k spatial arguments, times a smooth time cutoff that equals 1 up to
/// t_open and decays to 0 at t_close. Spatial and temporal derivatives are
/// evaluated analytically.
class TestFunction {
 public:
  TestFunction(double center, double half_width, double t_open, double t_close);

  double center() const { return center_; }
  double half_width() const { return half_width_; }
  double t_open() const { return t_open_; }
  double t_close() const { return t_close_; }

  /// Bump value at x; the displacement wraps on periodic domains.
  double psi(double x, const Domain& domain) const;
  /// d(psi)/dx at x.
  double dpsi(double x, const Domain& domain) const;
  /// Time cutoff: 1 for t <= t_open, 0 for t >= t_close, smooth in between.
  double theta(double t) const;
  /// d(theta)/dt.
  double dtheta(double t) const;

  /// Rejects bumps whose support leaves a bounded domain or wraps onto
  /// itself on the torus.
  void check_support(const Domain& domain) const;

 private:
  double center_;
  double half_width_;
  double t_open_;
  double t_close_;
};

/// A linear combination of bump test functions; used to exercise residual
/// linearity and to assemble composite observables.
struct ScaledTestFunction {
  double coefficient = 1.0;
  TestFunction tf;
};

/// Weak-form residual of the k-th moment evolution equation over the
/// trajectory: time integral by the left-endpoint rule on the trajectory's
/// own grid, space integrals by midpoint quadrature at cell-center tuples,
/// derivatives of the test function analytic. A trajectory satisfying the
/// moment hierarchy makes this vanish up to quadrature and scheme error.
/// Supported orders: k in {1, 2, 3}.
double moment_residual(const Trajectory& traj, std::size_t k, const FluxModel& model,
                       const TestFunction& tf);
double moment_residual(const Trajectory& traj, std::size_t k, const FluxModel& model,
                       std::span<const ScaledTestFunction> terms);

struct EntropyResidual {
  /// The signed residual; entropy-admissible trajectories keep it above
  /// -tolerance for every Kruzkov constant.
  double value = 0.0;
  /// Sum of the absolute quadrature contributions; the natural magnitude to
  /// scale one-sided tolerances by.
  double scale = 0.0;
};

/// Kruzkov entropy residual for constant c with entropy |u - c| and flux
/// q(u, c) = sgn(u - c) (f(u) - f(c)); requires a nonnegative test function.
EntropyResidual kruzkov_residual(const Trajectory& traj, double c, const FluxModel& model,
                                 const TestFunction& tf);
EntropyResidual kruzkov_residual(const Trajectory& traj, double c, const FluxModel& model,
                                 std::span<const ScaledTestFunction> terms);

/// Mixture entropy residual: the part-weighted sum of per-part Kruzkov
/// residuals, one constant per part of the trajectory's decomposition.
EntropyResidual mixture_entropy_residual(const Trajectory& traj,
                                         std::span<const double> constants,
                                         const FluxModel& model, const TestFunction& tf);

}  // namespace statsol
