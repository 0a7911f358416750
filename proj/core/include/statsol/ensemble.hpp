#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "statsol/flux.hpp"
#include "statsol/grid.hpp"

namespace statsol {

/// Contiguous member range carrying a mixture weight; weights over all parts
/// of an ensemble sum to one and each part realizes its weight by member
/// multiplicity.
struct MixturePart {
  double weight = 1.0;
  std::size_t offset = 0;
  std::size_t count = 0;
};

/// An equal-weight family of grid functions on a shared grid: the empirical
/// measure (1/M) sum_m delta_{u_m}. Parts record how the ensemble decomposes
/// as a convex combination, so downstream entropy checks can recover the
/// decomposition.
class Ensemble {
 public:
  explicit Ensemble(std::vector<GridFunction> members, std::uint64_t seed_tag = 0);
  Ensemble(std::vector<GridFunction> members, std::vector<MixturePart> parts,
           std::uint64_t seed_tag);

  std::size_t size() const { return members_.size(); }
  const GridFunction& member(std::size_t m) const { return members_[m]; }
  std::span<const GridFunction> members() const { return members_; }
  std::span<const MixturePart> parts() const { return parts_; }
  std::uint64_t seed_tag() const { return seed_tag_; }
  const Domain& domain() const { return members_.front().domain(); }
  std::size_t n_cells() const { return members_.front().n_cells(); }

  /// Same members under a different decomposition; part ranges must tile
  /// [0, size) and weights must sum to one.
  Ensemble with_parts(std::vector<MixturePart> parts) const;
  /// Members reordered by `order` (a permutation of [0, size)); parts reset
  /// to the trivial single-part decomposition.
  Ensemble permuted(std::span<const std::size_t> order) const;

 private:
  void validate() const;

  std::vector<GridFunction> members_;
  std::vector<MixturePart> parts_;
  std::uint64_t seed_tag_ = 0;
};

/// Symmetric positive-semidefinite two-point covariance m2(x, y).
struct CovarianceKernel {
  std::string name;
  std::function<double(double, double)> kernel;
};

/// m2(x, y) = min(x, y); Brownian motion started at the left endpoint.
CovarianceKernel brownian_kernel();

/// m2(x, y) = exp(-|x - y| / length_scale).
CovarianceKernel exponential_kernel(double length_scale);

CovarianceKernel kernel_by_name(const std::string& name, double length_scale = 0.1);

/// Draws M members of the mean-zero Gaussian measure with covariance
/// `kernel`: builds the Gram matrix at cell centers, adds the diagonal nugget
/// 1e-10 * (trace/n + 1), Cholesky-factorizes, and applies the factor to
/// per-member standard-normal vectors from stream (seed, m).
Ensemble sample_gaussian(const CovarianceKernel& kernel, const GridLayout& layout,
                         std::size_t members, std::uint64_t seed);

/// Concatenates weighted ensembles into one equal-weight ensemble whose
/// empirical measure is sum_i weight_i * mu_i; weights are realized by member
/// multiplicity. `total_members` = 0 selects the smallest realizable size.
/// Part boundaries are recorded for later decomposition recovery.
Ensemble mixture(std::span<const std::pair<double, Ensemble>> parts,
                 std::size_t total_members = 0);

/// A time-indexed sequence of ensembles approximating t -> mu_t; member m of
/// every state is the evolution of member m of the initial state.
class Trajectory {
 public:
  Trajectory(std::vector<double> times, std::vector<Ensemble> states);

  std::span<const double> times() const { return times_; }
  double time(std::size_t k) const { return times_[k]; }
  std::size_t n_times() const { return times_.size(); }
  const Ensemble& state(std::size_t k) const { return states_[k]; }
  const Ensemble& initial() const { return states_.front(); }
  std::size_t members() const { return states_.front().size(); }

  /// Applies a new part decomposition to every state.
  Trajectory with_parts(std::vector<MixturePart> parts) const;
  /// Applies a member permutation to every state.
  Trajectory permuted(std::span<const std::size_t> order) const;

 private:
  std::vector<double> times_;
  std::vector<Ensemble> states_;
};

/// Push-forward of the initial ensembles by the numerical entropy semigroup:
/// all members of all ensembles advance in lockstep with one global time step
/// per update, computed from the union-wide max |f'|. This shared-dt rule is
/// what makes the discrete W1 contraction between the outputs exact.
std::vector<Trajectory> canonical_solutions(std::span<const Ensemble> initial,
                                            const FluxModel& model,
                                            std::span<const double> times, double cfl = 0.9);

/// Single-ensemble canonical statistical solution.
Trajectory canonical_solution(const Ensemble& initial, const FluxModel& model,
                              std::span<const double> times, double cfl = 0.9);

}  // namespace statsol
