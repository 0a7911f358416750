#pragma once

#include <span>
#include <vector>

#include "statsol/ensemble.hpp"
#include "statsol/grid.hpp"

namespace statsol {

/// Square matrix of nonnegative pairing costs between row atoms and column
/// atoms; entry (i, j) discretizes the transport cost for equal-weight
/// empirical measures, where an optimal plan is a permutation.
class CostMatrix {
 public:
  explicit CostMatrix(std::size_t n);
  CostMatrix(std::size_t n, std::vector<double> entries);

  std::size_t size() const { return n_; }
  double at(std::size_t i, std::size_t j) const { return entries_[i * n_ + j]; }
  double& at(std::size_t i, std::size_t j) { return entries_[i * n_ + j]; }

 private:
  std::size_t n_;
  std::vector<double> entries_;
};

struct Assignment {
  std::vector<std::size_t> permutation;  // row i pairs with column permutation[i]
  double cost = 0.0;
};

/// W1 between equal-size empirical measures on the real line: sort both
/// samples and average the coordinatewise gaps (the quantile coupling is
/// optimal on the line).
double w1_real(std::span<const double> a, std::span<const double> b);

/// Exact minimum-cost assignment via shortest augmenting paths with
/// potentials; O(n^3).
Assignment hungarian(const CostMatrix& cost);

/// Exhaustive minimum over all permutations (n <= 8); ties resolve to the
/// lexicographically smallest permutation.
Assignment assignment_bruteforce(const CostMatrix& cost);

struct EnsembleTransport {
  Assignment assignment;
  double w1 = 0.0;
};

/// Exact W1 between two equal-size ensembles on a shared grid, using L1
/// ground distances and the assignment solver. The optimal value is summed
/// over selected entries in ascending order, which makes the result
/// independent of which side is called first.
EnsembleTransport w1_ensembles_detail(const Ensemble& a, const Ensemble& b);
double w1_ensembles(const Ensemble& a, const Ensemble& b);

/// Kantorovich-Rubinstein lower bound from witness functionals
/// Psi_w(u) = ||u - w||_1 anchored at the given grid functions: the largest
/// mean gap |mean_a Psi - mean_b Psi| over the witnesses. Never exceeds
/// w1_ensembles(a, b) beyond rounding.
double kr_lower_bound(const Ensemble& a, const Ensemble& b,
                      std::span<const GridFunction> witness_anchors);

}  // namespace statsol
