#include "statsol/transport.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

#include "statsol/parallel.hpp"

namespace statsol {

CostMatrix::CostMatrix(std::size_t n) : n_(n), entries_(n * n, 0.0) {
  if (n == 0) throw std::invalid_argument("CostMatrix: size must be positive");
}

CostMatrix::CostMatrix(std::size_t n, std::vector<double> entries)
    : n_(n), entries_(std::move(entries)) {
  if (n == 0) throw std::invalid_argument("CostMatrix: size must be positive");
  if (entries_.size() != n * n) throw std::invalid_argument("CostMatrix: entry count mismatch");
  for (double e : entries_) {
    if (!std::isfinite(e) || e < 0.0) {
      throw std::invalid_argument("CostMatrix: entries must be finite and nonnegative");
    }
  }
}

double w1_real(std::span<const double> a, std::span<const double> b) {
  if (a.empty() || a.size() != b.size()) {
    throw std::invalid_argument("w1_real: samples must be nonempty and of equal length");
  }
  std::vector<double> sa(a.begin(), a.end());
  std::vector<double> sb(b.begin(), b.end());
  std::ranges::sort(sa);
  std::ranges::sort(sb);
  double sum = 0.0;
  for (std::size_t i = 0; i < sa.size(); ++i) sum += std::abs(sa[i] - sb[i]);
  return sum / static_cast<double>(sa.size());
}

Assignment hungarian(const CostMatrix& cost) {
  const auto n = static_cast<std::ptrdiff_t>(cost.size());
  constexpr double kInf = std::numeric_limits<double>::infinity();

  // Potentials and matching in 1-based indexing; p[j] is the row matched to
  // column j, column 0 is the virtual start of each augmenting path.
  std::vector<double> pot_row(n + 1, 0.0), pot_col(n + 1, 0.0), min_slack(n + 1, 0.0);
  std::vector<std::ptrdiff_t> matched(n + 1, 0), path(n + 1, 0);

  for (std::ptrdiff_t i = 1; i <= n; ++i) {
    matched[0] = i;
    std::ptrdiff_t j0 = 0;
    std::fill(min_slack.begin(), min_slack.end(), kInf);
    std::vector<bool> used(n + 1, false);
    do {
      used[j0] = true;
      const std::ptrdiff_t i0 = matched[j0];
      std::ptrdiff_t j1 = -1;
      double delta = kInf;
      for (std::ptrdiff_t j = 1; j <= n; ++j) {
        if (used[j]) continue;
        const double slack = cost.at(static_cast<std::size_t>(i0 - 1),
                                     static_cast<std::size_t>(j - 1)) -
                             pot_row[i0] - pot_col[j];
        if (slack < min_slack[j]) {
          min_slack[j] = slack;
          path[j] = j0;
        }
        if (min_slack[j] < delta) {
          delta = min_slack[j];
          j1 = j;
        }
      }
      for (std::ptrdiff_t j = 0; j <= n; ++j) {
        if (used[j]) {
          pot_row[matched[j]] += delta;
          pot_col[j] -= delta;
        } else {
          min_slack[j] -= delta;
        }
      }
      j0 = j1;
    } while (matched[j0] != 0);
    do {
      const std::ptrdiff_t j1 = path[j0];
      matched[j0] = matched[j1];
      j0 = j1;
    } while (j0 != 0);
  }

  Assignment result;
  result.permutation.assign(cost.size(), 0);
  for (std::ptrdiff_t j = 1; j <= n; ++j) {
    result.permutation[static_cast<std::size_t>(matched[j] - 1)] =
        static_cast<std::size_t>(j - 1);
  }
  for (std::size_t i = 0; i < cost.size(); ++i) result.cost += cost.at(i, result.permutation[i]);
  return result;
}

Assignment assignment_bruteforce(const CostMatrix& cost) {
  if (cost.size() > 8) {
    throw std::invalid_argument("assignment_bruteforce: limited to n <= 8, got n=" +
                                std::to_string(cost.size()));
  }
  std::vector<std::size_t> perm(cost.size());
  std::iota(perm.begin(), perm.end(), 0);

  Assignment best;
  best.cost = std::numeric_limits<double>::infinity();
  // next_permutation enumerates lexicographically, so keeping strict
  // improvements only leaves the lexicographically smallest minimizer.
  do {
    double total = 0.0;
    for (std::size_t i = 0; i < perm.size(); ++i) total += cost.at(i, perm[i]);
    if (total < best.cost) {
      best.cost = total;
      best.permutation = perm;
    }
  } while (std::next_permutation(perm.begin(), perm.end()));
  return best;
}

EnsembleTransport w1_ensembles_detail(const Ensemble& a, const Ensemble& b) {
  if (a.size() != b.size()) {
    throw std::invalid_argument("w1_ensembles: ensembles must have equal member counts");
  }
  if (!same_grid(a.member(0), b.member(0))) {
    throw std::invalid_argument("w1_ensembles: ensembles must share one grid");
  }

  const std::size_t m = a.size();
  CostMatrix cost(m);
  parallel_for(m, [&](std::size_t i) {
    for (std::size_t j = 0; j < m; ++j) cost.at(i, j) = l1_distance(a.member(i), b.member(j));
  });

  EnsembleTransport result;
  result.assignment = hungarian(cost);
  std::vector<double> selected(m);
  for (std::size_t i = 0; i < m; ++i) selected[i] = cost.at(i, result.assignment.permutation[i]);
  std::ranges::sort(selected);
  double total = 0.0;
  for (double c : selected) total += c;
  result.w1 = total / static_cast<double>(m);
  return result;
}

double w1_ensembles(const Ensemble& a, const Ensemble& b) {
  return w1_ensembles_detail(a, b).w1;
}

double kr_lower_bound(const Ensemble& a, const Ensemble& b,
                      std::span<const GridFunction> witness_anchors) {
  double best = 0.0;
  for (const auto& anchor : witness_anchors) {
    double mean_a = 0.0, mean_b = 0.0;
    for (const auto& u : a.members()) mean_a += l1_distance(u, anchor);
    for (const auto& u : b.members()) mean_b += l1_distance(u, anchor);
    mean_a /= static_cast<double>(a.size());
    mean_b /= static_cast<double>(b.size());
    best = std::max(best, std::abs(mean_a - mean_b));
  }
  return best;
}

}  // namespace statsol
