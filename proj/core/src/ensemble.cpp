#include "statsol/ensemble.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "statsol/parallel.hpp"
#include "statsol/rng.hpp"
#include "statsol/solver.hpp"

namespace statsol {

Ensemble::Ensemble(std::vector<GridFunction> members, std::uint64_t seed_tag)
    : members_(std::move(members)), seed_tag_(seed_tag) {
  if (members_.empty()) throw std::invalid_argument("Ensemble: needs at least one member");
  parts_ = {MixturePart{1.0, 0, members_.size()}};
  validate();
}

Ensemble::Ensemble(std::vector<GridFunction> members, std::vector<MixturePart> parts,
                   std::uint64_t seed_tag)
    : members_(std::move(members)), parts_(std::move(parts)), seed_tag_(seed_tag) {
  if (members_.empty()) throw std::invalid_argument("Ensemble: needs at least one member");
  validate();
}

void Ensemble::validate() const {
  for (const auto& m : members_) {
    if (!same_grid(m, members_.front())) {
      throw std::invalid_argument("Ensemble: members must share one grid");
    }
  }
  if (parts_.empty()) throw std::invalid_argument("Ensemble: empty part decomposition");
  std::size_t cursor = 0;
  double weight_sum = 0.0;
  for (const auto& part : parts_) {
    if (part.offset != cursor || part.count == 0) {
      throw std::invalid_argument("Ensemble: parts must tile the member range");
    }
    if (!(part.weight > 0.0)) throw std::invalid_argument("Ensemble: part weights must be positive");
    cursor += part.count;
    weight_sum += part.weight;
  }
  if (cursor != members_.size()) {
    throw std::invalid_argument("Ensemble: parts must cover all members");
  }
  if (std::abs(weight_sum - 1.0) > 1e-9) {
    throw std::invalid_argument("Ensemble: part weights must sum to one");
  }
}

Ensemble Ensemble::with_parts(std::vector<MixturePart> parts) const {
  return Ensemble(members_, std::move(parts), seed_tag_);
}

Ensemble Ensemble::permuted(std::span<const std::size_t> order) const {
  if (order.size() != members_.size()) {
    throw std::invalid_argument("Ensemble::permuted: order size mismatch");
  }
  std::vector<bool> seen(members_.size(), false);
  std::vector<GridFunction> reordered;
  reordered.reserve(members_.size());
  for (std::size_t idx : order) {
    if (idx >= members_.size() || seen[idx]) {
      throw std::invalid_argument("Ensemble::permuted: order is not a permutation");
    }
    seen[idx] = true;
    reordered.push_back(members_[idx]);
  }
  return Ensemble(std::move(reordered), seed_tag_);
}

CovarianceKernel brownian_kernel() {
  return CovarianceKernel{"brownian", [](double x, double y) { return std::min(x, y); }};
}

CovarianceKernel exponential_kernel(double length_scale) {
  if (!(length_scale > 0.0)) {
    throw std::invalid_argument("exponential_kernel: length scale must be positive");
  }
  return CovarianceKernel{"exponential", [length_scale](double x, double y) {
                            return std::exp(-std::abs(x - y) / length_scale);
                          }};
}

CovarianceKernel kernel_by_name(const std::string& name, double length_scale) {
  if (name == "brownian") return brownian_kernel();
  if (name == "exponential") return exponential_kernel(length_scale);
  throw std::invalid_argument("unknown covariance kernel '" + name +
                              "' (expected brownian or exponential)");
}

Ensemble sample_gaussian(const CovarianceKernel& kernel, const GridLayout& layout,
                         std::size_t members, std::uint64_t seed) {
  if (members == 0) throw std::invalid_argument("sample_gaussian: member count must be positive");
  if (layout.n_cells == 0) throw std::invalid_argument("sample_gaussian: empty grid");

  const auto n = static_cast<Eigen::Index>(layout.n_cells);
  const double dx = layout.domain.length() / static_cast<double>(layout.n_cells);
  std::vector<double> centers(layout.n_cells);
  for (std::size_t j = 0; j < layout.n_cells; ++j) {
    centers[j] = layout.domain.left + (static_cast<double>(j) + 0.5) * dx;
  }

  Eigen::MatrixXd gram(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) {
      gram(i, j) = kernel.kernel(centers[static_cast<std::size_t>(i)],
                                 centers[static_cast<std::size_t>(j)]);
    }
  }
  const double symmetry = (gram - gram.transpose()).cwiseAbs().maxCoeff();
  if (symmetry > 1e-14 * (1.0 + gram.cwiseAbs().maxCoeff())) {
    throw std::invalid_argument("sample_gaussian: kernel is not symmetric on this grid");
  }

  const double nugget = 1e-10 * (gram.trace() / static_cast<double>(n) + 1.0);
  gram.diagonal().array() += nugget;
  const Eigen::LLT<Eigen::MatrixXd> llt(gram);
  if (llt.info() != Eigen::Success) {
    throw std::runtime_error("sample_gaussian: kernel not positive semidefinite on this grid");
  }
  const Eigen::MatrixXd factor = llt.matrixL();

  std::vector<std::vector<double>> draws(members);
  parallel_for(members, [&](std::size_t m) {
    RandomStream stream = RandomStream::derive(seed, m);
    Eigen::VectorXd z(n);
    stream.fill_standard_normal(std::span<double>(z.data(), static_cast<std::size_t>(n)));
    const Eigen::VectorXd sample = factor * z;
    draws[m].assign(sample.data(), sample.data() + n);
  });

  std::vector<GridFunction> result;
  result.reserve(members);
  for (std::size_t m = 0; m < members; ++m) {
    result.emplace_back(layout.domain, std::move(draws[m]));
  }
  return Ensemble(std::move(result), seed);
}

namespace {

// Smallest total member count realizing the weights by multiplicity, or 0 if
// none exists below the scan limit. Each part needs weight*total/size to be a
// positive integer; summing those shows any admissible total already holds
// every distinct member at least once.
std::size_t smallest_realizable_total(std::span<const std::pair<double, Ensemble>> parts) {
  constexpr std::size_t limit = 1u << 20;
  for (std::size_t total = 1; total <= limit; ++total) {
    bool ok = true;
    for (const auto& [weight, ensemble] : parts) {
      const double copies =
          weight * static_cast<double>(total) / static_cast<double>(ensemble.size());
      if (copies < 0.5 || std::abs(copies - std::round(copies)) > 1e-9) {
        ok = false;
        break;
      }
    }
    if (ok) return total;
  }
  return 0;
}

}  // namespace

Ensemble mixture(std::span<const std::pair<double, Ensemble>> parts, std::size_t total_members) {
  if (parts.empty()) throw std::invalid_argument("mixture: needs at least one part");
  double weight_sum = 0.0;
  for (const auto& [weight, ensemble] : parts) {
    (void)ensemble;
    if (!(weight > 0.0)) throw std::invalid_argument("mixture: weights must be positive");
    weight_sum += weight;
  }
  if (std::abs(weight_sum - 1.0) > 1e-9) {
    throw std::invalid_argument("mixture: weights must sum to one");
  }
  for (const auto& [weight, ensemble] : parts) {
    (void)weight;
    if (!same_grid(ensemble.member(0), parts.front().second.member(0))) {
      throw std::invalid_argument("mixture: parts must share one grid");
    }
  }

  if (total_members == 0) {
    total_members = smallest_realizable_total(parts);
    if (total_members == 0) {
      throw std::invalid_argument("mixture: weights admit no multiplicity realization");
    }
  }

  std::vector<GridFunction> members;
  std::vector<MixturePart> boundaries;
  members.reserve(total_members);
  for (const auto& [weight, ensemble] : parts) {
    const double copies_real =
        weight * static_cast<double>(total_members) / static_cast<double>(ensemble.size());
    const double rounded = std::round(copies_real);
    if (rounded < 1.0 || std::abs(copies_real - rounded) > 1e-9) {
      const std::size_t denominator = smallest_realizable_total(parts);
      throw std::invalid_argument(
          "mixture: weights not realizable with " + std::to_string(total_members) +
          " members; smallest realizable total is " +
          (denominator ? std::to_string(denominator) : std::string("unknown")));
    }
    const auto copies = static_cast<std::size_t>(rounded);
    boundaries.push_back(MixturePart{weight, members.size(), copies * ensemble.size()});
    for (std::size_t m = 0; m < ensemble.size(); ++m) {
      for (std::size_t c = 0; c < copies; ++c) members.push_back(ensemble.member(m));
    }
  }
  if (members.size() != total_members) {
    throw std::invalid_argument("mixture: weights not realizable with " +
                                std::to_string(total_members) + " members");
  }
  return Ensemble(std::move(members), std::move(boundaries), parts.front().second.seed_tag());
}

Trajectory::Trajectory(std::vector<double> times, std::vector<Ensemble> states)
    : times_(std::move(times)), states_(std::move(states)) {
  if (times_.empty() || times_.size() != states_.size()) {
    throw std::invalid_argument("Trajectory: one state per time required");
  }
  if (times_.front() != 0.0) throw std::invalid_argument("Trajectory: times must start at 0");
  for (std::size_t k = 0; k + 1 < times_.size(); ++k) {
    if (!(times_[k] < times_[k + 1])) {
      throw std::invalid_argument("Trajectory: times must be strictly increasing");
    }
  }
  for (const auto& state : states_) {
    if (state.size() != states_.front().size() ||
        !same_grid(state.member(0), states_.front().member(0))) {
      throw std::invalid_argument("Trajectory: states must share grid and member count");
    }
  }
}

Trajectory Trajectory::with_parts(std::vector<MixturePart> parts) const {
  std::vector<Ensemble> reparted;
  reparted.reserve(states_.size());
  for (const auto& state : states_) reparted.push_back(state.with_parts(parts));
  return Trajectory(times_, std::move(reparted));
}

Trajectory Trajectory::permuted(std::span<const std::size_t> order) const {
  std::vector<Ensemble> reordered;
  reordered.reserve(states_.size());
  for (const auto& state : states_) reordered.push_back(state.permuted(order));
  return Trajectory(times_, std::move(reordered));
}

std::vector<Trajectory> canonical_solutions(std::span<const Ensemble> initial,
                                            const FluxModel& model,
                                            std::span<const double> times, double cfl) {
  if (initial.empty()) throw std::invalid_argument("canonical_solutions: no ensembles");
  if (times.empty() || times.front() != 0.0) {
    throw std::invalid_argument("canonical_solutions: times must start at 0");
  }
  if (!(cfl > 0.0) || cfl > 1.0) {
    throw std::invalid_argument("canonical_solutions: cfl must lie in (0, 1]");
  }
  for (const auto& ensemble : initial) {
    if (!same_grid(ensemble.member(0), initial.front().member(0))) {
      throw std::invalid_argument("canonical_solutions: ensembles must share one grid");
    }
  }

  // Flat working copy of every member across all ensembles.
  std::vector<GridFunction> flat;
  for (const auto& ensemble : initial) {
    for (const auto& member : ensemble.members()) flat.push_back(member);
  }
  const double dx = flat.front().dx();

  std::vector<std::vector<Ensemble>> states_per_ensemble(initial.size());
  auto snapshot = [&] {
    std::size_t offset = 0;
    for (std::size_t e = 0; e < initial.size(); ++e) {
      std::vector<GridFunction> members(flat.begin() + static_cast<std::ptrdiff_t>(offset),
                                        flat.begin() + static_cast<std::ptrdiff_t>(
                                                           offset + initial[e].size()));
      states_per_ensemble[e].emplace_back(
          std::move(members),
          std::vector<MixturePart>(initial[e].parts().begin(), initial[e].parts().end()),
          initial[e].seed_tag());
      offset += initial[e].size();
    }
  };

  snapshot();
  double t = 0.0;
  for (std::size_t k = 1; k < times.size(); ++k) {
    if (!(times[k] > times[k - 1])) {
      throw std::invalid_argument("canonical_solutions: times must be strictly increasing");
    }
    while (t < times[k]) {
      double speed = 0.0;
      for (const auto& member : flat) speed = std::max(speed, max_wave_speed(model, member));
      const double remaining = times[k] - t;
      double dt = remaining;
      if (speed > 0.0) dt = std::min(remaining, cfl * dx / speed);
      if (dt >= remaining) {
        dt = remaining;
        t = times[k];
      } else {
        t += dt;
      }
      parallel_for(flat.size(), [&](std::size_t m) { flat[m] = step(flat[m], model, dt); });
    }
    snapshot();
  }

  std::vector<Trajectory> result;
  result.reserve(initial.size());
  for (std::size_t e = 0; e < initial.size(); ++e) {
    result.emplace_back(std::vector<double>(times.begin(), times.end()),
                        std::move(states_per_ensemble[e]));
  }
  return result;
}

Trajectory canonical_solution(const Ensemble& initial, const FluxModel& model,
                              std::span<const double> times, double cfl) {
  return std::move(
      canonical_solutions(std::span<const Ensemble>(&initial, 1), model, times, cfl).front());
}

}  // namespace statsol
