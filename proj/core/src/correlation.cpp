#include "statsol/correlation.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "statsol/parallel.hpp"
#include "statsol/rng.hpp"

namespace statsol {

namespace {

constexpr std::size_t kMaxOrder = 6;

void check_points(std::span<const double> points) {
  if (points.empty() || points.size() > kMaxOrder) {
    throw std::invalid_argument("correlation: point tuple order must lie in [1, 6]");
  }
}

}  // namespace

MarginalSample marginal_samples(const Ensemble& ensemble, std::span<const double> points) {
  check_points(points);
  MarginalSample sample;
  sample.points.assign(points.begin(), points.end());
  sample.atoms.resize(ensemble.size() * points.size());
  for (std::size_t m = 0; m < ensemble.size(); ++m) {
    for (std::size_t i = 0; i < points.size(); ++i) {
      sample.atoms[m * points.size() + i] = eval_at(ensemble.member(m), points[i]);
    }
  }
  return sample;
}

double moment(const Ensemble& ensemble, std::span<const double> points) {
  check_points(points);
  double sum = 0.0;
  double values[kMaxOrder];
  for (std::size_t m = 0; m < ensemble.size(); ++m) {
    for (std::size_t i = 0; i < points.size(); ++i) {
      values[i] = eval_at(ensemble.member(m), points[i]);
    }
    // Multiplying in sorted order makes the estimator bitwise invariant
    // under permutations of the point tuple.
    std::sort(values, values + points.size());
    double product = 1.0;
    for (std::size_t i = 0; i < points.size(); ++i) product *= values[i];
    sum += product;
  }
  return sum / static_cast<double>(ensemble.size());
}

double flux_moment(const Ensemble& ensemble, std::span<const double> points,
                   const FluxModel& model, std::size_t flux_slot) {
  check_points(points);
  if (flux_slot >= points.size()) {
    throw std::invalid_argument("flux_moment: flux slot exceeds tuple order");
  }
  double sum = 0.0;
  for (std::size_t m = 0; m < ensemble.size(); ++m) {
    double product = 1.0;
    for (std::size_t i = 0; i < points.size(); ++i) {
      const double value = eval_at(ensemble.member(m), points[i]);
      product *= (i == flux_slot) ? model.flux(value) : value;
    }
    sum += product;
  }
  return sum / static_cast<double>(ensemble.size());
}

StructureFunctionResult structure_function(const Ensemble& ensemble, double r, double p) {
  const Domain& domain = ensemble.domain();
  const double length = domain.length();
  if (!(r > 0.0)) throw std::invalid_argument("structure_function: radius must be positive");
  if (domain.periodic ? (r >= 0.5 * length) : (r >= length)) {
    throw std::invalid_argument("structure_function: radius too large for the domain");
  }

  const GridFunction& proto = ensemble.member(0);
  const std::size_t n = proto.n_cells();
  const double dx = proto.dx();

  // Ball measure |B_r(x_j) cap D| per cell; constant on the torus.
  std::vector<double> ball(n);
  for (std::size_t j = 0; j < n; ++j) {
    const double x = proto.cell_center(j);
    if (domain.periodic) {
      ball[j] = std::min(2.0 * r, length);
    } else {
      ball[j] = std::min(x + r, domain.right) - std::max(x - r, domain.left);
    }
  }

  // Neighbor window: centers within distance r of x_j.
  const auto reach = static_cast<std::ptrdiff_t>(std::ceil(r / dx));
  std::vector<double> per_member(ensemble.size(), 0.0);
  parallel_for(ensemble.size(), [&](std::size_t m) {
    const auto values = ensemble.member(m).values();
    double total = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
      const double xj = proto.cell_center(j);
      double inner = 0.0;
      for (std::ptrdiff_t o = -reach; o <= reach; ++o) {
        std::ptrdiff_t jj = static_cast<std::ptrdiff_t>(j) + o;
        if (domain.periodic) {
          jj = (jj % static_cast<std::ptrdiff_t>(n) + static_cast<std::ptrdiff_t>(n)) %
               static_cast<std::ptrdiff_t>(n);
        } else if (jj < 0 || jj >= static_cast<std::ptrdiff_t>(n)) {
          continue;
        }
        const double xjj = proto.cell_center(static_cast<std::size_t>(jj));
        if (std::abs(domain.displacement(xjj, xj)) >= r) continue;
        const double diff = std::abs(values[j] - values[static_cast<std::size_t>(jj)]);
        inner += dx * std::pow(diff, p);
      }
      total += dx * inner / ball[j];
    }
    per_member[m] = total;
  });

  StructureFunctionResult result;
  for (double v : per_member) result.value += v;
  result.value /= static_cast<double>(ensemble.size());
  result.below_resolution = r < dx;
  return result;
}

Ensemble project_ensemble(const Ensemble& ensemble, const Partition& partition,
                          std::size_t realizations, std::uint64_t seed) {
  if (realizations == 0) {
    throw std::invalid_argument("project_ensemble: realization count must be positive");
  }
  const GridFunction& proto = ensemble.member(0);
  const std::size_t n = proto.n_cells();

  // Each grid cell belongs to one partition cell; every partition cell must
  // contain at least one grid cell center.
  std::vector<std::size_t> owner(n);
  std::vector<bool> occupied(partition.n_cells(), false);
  for (std::size_t j = 0; j < n; ++j) {
    owner[j] = partition.locate(proto.cell_center(j));
    occupied[owner[j]] = true;
  }
  for (std::size_t i = 0; i < partition.n_cells(); ++i) {
    if (!occupied[i]) {
      throw std::invalid_argument("project_ensemble: partition cell " + std::to_string(i) +
                                  " contains no grid cell center");
    }
  }

  const std::size_t total = ensemble.size() * realizations;
  std::vector<std::vector<double>> values(total);
  parallel_for(total, [&](std::size_t idx) {
    const std::size_t m = idx / realizations;
    const std::size_t rho = idx % realizations;
    RandomStream stream = RandomStream::derive(seed, m, rho);
    std::vector<double> sampled(partition.n_cells());
    for (std::size_t i = 0; i < partition.n_cells(); ++i) {
      const double x = stream.uniform(partition.left(i), partition.right(i));
      sampled[i] = eval_at(ensemble.member(m), x);
    }
    std::vector<double> cells(n);
    for (std::size_t j = 0; j < n; ++j) cells[j] = sampled[owner[j]];
    values[idx] = std::move(cells);
  });

  std::vector<GridFunction> members;
  members.reserve(total);
  for (auto& v : values) members.emplace_back(proto.domain(), std::move(v));

  // Part boundaries survive projection: member-major ordering keeps each
  // part's block contiguous, scaled by the realization count.
  std::vector<MixturePart> parts;
  for (const auto& part : ensemble.parts()) {
    parts.push_back(MixturePart{part.weight, part.offset * realizations,
                                part.count * realizations});
  }
  return Ensemble(std::move(members), std::move(parts), seed);
}

}  // namespace statsol
