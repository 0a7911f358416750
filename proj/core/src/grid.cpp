#include "statsol/grid.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace statsol {

double Domain::displacement(double a, double b) const {
  double d = a - b;
  if (periodic) {
    const double period = length();
    d -= period * std::floor(d / period + 0.5);
  }
  return d;
}

bool operator==(const Domain& a, const Domain& b) {
  return a.left == b.left && a.right == b.right && a.periodic == b.periodic;
}

GridFunction::GridFunction(Domain domain, std::vector<double> values)
    : domain_(domain), values_(std::move(values)) {
  if (values_.empty()) throw std::invalid_argument("GridFunction: needs at least one cell");
  if (!(domain_.left < domain_.right)) {
    throw std::invalid_argument("GridFunction: domain_left must be below domain_right");
  }
  dx_ = domain_.length() / static_cast<double>(values_.size());
  for (double v : values_) {
    if (!std::isfinite(v)) throw std::invalid_argument("GridFunction: non-finite cell value");
  }
}

GridFunction GridFunction::constant(const GridLayout& layout, double value) {
  return GridFunction(layout.domain, std::vector<double>(layout.n_cells, value));
}

GridFunction GridFunction::with_values(std::vector<double> values) const {
  if (values.size() != values_.size()) {
    throw std::invalid_argument("GridFunction::with_values: cell count mismatch");
  }
  return GridFunction(domain_, std::move(values));
}

bool same_grid(const GridFunction& u, const GridFunction& v) {
  return u.domain() == v.domain() && u.n_cells() == v.n_cells();
}

double lp_norm(const GridFunction& u, double p) {
  if (p != 1.0 && p != 2.0) {
    throw std::invalid_argument("lp_norm: only p in {1, 2} is supported, got p=" +
                                std::to_string(p));
  }
  double sum = 0.0;
  if (p == 1.0) {
    for (double v : u.values()) sum += std::abs(v);
    return sum * u.dx();
  }
  for (double v : u.values()) sum += v * v;
  return std::sqrt(sum * u.dx());
}

double l1_distance(const GridFunction& u, const GridFunction& v) {
  if (!same_grid(u, v)) throw std::invalid_argument("l1_distance: mismatched grids");
  double sum = 0.0;
  for (std::size_t j = 0; j < u.n_cells(); ++j) sum += std::abs(u.value(j) - v.value(j));
  return sum * u.dx();
}

double eval_at(const GridFunction& u, double x) {
  const Domain& d = u.domain();
  if (d.periodic) {
    const double period = d.length();
    x -= period * std::floor((x - d.left) / period);
  } else if (x < d.left || x > d.right) {
    throw std::invalid_argument("eval_at: x=" + std::to_string(x) +
                                " outside bounded domain [" + std::to_string(d.left) + ", " +
                                std::to_string(d.right) + "]");
  }
  auto j = static_cast<std::ptrdiff_t>(std::floor((x - d.left) / u.dx()));
  j = std::clamp<std::ptrdiff_t>(j, 0, static_cast<std::ptrdiff_t>(u.n_cells()) - 1);
  return u.value(static_cast<std::size_t>(j));
}

Partition::Partition(std::vector<double> breakpoints) : breakpoints_(std::move(breakpoints)) {
  if (breakpoints_.size() < 2) {
    throw std::invalid_argument("Partition: needs at least two breakpoints");
  }
  for (std::size_t i = 0; i + 1 < breakpoints_.size(); ++i) {
    if (!(breakpoints_[i] < breakpoints_[i + 1])) {
      throw std::invalid_argument("Partition: breakpoints must be strictly increasing");
    }
  }
}

double Partition::mesh_size() const {
  double h = 0.0;
  for (std::size_t i = 0; i < n_cells(); ++i) h = std::max(h, width(i));
  return h;
}

std::size_t Partition::locate(double x) const {
  if (x < breakpoints_.front() || x > breakpoints_.back()) {
    throw std::invalid_argument("Partition::locate: x outside the partitioned domain");
  }
  const auto it = std::upper_bound(breakpoints_.begin(), breakpoints_.end(), x);
  const auto idx = static_cast<std::size_t>(it - breakpoints_.begin());
  if (idx == 0) return 0;
  return std::min(idx - 1, n_cells() - 1);
}

Partition uniform_partition(double left, double right, std::size_t n) {
  if (n == 0) throw std::invalid_argument("uniform_partition: cell count must be positive");
  if (!(left < right)) throw std::invalid_argument("uniform_partition: empty domain");
  std::vector<double> breakpoints(n + 1);
  const double h = (right - left) / static_cast<double>(n);
  for (std::size_t i = 0; i <= n; ++i) breakpoints[i] = left + static_cast<double>(i) * h;
  breakpoints.back() = right;
  return Partition(std::move(breakpoints));
}

Partition refine_partition(const Partition& base, std::size_t factor) {
  if (factor == 0) throw std::invalid_argument("refine_partition: factor must be positive");
  std::vector<double> breakpoints;
  breakpoints.reserve(base.n_cells() * factor + 1);
  for (std::size_t i = 0; i < base.n_cells(); ++i) {
    const double a = base.left(i);
    const double w = base.width(i) / static_cast<double>(factor);
    for (std::size_t s = 0; s < factor; ++s) {
      breakpoints.push_back(a + static_cast<double>(s) * w);
    }
  }
  breakpoints.push_back(base.breakpoints().back());
  return Partition(std::move(breakpoints));
}

}  // namespace statsol
