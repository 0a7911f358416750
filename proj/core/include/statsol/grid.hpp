#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace statsol {

/// Spatial domain: an interval, optionally treated as a flat torus.
struct Domain {
  double left = 0.0;
  double right = 1.0;
  bool periodic = true;

  double length() const { return right - left; }
  /// Signed displacement from b to a; shortest wrapped representative on the
  /// torus, plain difference otherwise.
  double displacement(double a, double b) const;
};

bool operator==(const Domain& a, const Domain& b);

/// Domain plus resolution; used when sampling fresh grid functions.
struct GridLayout {
  Domain domain;
  std::size_t n_cells = 1;
};

/// A piecewise-constant function on a uniform 1-D grid, stored as cell
/// averages. Immutable after construction.
class GridFunction {
 public:
  GridFunction(Domain domain, std::vector<double> values);

  static GridFunction constant(const GridLayout& layout, double value);
  /// Samples `profile` at cell centers.
  template <typename F>
  static GridFunction sample(const GridLayout& layout, F&& profile) {
    std::vector<double> values(layout.n_cells);
    const double dx = layout.domain.length() / static_cast<double>(layout.n_cells);
    for (std::size_t j = 0; j < layout.n_cells; ++j) {
      values[j] = profile(layout.domain.left + (static_cast<double>(j) + 0.5) * dx);
    }
    return GridFunction(layout.domain, std::move(values));
  }

  const Domain& domain() const { return domain_; }
  std::size_t n_cells() const { return values_.size(); }
  double dx() const { return dx_; }
  double cell_center(std::size_t j) const {
    return domain_.left + (static_cast<double>(j) + 0.5) * dx_;
  }
  std::span<const double> values() const { return values_; }
  double value(std::size_t j) const { return values_[j]; }

  /// New function on the same grid with different cell values.
  GridFunction with_values(std::vector<double> values) const;

 private:
  Domain domain_;
  double dx_;
  std::vector<double> values_;
};

/// True when the two functions share domain, resolution and periodicity.
bool same_grid(const GridFunction& u, const GridFunction& v);

/// (sum_j |u_j|^p dx)^(1/p). Only p = 1 and p = 2 are supported.
double lp_norm(const GridFunction& u, double p);

/// sum_j |u_j - v_j| dx on a shared grid.
double l1_distance(const GridFunction& u, const GridFunction& v);

/// Value of the cell containing x. Cells are half-open [left, right) with the
/// last cell closed; periodic domains wrap x first, bounded domains reject
/// points outside [left, right].
double eval_at(const GridFunction& u, double x);

/// A finite family of disjoint intervals covering the domain, stored as a
/// strictly increasing breakpoint sequence. Immutable after construction.
class Partition {
 public:
  explicit Partition(std::vector<double> breakpoints);

  std::size_t n_cells() const { return breakpoints_.size() - 1; }
  double left(std::size_t i) const { return breakpoints_[i]; }
  double right(std::size_t i) const { return breakpoints_[i + 1]; }
  double width(std::size_t i) const { return breakpoints_[i + 1] - breakpoints_[i]; }
  std::span<const double> breakpoints() const { return breakpoints_; }
  /// Largest cell width; the mesh parameter h.
  double mesh_size() const;
  /// Index of the cell containing x (last cell closed on the right).
  std::size_t locate(double x) const;

 private:
  std::vector<double> breakpoints_;
};

/// N equal-width cells over [left, right].
Partition uniform_partition(double left, double right, std::size_t n);

/// Splits every cell of `base` into `factor` equal subcells; the result is a
/// refinement of `base` (every new cell lies inside an old one).
Partition refine_partition(const Partition& base, std::size_t factor);

}  // namespace statsol
