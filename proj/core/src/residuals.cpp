#include "statsol/residuals.hpp"

#include <cmath>
#include <stdexcept>

#include "statsol/parallel.hpp"

namespace statsol {

namespace {

double cutoff_exp(double s) { return s > 0.0 ? std::exp(-1.0 / s) : 0.0; }
double cutoff_exp_derivative(double s) {
  return s > 0.0 ? std::exp(-1.0 / s) / (s * s) : 0.0;
}

double sgn(double x) { return x > 0.0 ? 1.0 : (x < 0.0 ? -1.0 : 0.0); }

}  // namespace

TestFunction::TestFunction(double center, double half_width, double t_open, double t_close)
    : center_(center), half_width_(half_width), t_open_(t_open), t_close_(t_close) {
  if (!(half_width > 0.0)) throw std::invalid_argument("TestFunction: half width must be positive");
  if (!(t_open >= 0.0) || !(t_open < t_close)) {
    throw std::invalid_argument("TestFunction: require 0 <= t_open < t_close");
  }
}

double TestFunction::psi(double x, const Domain& domain) const {
  const double s = domain.displacement(x, center_) / half_width_;
  if (std::abs(s) >= 1.0) return 0.0;
  return std::exp(1.0 - 1.0 / (1.0 - s * s));
}

double TestFunction::dpsi(double x, const Domain& domain) const {
  const double s = domain.displacement(x, center_) / half_width_;
  if (std::abs(s) >= 1.0) return 0.0;
  const double one_minus = 1.0 - s * s;
  const double value = std::exp(1.0 - 1.0 / one_minus);
  return value * (-2.0 * s / (one_minus * one_minus)) / half_width_;
}

double TestFunction::theta(double t) const {
  if (t <= t_open_) return 1.0;
  if (t >= t_close_) return 0.0;
  const double s = (t - t_open_) / (t_close_ - t_open_);
  const double a = cutoff_exp(1.0 - s);
  const double b = cutoff_exp(s);
  return a / (a + b);
}

double TestFunction::dtheta(double t) const {
  if (t <= t_open_ || t >= t_close_) return 0.0;
  const double s = (t - t_open_) / (t_close_ - t_open_);
  const double a = cutoff_exp(1.0 - s);
  const double b = cutoff_exp(s);
  const double da = -cutoff_exp_derivative(1.0 - s);
  const double db = cutoff_exp_derivative(s);
  const double denom = (a + b) * (a + b);
  return ((da * b - a * db) / denom) / (t_close_ - t_open_);
}

void TestFunction::check_support(const Domain& domain) const {
  if (domain.periodic) {
    if (half_width_ > 0.5 * domain.length()) {
      throw std::invalid_argument("TestFunction: bump wraps onto itself on the torus");
    }
    return;
  }
  if (!(center_ - half_width_ > domain.left) || !(center_ + half_width_ < domain.right)) {
    throw std::invalid_argument("TestFunction: support must lie strictly inside the domain");
  }
}

namespace {

void check_time_grid(const Trajectory& traj, const TestFunction& tf) {
  if (traj.times().back() < tf.t_close() - 1e-12) {
    throw std::invalid_argument("residual: trajectory ends before the cutoff window closes");
  }
  double max_dt = 0.0;
  for (std::size_t n = 0; n + 1 < traj.n_times(); ++n) {
    if (traj.time(n) >= tf.t_close()) break;
    max_dt = std::max(max_dt, traj.time(n + 1) - traj.time(n));
  }
  if (max_dt > tf.t_close() - tf.t_open()) {
    throw std::invalid_argument("residual: trajectory time grid does not resolve the cutoff");
  }
}

struct BumpTables {
  std::vector<double> psi;
  std::vector<double> dpsi;
};

BumpTables tabulate(const TestFunction& tf, const GridFunction& proto) {
  BumpTables tables;
  tables.psi.resize(proto.n_cells());
  tables.dpsi.resize(proto.n_cells());
  for (std::size_t j = 0; j < proto.n_cells(); ++j) {
    const double x = proto.cell_center(j);
    tables.psi[j] = tf.psi(x, proto.domain());
    tables.dpsi[j] = tf.dpsi(x, proto.domain());
  }
  return tables;
}

// Per-member moment residual: with the tensorized bump, the k-dimensional
// cell sums factor into powers of one-dimensional quadratures, so each member
// costs O(n_cells) per time level instead of O(n_cells^k).
double member_moment_residual(const Trajectory& traj, std::size_t member, std::size_t k,
                              const FluxModel& model,
                              std::span<const ScaledTestFunction> terms,
                              std::span<const BumpTables> tables) {
  const double dx = traj.initial().member(0).dx();
  double residual = 0.0;
  for (std::size_t a = 0; a < terms.size(); ++a) {
    const TestFunction& tf = terms[a].tf;
    const auto& table = tables[a];
    double contribution = 0.0;
    for (std::size_t n = 0; n + 1 < traj.n_times(); ++n) {
      const double t = traj.time(n);
      if (t >= tf.t_close()) break;
      const double dt = traj.time(n + 1) - t;
      const auto values = traj.state(n).member(member).values();
      double weighted = 0.0, flux_weighted = 0.0;
      for (std::size_t j = 0; j < values.size(); ++j) {
        weighted += values[j] * table.psi[j];
        flux_weighted += model.flux(values[j]) * table.dpsi[j];
      }
      weighted *= dx;
      flux_weighted *= dx;
      const double power = k == 1 ? 1.0 : std::pow(weighted, static_cast<double>(k) - 1.0);
      contribution += dt * (tf.dtheta(t) * power * weighted +
                            static_cast<double>(k) * tf.theta(t) * flux_weighted * power);
    }
    {
      const auto values = traj.initial().member(member).values();
      double weighted = 0.0;
      for (std::size_t j = 0; j < values.size(); ++j) weighted += values[j] * table.psi[j];
      weighted *= dx;
      contribution += std::pow(weighted, static_cast<double>(k)) * tf.theta(0.0);
    }
    residual += terms[a].coefficient * contribution;
  }
  return residual;
}

EntropyResidual member_kruzkov_residual(const Trajectory& traj, std::size_t member, double c,
                                        const FluxModel& model,
                                        std::span<const ScaledTestFunction> terms,
                                        std::span<const BumpTables> tables) {
  const double dx = traj.initial().member(0).dx();
  const double flux_at_c = model.flux(c);
  EntropyResidual result;
  for (std::size_t a = 0; a < terms.size(); ++a) {
    const TestFunction& tf = terms[a].tf;
    const auto& table = tables[a];
    const double coeff = terms[a].coefficient;
    for (std::size_t n = 0; n + 1 < traj.n_times(); ++n) {
      const double t = traj.time(n);
      if (t >= tf.t_close()) break;
      const double dt = traj.time(n + 1) - t;
      const double theta = tf.theta(t);
      const double dtheta = tf.dtheta(t);
      const auto values = traj.state(n).member(member).values();
      double entropy_term = 0.0, flux_term = 0.0;
      double entropy_abs = 0.0, flux_abs = 0.0;
      for (std::size_t j = 0; j < values.size(); ++j) {
        const double entropy = std::abs(values[j] - c);
        const double entropy_flux = sgn(values[j] - c) * (model.flux(values[j]) - flux_at_c);
        entropy_term += entropy * table.psi[j];
        flux_term += entropy_flux * table.dpsi[j];
        entropy_abs += std::abs(entropy * table.psi[j]);
        flux_abs += std::abs(entropy_flux * table.dpsi[j]);
      }
      result.value += coeff * dt * dx * (entropy_term * dtheta + flux_term * theta);
      result.scale += coeff * dt * dx *
                      (entropy_abs * std::abs(dtheta) + flux_abs * std::abs(theta));
    }
    {
      const auto values = traj.initial().member(member).values();
      double entropy_term = 0.0;
      for (std::size_t j = 0; j < values.size(); ++j) {
        entropy_term += std::abs(values[j] - c) * table.psi[j];
      }
      result.value += coeff * dx * entropy_term * tf.theta(0.0);
      result.scale += coeff * dx * entropy_term * tf.theta(0.0);
    }
  }
  return result;
}

std::vector<BumpTables> validate_and_tabulate(const Trajectory& traj,
                                              std::span<const ScaledTestFunction> terms) {
  if (terms.empty()) throw std::invalid_argument("residual: no test function supplied");
  const GridFunction& proto = traj.initial().member(0);
  std::vector<BumpTables> tables;
  tables.reserve(terms.size());
  for (const auto& term : terms) {
    term.tf.check_support(proto.domain());
    check_time_grid(traj, term.tf);
    tables.push_back(tabulate(term.tf, proto));
  }
  return tables;
}

// Member-range Kruzkov residual; the mean over members [begin, end).
EntropyResidual kruzkov_over_range(const Trajectory& traj, std::size_t begin, std::size_t end,
                                   double c, const FluxModel& model,
                                   std::span<const ScaledTestFunction> terms,
                                   std::span<const BumpTables> tables) {
  const std::size_t count = end - begin;
  std::vector<EntropyResidual> per_member(count);
  parallel_for(count, [&](std::size_t i) {
    per_member[i] = member_kruzkov_residual(traj, begin + i, c, model, terms, tables);
  });
  EntropyResidual total;
  for (const auto& r : per_member) {
    total.value += r.value;
    total.scale += r.scale;
  }
  total.value /= static_cast<double>(count);
  total.scale /= static_cast<double>(count);
  return total;
}

}  // namespace

double moment_residual(const Trajectory& traj, std::size_t k, const FluxModel& model,
                       const TestFunction& tf) {
  const ScaledTestFunction term{1.0, tf};
  return moment_residual(traj, k, model, std::span<const ScaledTestFunction>(&term, 1));
}

double moment_residual(const Trajectory& traj, std::size_t k, const FluxModel& model,
                       std::span<const ScaledTestFunction> terms) {
  if (k < 1 || k > 3) {
    throw std::invalid_argument("moment_residual: order k must lie in {1, 2, 3}");
  }
  const auto tables = validate_and_tabulate(traj, terms);

  std::vector<double> per_member(traj.members());
  parallel_for(traj.members(), [&](std::size_t m) {
    per_member[m] = member_moment_residual(traj, m, k, model, terms, tables);
  });
  double total = 0.0;
  for (double r : per_member) total += r;
  return total / static_cast<double>(traj.members());
}

EntropyResidual kruzkov_residual(const Trajectory& traj, double c, const FluxModel& model,
                                 const TestFunction& tf) {
  const ScaledTestFunction term{1.0, tf};
  return kruzkov_residual(traj, c, model, std::span<const ScaledTestFunction>(&term, 1));
}

EntropyResidual kruzkov_residual(const Trajectory& traj, double c, const FluxModel& model,
                                 std::span<const ScaledTestFunction> terms) {
  for (const auto& term : terms) {
    if (term.coefficient < 0.0) {
      throw std::invalid_argument("kruzkov_residual: test function must be nonnegative");
    }
  }
  const auto tables = validate_and_tabulate(traj, terms);
  return kruzkov_over_range(traj, 0, traj.members(), c, model, terms, tables);
}

EntropyResidual mixture_entropy_residual(const Trajectory& traj,
                                         std::span<const double> constants,
                                         const FluxModel& model, const TestFunction& tf) {
  const auto parts = traj.initial().parts();
  if (constants.size() != parts.size()) {
    throw std::invalid_argument("mixture_entropy_residual: got " +
                                std::to_string(constants.size()) + " constants for " +
                                std::to_string(parts.size()) + " mixture parts");
  }
  const ScaledTestFunction term{1.0, tf};
  const std::span<const ScaledTestFunction> terms(&term, 1);
  const auto tables = validate_and_tabulate(traj, terms);

  EntropyResidual total;
  for (std::size_t i = 0; i < parts.size(); ++i) {
    const EntropyResidual part = kruzkov_over_range(
        traj, parts[i].offset, parts[i].offset + parts[i].count, constants[i], model, terms,
        tables);
    total.value += parts[i].weight * part.value;
    total.scale += parts[i].weight * part.scale;
  }
  return total;
}

}  // namespace statsol
