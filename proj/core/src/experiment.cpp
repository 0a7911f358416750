#include "statsol/experiment.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

#include "statsol/correlation.hpp"
#include "statsol/ensemble.hpp"
#include "statsol/flux.hpp"
#include "statsol/grid.hpp"
#include "statsol/io.hpp"
#include "statsol/residuals.hpp"
#include "statsol/rng.hpp"
#include "statsol/solver.hpp"
#include "statsol/transport.hpp"

namespace statsol {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

// ---------------------------------------------------------------------------
// Config schema
// ---------------------------------------------------------------------------

enum class KeyKind { Number, Flag, Text, List };

struct KeySpec {
  const char* key;
  KeyKind kind;
  double min = -1e300;
  double max = 1e300;
  bool integral = false;
  std::vector<std::string> allowed_text;
};

const std::vector<KeySpec>& key_schema() {
  static const std::vector<KeySpec> schema = {
      {"seed", KeyKind::Number, 0.0, 9e15, true, {}},
      {"cells", KeyKind::Number, 1.0, 1e7, true, {}},
      {"members", KeyKind::Number, 1.0, 1e7, true, {}},
      {"realizations", KeyKind::Number, 1.0, 1e6, true, {}},
      {"domain_left", KeyKind::Number, -1e12, 1e12, false, {}},
      {"domain_right", KeyKind::Number, -1e12, 1e12, false, {}},
      {"periodic", KeyKind::Flag, 0, 0, false, {}},
      {"flux", KeyKind::Text, 0, 0, false, {"burgers", "advection"}},
      {"speed", KeyKind::Number, -1e6, 1e6, false, {}},
      {"cfl", KeyKind::Number, 1e-12, 1.0, false, {}},
      {"times", KeyKind::List, 0.0, 1e6, false, {}},
      {"time", KeyKind::Number, 1e-12, 1e6, false, {}},
      {"kernel", KeyKind::Text, 0, 0, false, {"brownian", "exponential"}},
      {"length_scale", KeyKind::Number, 1e-12, 1e6, false, {}},
      {"radii", KeyKind::List, 1e-12, 1e6, false, {}},
      {"structure_p", KeyKind::Number, 1.0, 2.0, true, {}},
      {"partition_cells", KeyKind::List, 1.0, 1e6, true, {}},
      {"x0", KeyKind::Number, -1e12, 1e12, false, {}},
      {"w", KeyKind::Number, 1e-12, 1e12, false, {}},
      {"t1", KeyKind::Number, 0.0, 1e6, false, {}},
      {"t2", KeyKind::Number, 1e-12, 1e6, false, {}},
      {"entropy_constants", KeyKind::List, -1e6, 1e6, false, {}},
      {"orders", KeyKind::List, 1.0, 3.0, true, {}},
      {"cells_sweep", KeyKind::List, 2.0, 1e7, true, {}},
      {"mode", KeyKind::Text, 0, 0, false, {"pair", "singleton", "mixture"}},
      {"jump_x0", KeyKind::Number, -1e12, 1e12, false, {}},
      {"mixture_weights", KeyKind::List, 1e-12, 1.0, false, {}},
  };
  return schema;
}

const KeySpec* find_key(const std::string& key) {
  for (const auto& spec : key_schema()) {
    if (key == spec.key) return &spec;
  }
  return nullptr;
}

void check_number(const KeySpec& spec, double value) {
  if (!std::isfinite(value) || value < spec.min || value > spec.max) {
    throw std::invalid_argument("config field '" + std::string(spec.key) +
                                "' out of range [" + std::to_string(spec.min) + ", " +
                                std::to_string(spec.max) + "]");
  }
  if (spec.integral && value != std::floor(value)) {
    throw std::invalid_argument("config field '" + std::string(spec.key) +
                                "' must be an integer");
  }
}

}  // namespace

// ---------------------------------------------------------------------------
// ExperimentConfig
// ---------------------------------------------------------------------------

ExperimentConfig ExperimentConfig::from_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open config '" + path.string() + "'");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return from_json_text(buffer.str());
}

ExperimentConfig ExperimentConfig::from_json_text(const std::string& text) {
  nlohmann::json parsed;
  try {
    parsed = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw std::invalid_argument(std::string("config is not valid JSON: ") + e.what());
  }
  if (!parsed.is_object()) throw std::invalid_argument("config must be a flat JSON object");

  ExperimentConfig config;
  if (!parsed.contains("experiment") || !parsed["experiment"].is_string()) {
    throw std::invalid_argument("config field 'experiment' is required and must be a string");
  }
  config.experiment_ = parsed["experiment"].get<std::string>();
  const auto names = experiment_names();
  if (std::find(names.begin(), names.end(), config.experiment_) == names.end()) {
    throw std::invalid_argument("unknown experiment '" + config.experiment_ + "'");
  }

  for (const auto& [key, value] : parsed.items()) {
    if (key == "experiment") continue;
    const KeySpec* spec = find_key(key);
    if (spec == nullptr) throw std::invalid_argument("unknown config field '" + key + "'");
    switch (spec->kind) {
      case KeyKind::Number: {
        if (!value.is_number()) {
          throw std::invalid_argument("config field '" + key + "' must be a number");
        }
        const double number = value.get<double>();
        check_number(*spec, number);
        config.values_[key] = number;
        break;
      }
      case KeyKind::Flag: {
        if (!value.is_boolean()) {
          throw std::invalid_argument("config field '" + key + "' must be a boolean");
        }
        config.values_[key] = value.get<bool>();
        break;
      }
      case KeyKind::Text: {
        if (!value.is_string()) {
          throw std::invalid_argument("config field '" + key + "' must be a string");
        }
        const auto text_value = value.get<std::string>();
        if (std::find(spec->allowed_text.begin(), spec->allowed_text.end(), text_value) ==
            spec->allowed_text.end()) {
          throw std::invalid_argument("config field '" + key + "' has unsupported value '" +
                                      text_value + "'");
        }
        config.values_[key] = text_value;
        break;
      }
      case KeyKind::List: {
        if (!value.is_array()) {
          throw std::invalid_argument("config field '" + key + "' must be an array of numbers");
        }
        std::vector<double> numbers;
        for (const auto& element : value) {
          if (!element.is_number()) {
            throw std::invalid_argument("config field '" + key + "' must contain numbers only");
          }
          const double number = element.get<double>();
          check_number(*spec, number);
          numbers.push_back(number);
        }
        if (numbers.empty()) {
          throw std::invalid_argument("config field '" + key + "' must not be empty");
        }
        config.values_[key] = std::move(numbers);
        break;
      }
    }
  }
  return config;
}

std::string ExperimentConfig::to_json_text() const {
  nlohmann::json out;
  out["experiment"] = experiment_;
  for (const auto& [key, value] : values_) {
    std::visit([&out, &key](const auto& v) { out[key] = v; }, value);
  }
  return out.dump(2) + "\n";
}

std::uint64_t ExperimentConfig::seed() const {
  return static_cast<std::uint64_t>(number_or("seed", 42.0));
}

bool ExperimentConfig::has(const std::string& key) const { return values_.count(key) > 0; }

double ExperimentConfig::number_or(const std::string& key, double fallback) const {
  const auto it = values_.find(key);
  if (it == values_.end()) return fallback;
  if (const double* v = std::get_if<double>(&it->second)) return *v;
  throw std::invalid_argument("config field '" + key + "' must be a number");
}

bool ExperimentConfig::flag_or(const std::string& key, bool fallback) const {
  const auto it = values_.find(key);
  if (it == values_.end()) return fallback;
  if (const bool* v = std::get_if<bool>(&it->second)) return *v;
  throw std::invalid_argument("config field '" + key + "' must be a boolean");
}

std::string ExperimentConfig::text_or(const std::string& key, const std::string& fallback) const {
  const auto it = values_.find(key);
  if (it == values_.end()) return fallback;
  if (const std::string* v = std::get_if<std::string>(&it->second)) return *v;
  throw std::invalid_argument("config field '" + key + "' must be a string");
}

std::vector<double> ExperimentConfig::list_or(const std::string& key,
                                              std::vector<double> fallback) const {
  const auto it = values_.find(key);
  if (it == values_.end()) return fallback;
  if (const auto* v = std::get_if<std::vector<double>>(&it->second)) return *v;
  throw std::invalid_argument("config field '" + key + "' must be an array");
}

bool Report::passed() const {
  for (const auto& check : checks) {
    if (!check.pass) return false;
  }
  return true;
}

// ---------------------------------------------------------------------------
// Shared pipeline helpers
// ---------------------------------------------------------------------------

namespace {

GridLayout layout_from(const ExperimentConfig& config, std::size_t default_cells,
                       bool default_periodic) {
  const double left = config.number_or("domain_left", 0.0);
  const double right = config.number_or("domain_right", 1.0);
  if (!(left < right)) {
    throw std::invalid_argument("config fields 'domain_left'/'domain_right' form an empty domain");
  }
  return GridLayout{Domain{left, right, config.flag_or("periodic", default_periodic)},
                    static_cast<std::size_t>(config.number_or(
                        "cells", static_cast<double>(default_cells)))};
}

FluxModel flux_from(const ExperimentConfig& config) {
  return flux_by_name(config.text_or("flux", "burgers"), config.number_or("speed", 1.0));
}

// Random offset + sine profiles; kept within |u| < 1 so CFL steps stay tame.
Ensemble random_smooth_ensemble(const GridLayout& layout, std::size_t members,
                                std::uint64_t seed, std::uint64_t tag) {
  std::vector<GridFunction> result;
  result.reserve(members);
  const double length = layout.domain.length();
  for (std::size_t m = 0; m < members; ++m) {
    RandomStream stream = RandomStream::derive(seed, m, tag);
    const double offset = stream.uniform(-0.3, 0.3);
    const double amplitude = stream.uniform(0.2, 0.7);
    const double phase = stream.uniform(0.0, 1.0);
    result.push_back(GridFunction::sample(layout, [&](double x) {
      return offset +
             amplitude * std::sin(kTwoPi * ((x - layout.domain.left) / length - phase));
    }));
  }
  return Ensemble(std::move(result), seed);
}

// Uniform time grid resolving the initial CFL step; at least 16 intervals.
std::vector<double> dense_times(const GridLayout& layout, double max_speed, double cfl,
                                double t_end) {
  const double dx = layout.domain.length() / static_cast<double>(layout.n_cells);
  std::size_t intervals = 16;
  if (max_speed > 0.0) {
    const double dt = cfl * dx / max_speed;
    intervals = std::max<std::size_t>(16, static_cast<std::size_t>(std::ceil(t_end / dt)));
  }
  std::vector<double> times(intervals + 1);
  for (std::size_t k = 0; k <= intervals; ++k) {
    times[k] = t_end * static_cast<double>(k) / static_cast<double>(intervals);
  }
  return times;
}

double snap_to_center(const GridLayout& layout, double fraction) {
  const double dx = layout.domain.length() / static_cast<double>(layout.n_cells);
  const double x = layout.domain.left + fraction * layout.domain.length();
  auto j = static_cast<std::ptrdiff_t>(std::floor((x - layout.domain.left) / dx));
  j = std::clamp<std::ptrdiff_t>(j, 0, static_cast<std::ptrdiff_t>(layout.n_cells) - 1);
  return layout.domain.left + (static_cast<double>(j) + 0.5) * dx;
}

Check bound_check(std::string name, double value, double threshold) {
  return Check{std::move(name), value, threshold, value <= threshold};
}

Check floor_check(std::string name, double value, double threshold) {
  return Check{std::move(name), value, threshold, value >= threshold};
}

std::string tagged(const std::string& stem, double parameter) {
  std::ostringstream out;
  out << stem << parameter;
  return out.str();
}

// ---------------------------------------------------------------------------
// riemann_ensemble: Godunov solutions of two Riemann problems against the
// closed-form entropy solutions.
// ---------------------------------------------------------------------------

double exact_riemann_cell_average(double uL, double uR, double jump, double x_left,
                                  double x_right, double t) {
  constexpr int sub = 8;
  double sum = 0.0;
  const double h = (x_right - x_left) / sub;
  for (int s = 0; s < sub; ++s) {
    const double x = x_left + (s + 0.5) * h;
    sum += exact_riemann_burgers(uL, uR, x - jump, t);
  }
  return sum / sub;
}

Report run_riemann_ensemble(const ExperimentConfig& config) {
  const GridLayout layout = layout_from(config, 400, false);
  if (layout.domain.periodic) {
    throw std::invalid_argument(
        "config field 'periodic' must be false for riemann_ensemble (outflow boundaries)");
  }
  const FluxModel model = burgers_flux();
  const double t_end = config.number_or("time", 0.25);
  const double cfl = config.number_or("cfl", 0.9);
  const double length = layout.domain.length();
  const double shock_jump = layout.domain.left + 0.3 * length;
  const double raref_jump = layout.domain.left + 0.5 * length;

  std::vector<GridFunction> members;
  members.push_back(
      GridFunction::sample(layout, [&](double x) { return x < shock_jump ? 1.0 : 0.0; }));
  members.push_back(
      GridFunction::sample(layout, [&](double x) { return x < raref_jump ? -1.0 : 1.0; }));
  const Ensemble initial(std::move(members), config.seed());

  const std::vector<double> times = {0.0, t_end};
  const Trajectory traj = canonical_solution(initial, model, times, cfl);
  const Ensemble& final_state = traj.state(1);

  const double dx = final_state.member(0).dx();
  const double jumps[2] = {shock_jump, raref_jump};
  const double left_states[2] = {1.0, -1.0};
  const double right_states[2] = {0.0, 1.0};
  const char* labels[2] = {"shock", "rarefaction"};

  Report report;
  report.experiment = config.experiment();
  report.seed = config.seed();

  Table errors{"l1_errors", {"riemann_case", "dx", "error"}, {}};
  Table profiles{"profiles",
                 {"x", "shock_numeric", "shock_exact", "rarefaction_numeric",
                  "rarefaction_exact"},
                 {}};
  std::vector<std::vector<double>> exact(2);
  for (int c = 0; c < 2; ++c) {
    const GridFunction& numeric = final_state.member(static_cast<std::size_t>(c));
    double error = 0.0;
    exact[c].resize(numeric.n_cells());
    for (std::size_t j = 0; j < numeric.n_cells(); ++j) {
      const double xl = layout.domain.left + static_cast<double>(j) * dx;
      exact[c][j] = exact_riemann_cell_average(left_states[c], right_states[c], jumps[c], xl,
                                               xl + dx, t_end);
      error += std::abs(numeric.value(j) - exact[c][j]) * dx;
    }
    errors.rows.push_back({static_cast<double>(c), dx, error});
    report.checks.push_back(
        bound_check(std::string(labels[c]) + "_l1_error", error, 5.0 * dx));
  }
  for (std::size_t j = 0; j < final_state.member(0).n_cells(); ++j) {
    profiles.rows.push_back({final_state.member(0).cell_center(j), final_state.member(0).value(j),
                             exact[0][j], final_state.member(1).value(j), exact[1][j]});
  }
  report.tables.push_back(std::move(errors));
  report.tables.push_back(std::move(profiles));
  return report;
}

// ---------------------------------------------------------------------------
// gaussian_isserlis: sampled Gaussian measure against the kernel moments.
// ---------------------------------------------------------------------------

Report run_gaussian_isserlis(const ExperimentConfig& config) {
  const GridLayout layout = layout_from(config, 64, true);
  const auto members = static_cast<std::size_t>(config.number_or("members", 10000.0));
  const CovarianceKernel kernel =
      kernel_by_name(config.text_or("kernel", "brownian"), config.number_or("length_scale", 0.1));
  const Ensemble ensemble = sample_gaussian(kernel, layout, members, config.seed());

  const double band = 10.0 / std::sqrt(static_cast<double>(members));
  const double fractions[5] = {0.2, 0.35, 0.5, 0.65, 0.8};
  double probes[5];
  for (int i = 0; i < 5; ++i) probes[i] = snap_to_center(layout, fractions[i]);

  Report report;
  report.experiment = config.experiment();
  report.seed = config.seed();

  Table variance{"variance_field", {"x", "estimate", "truth"}, {}};
  for (double x : probes) {
    const double points[2] = {x, x};
    const double estimate = moment(ensemble, points);
    const double truth = kernel.kernel(x, x);
    variance.rows.push_back({x, estimate, truth});
    report.checks.push_back(bound_check(tagged("variance_rel_error_x=", x),
                                        std::abs(estimate - truth) / truth, band));
  }
  report.tables.push_back(std::move(variance));

  // Probe tuples away from the low-variance end of the domain; the product
  // estimator's relative noise is ~3.4/sqrt(M) there, so the 10/sqrt(M) band
  // is a roughly 3-sigma gate.
  const double fourth_fractions[5][4] = {
      {0.35, 0.5, 0.65, 0.8},
      {0.4, 0.55, 0.7, 0.85},
      {0.5, 0.6, 0.7, 0.8},
      {0.55, 0.65, 0.8, 0.9},
      {0.6, 0.7, 0.8, 0.9},
  };
  double tuples[5][4];
  for (int i = 0; i < 5; ++i) {
    for (int j = 0; j < 4; ++j) tuples[i][j] = snap_to_center(layout, fourth_fractions[i][j]);
  }
  Table fourth{"fourth_moments", {"x1", "x2", "x3", "x4", "estimate", "truth"}, {}};
  for (int i = 0; i < 5; ++i) {
    const std::span<const double> tuple(tuples[i], 4);
    const double estimate = moment(ensemble, tuple);
    auto k2 = [&](int a, int b) { return kernel.kernel(tuples[i][a], tuples[i][b]); };
    const double truth = k2(0, 1) * k2(2, 3) + k2(0, 2) * k2(1, 3) + k2(0, 3) * k2(1, 2);
    fourth.rows.push_back({tuples[i][0], tuples[i][1], tuples[i][2], tuples[i][3], estimate,
                           truth});
    report.checks.push_back(bound_check(tagged("isserlis_rel_error_tuple", i),
                                        std::abs(estimate - truth) / std::abs(truth), band));
  }
  report.tables.push_back(std::move(fourth));

  Table odd{"odd_moments", {"order", "x", "estimate", "band"}, {}};
  for (double x : probes) {
    std::vector<double> first_samples(ensemble.size()), third_samples(ensemble.size());
    for (std::size_t m = 0; m < ensemble.size(); ++m) {
      const double v = eval_at(ensemble.member(m), x);
      first_samples[m] = v;
      third_samples[m] = v * v * v;
    }
    auto statistical_band = [&](const std::vector<double>& samples) {
      double mean = 0.0;
      for (double v : samples) mean += v;
      mean /= static_cast<double>(samples.size());
      double var = 0.0;
      for (double v : samples) var += (v - mean) * (v - mean);
      var /= static_cast<double>(samples.size());
      return 10.0 * std::sqrt(var / static_cast<double>(samples.size()));
    };
    const double m1 = moment(ensemble, std::span<const double>(&x, 1));
    const double band1 = statistical_band(first_samples);
    odd.rows.push_back({1.0, x, m1, band1});
    report.checks.push_back(bound_check(tagged("odd_m1_x=", x), std::abs(m1), band1));

    const double triple[3] = {x, x, x};
    const double m3 = moment(ensemble, triple);
    const double band3 = statistical_band(third_samples);
    odd.rows.push_back({3.0, x, m3, band3});
    report.checks.push_back(bound_check(tagged("odd_m3_x=", x), std::abs(m3), band3));
  }
  report.tables.push_back(std::move(odd));
  return report;
}

// ---------------------------------------------------------------------------
// contraction: W1 between two canonical solutions with a shared global step.
// ---------------------------------------------------------------------------

Report run_contraction(const ExperimentConfig& config) {
  const GridLayout layout = layout_from(config, 256, true);
  const auto members = static_cast<std::size_t>(config.number_or("members", 64.0));
  const FluxModel model = flux_from(config);
  const double cfl = config.number_or("cfl", 0.9);
  const std::vector<double> times =
      config.list_or("times", {0.0, 0.1, 0.2, 0.3, 0.4, 0.5});
  const std::string mode = config.text_or("mode", "pair");
  const std::uint64_t seed = config.seed();
  const double length = layout.domain.length();

  const Ensemble side_a = random_smooth_ensemble(layout, members, seed, 0);

  auto atom = [&](double offset, double amplitude, double phase) {
    return GridFunction::sample(layout, [&](double x) {
      return offset + amplitude * std::sin(kTwoPi * ((x - layout.domain.left) / length - phase));
    });
  };

  Ensemble side_b = [&]() -> Ensemble {
    if (mode == "pair") return random_smooth_ensemble(layout, members, seed, 1);
    if (mode == "singleton") {
      const std::pair<double, Ensemble> part{1.0, Ensemble({atom(0.1, 0.5, 0.37)}, seed)};
      return mixture(std::span<const std::pair<double, Ensemble>>(&part, 1), members);
    }
    const std::vector<double> weights = config.list_or("mixture_weights", {0.25, 0.25, 0.5});
    if (weights.size() != 3) {
      throw std::invalid_argument("config field 'mixture_weights' must hold three weights");
    }
    const std::vector<std::pair<double, Ensemble>> parts = {
        {weights[0], Ensemble({atom(0.0, 0.3, 0.0)}, seed)},
        {weights[1], Ensemble({atom(-0.2, 0.4, 0.25)}, seed)},
        {weights[2], Ensemble({atom(0.15, 0.25, 0.6)}, seed)},
    };
    return mixture(parts, members);
  }();

  const std::vector<Ensemble> pair = {side_a, side_b};
  const auto trajectories = canonical_solutions(pair, model, times, cfl);

  Report report;
  report.experiment = config.experiment();
  report.seed = seed;
  Table w1_table{"w1_vs_time", {"time", "w1"}, {}};
  std::vector<double> w1_values(times.size());
  for (std::size_t k = 0; k < times.size(); ++k) {
    w1_values[k] = w1_ensembles(trajectories[0].state(k), trajectories[1].state(k));
    w1_table.rows.push_back({times[k], w1_values[k]});
  }
  for (std::size_t k = 1; k < times.size(); ++k) {
    report.checks.push_back(bound_check(tagged("w1_nonincrease_t=", times[k]),
                                        w1_values[k] - w1_values[0], 1e-10));
  }
  report.tables.push_back(std::move(w1_table));
  return report;
}

// ---------------------------------------------------------------------------
// projection_refinement: Monte Carlo partition projections against the
// structure-function bound.
// ---------------------------------------------------------------------------

Report run_projection_refinement(const ExperimentConfig& config) {
  const GridLayout layout = layout_from(config, 64, false);
  const auto members = static_cast<std::size_t>(config.number_or("members", 32.0));
  const auto realizations = static_cast<std::size_t>(config.number_or("realizations", 20.0));
  const std::vector<double> sizes = config.list_or("partition_cells", {8.0, 16.0, 32.0});
  for (std::size_t i = 0; i + 1 < sizes.size(); ++i) {
    const auto coarse = static_cast<std::size_t>(sizes[i]);
    const auto fine = static_cast<std::size_t>(sizes[i + 1]);
    if (fine % coarse != 0) {
      throw std::invalid_argument(
          "config field 'partition_cells' must list nested sizes (each divides the next)");
    }
  }
  const CovarianceKernel kernel =
      kernel_by_name(config.text_or("kernel", "brownian"), config.number_or("length_scale", 0.1));
  const Ensemble ensemble = sample_gaussian(kernel, layout, members, config.seed());

  std::vector<Ensemble> projections;
  projections.reserve(sizes.size());
  for (std::size_t i = 0; i < sizes.size(); ++i) {
    const Partition partition = uniform_partition(layout.domain.left, layout.domain.right,
                                                  static_cast<std::size_t>(sizes[i]));
    projections.push_back(
        project_ensemble(ensemble, partition, realizations, config.seed() + i));
  }

  Report report;
  report.experiment = config.experiment();
  report.seed = config.seed();
  Table table{"refinement", {"h", "w1", "structure_function", "ratio"}, {}};
  for (std::size_t i = 0; i + 1 < projections.size(); ++i) {
    const double h = layout.domain.length() / sizes[i];
    const double w1 = w1_ensembles(projections[i], projections[i + 1]);
    const double sf = structure_function(ensemble, h, 1.0).value;
    table.rows.push_back({h, w1, sf, w1 / sf});
    report.checks.push_back(bound_check(tagged("refinement_bound_h=", h), w1, 3.0 * sf));
  }
  report.tables.push_back(std::move(table));
  return report;
}

// ---------------------------------------------------------------------------
// dc_modulus: structure-function decay for an atomic smooth profile and the
// non-DC floor for cellwise random signs.
// ---------------------------------------------------------------------------

double sin_structure_oracle(const GridLayout& layout, double r, double p) {
  // Fine midpoint quadrature of the continuous double integral for the
  // one-mode sine profile; independent of the ensemble estimator.
  constexpr int nx = 2048;
  constexpr int ns = 512;
  const double length = layout.domain.length();
  auto profile = [&](double x) { return std::sin(kTwoPi * (x - layout.domain.left) / length); };
  double outer = 0.0;
  for (int i = 0; i < nx; ++i) {
    const double x = layout.domain.left + (i + 0.5) * length / nx;
    double inner = 0.0;
    for (int s = 0; s < ns; ++s) {
      const double offset = -r + (s + 0.5) * (2.0 * r / ns);
      inner += std::pow(std::abs(profile(x) - profile(x + offset)), p);
    }
    outer += inner * (2.0 * r / ns) / (2.0 * r);
  }
  return outer * length / nx;
}

Report run_dc_modulus(const ExperimentConfig& config) {
  const GridLayout layout = layout_from(config, 256, true);
  if (!layout.domain.periodic) {
    throw std::invalid_argument("config field 'periodic' must be true for dc_modulus");
  }
  const auto members = static_cast<std::size_t>(config.number_or("members", 8.0));
  const std::vector<double> radii = config.list_or("radii", {0.1, 0.05, 0.025});
  const double p = config.number_or("structure_p", 1.0);
  const double length = layout.domain.length();
  const double dx = length / static_cast<double>(layout.n_cells);

  const Ensemble sin_ensemble(
      {GridFunction::sample(layout,
                            [&](double x) {
                              return std::sin(kTwoPi * (x - layout.domain.left) / length);
                            })},
      config.seed());

  std::vector<GridFunction> random_members;
  random_members.reserve(members);
  for (std::size_t m = 0; m < members; ++m) {
    RandomStream stream = RandomStream::derive(config.seed(), m);
    std::vector<double> values(layout.n_cells);
    for (auto& v : values) v = stream.uniform01() < 0.5 ? -1.0 : 1.0;
    random_members.emplace_back(layout.domain, std::move(values));
  }
  const Ensemble random_sign(std::move(random_members), config.seed());

  Report report;
  report.experiment = config.experiment();
  report.seed = config.seed();

  Table sin_table{"structure_sin", {"r", "value", "oracle"}, {}};
  std::vector<double> slopes;
  for (double r : radii) {
    const double value = structure_function(sin_ensemble, r, p).value;
    const double oracle = sin_structure_oracle(layout, r, p);
    sin_table.rows.push_back({r, value, oracle});
    slopes.push_back(value / r);
    report.checks.push_back(bound_check(tagged("sin_oracle_rel_error_r=", r),
                                        std::abs(value - oracle) / oracle, 0.2));
  }
  const auto [min_slope, max_slope] = std::minmax_element(slopes.begin(), slopes.end());
  report.checks.push_back(
      bound_check("sin_slope_stability", *max_slope / *min_slope, 1.2));
  report.tables.push_back(std::move(sin_table));

  Table random_table{"structure_random_sign", {"r", "value"}, {}};
  for (double r : radii) {
    const double value = structure_function(random_sign, r, p).value;
    random_table.rows.push_back({r, value});
    if (r >= 2.0 * dx) {
      report.checks.push_back(floor_check(tagged("random_sign_floor_r=", r), value, 0.5));
    }
  }
  report.tables.push_back(std::move(random_table));
  return report;
}

// ---------------------------------------------------------------------------
// residual_decay: moment-equation residuals under simultaneous refinement.
// ---------------------------------------------------------------------------

Ensemble smooth_four_member_ensemble(const GridLayout& layout, std::uint64_t seed) {
  const double length = layout.domain.length();
  const double amplitudes[4] = {0.40, 0.45, 0.50, 0.55};
  const double offsets[4] = {0.05, -0.05, 0.10, -0.10};
  const double phases[4] = {0.00, 0.20, 0.45, 0.70};
  std::vector<GridFunction> members;
  members.reserve(4);
  for (int m = 0; m < 4; ++m) {
    members.push_back(GridFunction::sample(layout, [&](double x) {
      return offsets[m] +
             amplitudes[m] * std::sin(kTwoPi * ((x - layout.domain.left) / length - phases[m]));
    }));
  }
  return Ensemble(std::move(members), seed);
}

Report run_residual_decay(const ExperimentConfig& config) {
  const std::vector<double> sweep = config.list_or("cells_sweep", {128.0, 256.0, 512.0});
  const std::vector<double> orders = config.list_or("orders", {1.0, 2.0});
  const double cfl = config.number_or("cfl", 0.9);
  const FluxModel model = flux_from(config);
  const TestFunction tf(config.number_or("x0", 0.35), config.number_or("w", 0.25),
                        config.number_or("t1", 0.1), config.number_or("t2", 0.3));

  const double left = config.number_or("domain_left", 0.0);
  const double right = config.number_or("domain_right", 1.0);
  if (!(left < right)) {
    throw std::invalid_argument("config fields 'domain_left'/'domain_right' form an empty domain");
  }

  Report report;
  report.experiment = config.experiment();
  report.seed = config.seed();
  Table table{"residual_vs_dx", {"dx", "k", "residual"}, {}};

  std::map<std::pair<std::size_t, std::size_t>, double> residuals;  // (k, cells) -> |R|
  for (double cells_real : sweep) {
    const auto cells = static_cast<std::size_t>(cells_real);
    const GridLayout layout{Domain{left, right, true}, cells};
    const Ensemble initial = smooth_four_member_ensemble(layout, config.seed());
    double speed = 0.0;
    for (const auto& member : initial.members()) {
      speed = std::max(speed, max_wave_speed(model, member));
    }
    const auto times = dense_times(layout, speed, cfl, tf.t_close());
    const Trajectory traj = canonical_solution(initial, model, times, cfl);
    for (double k_real : orders) {
      const auto k = static_cast<std::size_t>(k_real);
      const double residual = moment_residual(traj, k, model, tf);
      residuals[{k, cells}] = std::abs(residual);
      table.rows.push_back({layout.domain.length() / static_cast<double>(cells),
                            static_cast<double>(k), residual});
    }
  }
  report.tables.push_back(std::move(table));

  for (double k_real : orders) {
    const auto k = static_cast<std::size_t>(k_real);
    for (std::size_t i = 0; i + 1 < sweep.size(); ++i) {
      const auto coarse = static_cast<std::size_t>(sweep[i]);
      const auto fine = static_cast<std::size_t>(sweep[i + 1]);
      const double ratio = residuals[{k, coarse}] / residuals[{k, fine}];
      std::ostringstream stem;
      stem << "decay_k" << k << "_" << coarse << "to" << fine;
      report.checks.push_back(floor_check(stem.str() + "_lower", ratio, 1.4));
      report.checks.push_back(bound_check(stem.str() + "_upper", ratio, 2.8));
    }
  }
  return report;
}

// ---------------------------------------------------------------------------
// expansion_shock: the Kruzkov sweep separates the canonical shock from the
// hand-built non-entropy expansion shock.
// ---------------------------------------------------------------------------

Report run_expansion_shock(const ExperimentConfig& config) {
  const GridLayout layout = layout_from(config, 256, false);
  if (layout.domain.periodic) {
    throw std::invalid_argument(
        "config field 'periodic' must be false for expansion_shock (outflow boundaries)");
  }
  const FluxModel model = burgers_flux();
  const double cfl = config.number_or("cfl", 0.9);
  const double length = layout.domain.length();
  const double jump = config.number_or("jump_x0", layout.domain.left + 0.3 * length);
  const TestFunction tf(config.number_or("x0", jump), config.number_or("w", 0.28),
                        config.number_or("t1", 0.1), config.number_or("t2", 0.3));
  const std::vector<double> constants =
      config.list_or("entropy_constants", {-1.0, -0.5, 0.0, 0.25, 0.5, 0.75, 1.0});
  constexpr double kRelTol = 1e-6;

  // Shock states straddling every swept constant: a constant outside the
  // jump sees a linear entropy, so its residual degenerates to the signed
  // O(dx) conservation defect. Constants strictly inside the jump carry the
  // production (uL - c)(c - uR) > 0 that the sweep is meant to detect.
  const double shock_left = 1.2;
  const double shock_right = -1.1;
  const Ensemble shock_initial(
      {GridFunction::sample(layout,
                            [&](double x) { return x < jump ? shock_left : shock_right; })},
      config.seed());
  const auto times = dense_times(layout, std::max(shock_left, -shock_right), cfl, tf.t_close());
  const Trajectory canonical = canonical_solution(shock_initial, model, times, cfl);

  // Weak but entropy-violating: the jump 0 -> 1 travels at the same
  // Rankine-Hugoniot speed instead of opening into a rarefaction.
  std::vector<Ensemble> expansion_states;
  expansion_states.reserve(times.size());
  for (double t : times) {
    expansion_states.emplace_back(std::vector<GridFunction>{GridFunction::sample(
        layout, [&](double x) { return x < jump + 0.5 * t ? 0.0 : 1.0; })});
  }
  const Trajectory expansion(std::vector<double>(times.begin(), times.end()),
                             std::move(expansion_states));

  Report report;
  report.experiment = config.experiment();
  report.seed = config.seed();
  Table table{"entropy_vs_c",
              {"c", "canonical_residual", "canonical_scale", "expansion_residual",
               "expansion_scale"},
              {}};
  for (double c : constants) {
    const EntropyResidual canonical_residual = kruzkov_residual(canonical, c, model, tf);
    const EntropyResidual expansion_residual = kruzkov_residual(expansion, c, model, tf);
    table.rows.push_back({c, canonical_residual.value, canonical_residual.scale,
                          expansion_residual.value, expansion_residual.scale});
    report.checks.push_back(floor_check(tagged("canonical_entropy_c=", c),
                                        canonical_residual.value,
                                        -kRelTol * canonical_residual.scale));
    if (c == 0.5) {
      report.checks.push_back(bound_check("expansion_violation_c=0.5",
                                          expansion_residual.value,
                                          -10.0 * kRelTol * expansion_residual.scale));
    }
  }
  report.tables.push_back(std::move(table));
  return report;
}

}  // namespace

// ---------------------------------------------------------------------------
// Dispatch and artifacts
// ---------------------------------------------------------------------------

std::vector<std::string> experiment_names() {
  return {"riemann_ensemble",      "gaussian_isserlis", "contraction", "projection_refinement",
          "dc_modulus",            "residual_decay",    "expansion_shock"};
}

std::string experiment_key_summary(const std::string& name) {
  static const std::map<std::string, std::string> summaries = {
      {"riemann_ensemble", "cells, time, cfl, domain_left, domain_right"},
      {"gaussian_isserlis", "cells, members, seed, kernel, length_scale"},
      {"contraction", "cells, members, seed, times, cfl, flux, speed, mode, mixture_weights"},
      {"projection_refinement",
       "cells, members, seed, realizations, partition_cells, kernel, length_scale"},
      {"dc_modulus", "cells, members, seed, radii, structure_p"},
      {"residual_decay", "cells_sweep, orders, cfl, flux, speed, x0, w, t1, t2"},
      {"expansion_shock", "cells, cfl, jump_x0, x0, w, t1, t2, entropy_constants"},
  };
  const auto it = summaries.find(name);
  if (it == summaries.end()) throw std::invalid_argument("unknown experiment '" + name + "'");
  return it->second;
}

Report run_experiment(const ExperimentConfig& config) {
  const std::string& name = config.experiment();
  if (name == "riemann_ensemble") return run_riemann_ensemble(config);
  if (name == "gaussian_isserlis") return run_gaussian_isserlis(config);
  if (name == "contraction") return run_contraction(config);
  if (name == "projection_refinement") return run_projection_refinement(config);
  if (name == "dc_modulus") return run_dc_modulus(config);
  if (name == "residual_decay") return run_residual_decay(config);
  if (name == "expansion_shock") return run_expansion_shock(config);
  throw std::invalid_argument("unknown experiment '" + name + "'");
}

std::vector<std::filesystem::path> emit_report(const Report& report,
                                               const std::filesystem::path& out_dir) {
  std::error_code ec;
  std::filesystem::create_directories(out_dir, ec);
  if (ec) {
    throw std::runtime_error("cannot create output directory '" + out_dir.string() +
                             "': " + ec.message());
  }

  std::vector<std::filesystem::path> written;
  nlohmann::ordered_json summary;
  summary["experiment"] = report.experiment;
  summary["seed"] = report.seed;
  summary["checks"] = nlohmann::ordered_json::array();
  for (const auto& check : report.checks) {
    summary["checks"].push_back({{"name", check.name},
                                 {"value", check.value},
                                 {"threshold", check.threshold},
                                 {"pass", check.pass}});
  }
  const auto summary_path = out_dir / "summary.json";
  {
    std::ofstream out(summary_path);
    if (!out) throw std::runtime_error("cannot write '" + summary_path.string() + "'");
    out << summary.dump(2) << '\n';
  }
  written.push_back(summary_path);

  for (const auto& table : report.tables) {
    const auto table_path = out_dir / (table.name + ".csv");
    std::ofstream out(table_path);
    if (!out) throw std::runtime_error("cannot write '" + table_path.string() + "'");
    for (std::size_t c = 0; c < table.columns.size(); ++c) {
      out << table.columns[c] << (c + 1 < table.columns.size() ? ',' : '\n');
    }
    for (const auto& row : table.rows) {
      for (std::size_t c = 0; c < row.size(); ++c) {
        out << format_double(row[c]) << (c + 1 < row.size() ? ',' : '\n');
      }
    }
    written.push_back(table_path);
  }
  return written;
}

}  // namespace statsol
