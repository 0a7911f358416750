// statsol: command-line driver for ensemble-based statistical solutions of
// scalar conservation laws. Subcommands cover Gaussian sampling, moment and
// structure-function estimation, partition projection, exact Wasserstein
// distances, weak-form residuals, entropy sweeps, and named experiments.

#include <CLI11.hpp>

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "statsol/correlation.hpp"
#include "statsol/ensemble.hpp"
#include "statsol/experiment.hpp"
#include "statsol/flux.hpp"
#include "statsol/grid.hpp"
#include "statsol/io.hpp"
#include "statsol/residuals.hpp"
#include "statsol/solver.hpp"
#include "statsol/transport.hpp"

namespace {

struct GridOptions {
  double domain_left = 0.0;
  double domain_right = 1.0;
  bool periodic = true;
};

void add_grid_options(CLI::App* cmd, GridOptions& opts) {
  cmd->add_option("--domain-left", opts.domain_left, "Left domain endpoint");
  cmd->add_option("--domain-right", opts.domain_right, "Right domain endpoint");
  cmd->add_flag("--periodic,!--no-periodic", opts.periodic,
                "Treat the domain as a torus (default on)");
}

int run_gaussian(const std::string& kernel_name, double length_scale, std::size_t cells,
                 std::size_t members, std::uint64_t seed, const GridOptions& grid,
                 const std::string& out) {
  const statsol::GridLayout layout{
      statsol::Domain{grid.domain_left, grid.domain_right, grid.periodic}, cells};
  const auto kernel = statsol::kernel_by_name(kernel_name, length_scale);
  const auto ensemble = statsol::sample_gaussian(kernel, layout, members, seed);
  statsol::write_ensemble_csv(ensemble, std::filesystem::path(out));
  std::cout << "wrote " << out << " (" << members << " members, " << cells << " cells)\n";
  return 0;
}

int run_moments(const std::string& in, std::size_t k, std::size_t stride, bool periodic,
                const std::string& out) {
  const auto ensemble = statsol::read_ensemble_csv(in, periodic);
  const auto& proto = ensemble.member(0);
  std::vector<double> centers;
  for (std::size_t j = 0; j < proto.n_cells(); j += stride) {
    centers.push_back(proto.cell_center(j));
  }

  std::ofstream file(out);
  if (!file) {
    std::cerr << "cannot open '" << out << "' for writing\n";
    return 1;
  }
  for (std::size_t i = 1; i <= k; ++i) file << 'x' << i << ',';
  file << "value\n";

  std::vector<std::size_t> index(k, 0);
  std::vector<double> points(k);
  while (true) {
    for (std::size_t i = 0; i < k; ++i) points[i] = centers[index[i]];
    const double value = statsol::moment(ensemble, points);
    for (double x : points) file << statsol::format_double(x) << ',';
    file << statsol::format_double(value) << '\n';

    std::size_t axis = k;
    while (axis > 0) {
      if (++index[axis - 1] < centers.size()) break;
      index[axis - 1] = 0;
      --axis;
    }
    if (axis == 0) break;
  }
  std::cout << "wrote " << out << '\n';
  return 0;
}

int run_structure(const std::string& in, double p, const std::vector<double>& radii,
                  bool periodic, const std::string& out) {
  const auto ensemble = statsol::read_ensemble_csv(in, periodic);
  std::ostream* sink = &std::cout;
  std::ofstream file;
  if (!out.empty()) {
    file.open(out);
    if (!file) {
      std::cerr << "cannot open '" << out << "' for writing\n";
      return 1;
    }
    sink = &file;
  }
  *sink << "r,value,below_resolution\n";
  for (double r : radii) {
    const auto result = statsol::structure_function(ensemble, r, p);
    *sink << statsol::format_double(r) << ',' << statsol::format_double(result.value) << ','
          << (result.below_resolution ? 1 : 0) << '\n';
  }
  return 0;
}

int run_project(const std::string& in, std::size_t cells, std::size_t realizations,
                std::uint64_t seed, bool periodic, const std::string& out) {
  const auto ensemble = statsol::read_ensemble_csv(in, periodic);
  const auto& domain = ensemble.domain();
  const auto partition = statsol::uniform_partition(domain.left, domain.right, cells);
  const auto projected = statsol::project_ensemble(ensemble, partition, realizations, seed);
  statsol::write_ensemble_csv(projected, std::filesystem::path(out));
  std::cout << "wrote " << out << " (" << projected.size() << " members)\n";
  return 0;
}

int run_wasserstein(const std::string& a_path, const std::string& b_path, bool periodic,
                    const std::string& plan_path) {
  const auto a = statsol::read_ensemble_csv(a_path, periodic);
  const auto b = statsol::read_ensemble_csv(b_path, periodic);
  const auto result = statsol::w1_ensembles_detail(a, b);
  std::cout << "W1=" << statsol::format_double(result.w1) << '\n';
  if (!plan_path.empty()) {
    std::ofstream plan(plan_path);
    if (!plan) {
      std::cerr << "cannot open '" << plan_path << "' for writing\n";
      return 1;
    }
    plan << "i,j\n";
    for (std::size_t i = 0; i < result.assignment.permutation.size(); ++i) {
      plan << i << ',' << result.assignment.permutation[i] << '\n';
    }
  }
  return 0;
}

int run_residual(const std::string& traj_path, std::size_t k, const std::string& flux_name,
                 double speed, double x0, double w, double t1, double t2, bool periodic) {
  const auto traj = statsol::read_trajectory_csv(traj_path, periodic);
  const auto model = statsol::flux_by_name(flux_name, speed);
  const statsol::TestFunction tf(x0, w, t1, t2);
  const double residual = statsol::moment_residual(traj, k, model, tf);
  std::cout << "quantity,value\n";
  std::cout << "moment_residual_k" << k << ',' << statsol::format_double(residual) << '\n';
  return 0;
}

int run_entropy(const std::string& traj_path, const std::vector<double>& constants,
                const std::string& flux_name, double speed, double x0, double w, double t1,
                double t2, bool periodic) {
  const auto traj = statsol::read_trajectory_csv(traj_path, periodic);
  const auto model = statsol::flux_by_name(flux_name, speed);
  const statsol::TestFunction tf(x0, w, t1, t2);
  std::cout << "quantity,value\n";
  for (double c : constants) {
    const auto residual = statsol::kruzkov_residual(traj, c, model, tf);
    std::cout << "kruzkov_residual_c=" << statsol::format_double(c) << ','
              << statsol::format_double(residual.value) << '\n';
    std::cout << "kruzkov_scale_c=" << statsol::format_double(c) << ','
              << statsol::format_double(residual.scale) << '\n';
  }
  return 0;
}

int run_evolve(const std::string& in, const std::string& flux_name, double speed,
               const std::vector<double>& times, double cfl, bool periodic,
               const std::string& out) {
  const auto ensemble = statsol::read_ensemble_csv(in, periodic);
  const auto model = statsol::flux_by_name(flux_name, speed);
  const auto traj = statsol::canonical_solution(ensemble, model, times, cfl);
  statsol::write_trajectory_csv(traj, std::filesystem::path(out));
  std::cout << "wrote " << out << " (" << traj.n_times() << " states)\n";
  return 0;
}

int run_run(const std::string& config_path, const std::string& out_dir) {
  const auto config = statsol::ExperimentConfig::from_file(config_path);
  const auto report = statsol::run_experiment(config);
  const auto written = statsol::emit_report(report, out_dir);
  for (const auto& path : written) std::cout << "wrote " << path.string() << '\n';
  std::size_t passed = 0;
  for (const auto& check : report.checks) {
    std::cout << (check.pass ? "[pass] " : "[FAIL] ") << check.name
              << " value=" << statsol::format_double(check.value)
              << " threshold=" << statsol::format_double(check.threshold) << '\n';
    if (check.pass) ++passed;
  }
  std::cout << passed << "/" << report.checks.size() << " checks passed\n";
  return report.passed() ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"ensemble toolkit for statistical solutions of scalar conservation laws"};
  app.require_subcommand(1);

  // gaussian
  auto* gaussian = app.add_subcommand("gaussian", "Sample a Gaussian ensemble to CSV");
  std::string kernel_name = "brownian";
  double length_scale = 0.1;
  std::size_t cells = 64, members = 100;
  std::uint64_t seed = 42;
  GridOptions gaussian_grid;
  std::string gaussian_out = "ens.csv";
  gaussian->add_option("--kernel", kernel_name, "Covariance kernel: brownian | exponential");
  gaussian->add_option("--length-scale", length_scale, "Length scale of the exponential kernel");
  gaussian->add_option("--cells", cells, "Grid cells")->check(CLI::PositiveNumber);
  gaussian->add_option("--members", members, "Ensemble size")->check(CLI::PositiveNumber);
  gaussian->add_option("--seed", seed, "Master seed");
  add_grid_options(gaussian, gaussian_grid);
  gaussian->add_option("--out", gaussian_out, "Output CSV path");

  // moments
  auto* moments = app.add_subcommand("moments", "Moment field m^k on a strided center grid");
  std::string moments_in;
  std::size_t moments_k = 2, grid_stride = 4;
  bool moments_periodic = true;
  std::string moments_out = "moments.csv";
  moments->add_option("--in", moments_in, "Input ensemble CSV")->required();
  moments->add_option("--k", moments_k, "Moment order")->check(CLI::Range(1, 6));
  moments->add_option("--grid-stride", grid_stride, "Stride between probe centers")
      ->check(CLI::PositiveNumber);
  moments->add_flag("--periodic,!--no-periodic", moments_periodic, "Input domain periodicity");
  moments->add_option("--out", moments_out, "Output CSV path");

  // structure
  auto* structure = app.add_subcommand("structure", "Two-point structure function");
  std::string structure_in;
  double structure_p = 1.0;
  std::vector<double> structure_radii = {0.1, 0.05, 0.025};
  bool structure_periodic = true;
  std::string structure_out;
  structure->add_option("--in", structure_in, "Input ensemble CSV")->required();
  structure->add_option("--p", structure_p, "Exponent p");
  structure->add_option("--radii", structure_radii, "Averaging radii")->delimiter(',');
  structure->add_flag("--periodic,!--no-periodic", structure_periodic,
                      "Input domain periodicity");
  structure->add_option("--out", structure_out, "Output CSV path (default stdout)");

  // project
  auto* project = app.add_subcommand("project", "Partition projection by uniform sampling");
  std::string project_in;
  std::size_t project_cells = 8, project_realizations = 20;
  std::uint64_t project_seed = 42;
  bool project_periodic = true;
  std::string project_out = "projected.csv";
  project->add_option("--in", project_in, "Input ensemble CSV")->required();
  project->add_option("--cells", project_cells, "Partition cells")->check(CLI::PositiveNumber);
  project->add_option("--realizations", project_realizations, "Realizations per member")
      ->check(CLI::PositiveNumber);
  project->add_option("--seed", project_seed, "Projection seed");
  project->add_flag("--periodic,!--no-periodic", project_periodic, "Input domain periodicity");
  project->add_option("--out", project_out, "Output CSV path");

  // wasserstein
  auto* wasserstein = app.add_subcommand("wasserstein", "Exact W1 between two ensembles");
  std::string w_a, w_b, w_plan;
  bool w_periodic = true;
  wasserstein->add_option("--a", w_a, "First ensemble CSV")->required();
  wasserstein->add_option("--b", w_b, "Second ensemble CSV")->required();
  wasserstein->add_flag("--periodic,!--no-periodic", w_periodic, "Input domain periodicity");
  wasserstein->add_option("--emit-plan", w_plan, "Write the optimal pairing as CSV rows i,j");

  // residual
  auto* residual = app.add_subcommand("residual", "Moment-hierarchy weak-form residual");
  std::string residual_traj, residual_flux = "burgers";
  std::size_t residual_k = 1;
  double residual_speed = 1.0, residual_x0 = 0.5, residual_w = 0.3;
  double residual_t1 = 0.2, residual_t2 = 0.4;
  bool residual_periodic = true;
  residual->add_option("--traj", residual_traj, "Trajectory CSV")->required();
  residual->add_option("--k", residual_k, "Moment order")->check(CLI::Range(1, 3));
  residual->add_option("--flux", residual_flux, "Flux model: burgers | advection");
  residual->add_option("--speed", residual_speed, "Advection speed");
  residual->add_option("--x0", residual_x0, "Bump center");
  residual->add_option("--w", residual_w, "Bump half width");
  residual->add_option("--t1", residual_t1, "Cutoff window open");
  residual->add_option("--t2", residual_t2, "Cutoff window close");
  residual->add_flag("--periodic,!--no-periodic", residual_periodic,
                     "Trajectory domain periodicity");

  // entropy
  auto* entropy = app.add_subcommand("entropy", "Kruzkov entropy residual sweep");
  std::string entropy_traj, entropy_flux = "burgers";
  std::vector<double> entropy_constants = {-1.0, 0.0, 0.5, 1.0};
  double entropy_speed = 1.0, entropy_x0 = 0.5, entropy_w = 0.3;
  double entropy_t1 = 0.2, entropy_t2 = 0.4;
  bool entropy_periodic = true;
  entropy->add_option("--traj", entropy_traj, "Trajectory CSV")->required();
  entropy->add_option("--c", entropy_constants, "Kruzkov constants")->delimiter(',');
  entropy->add_option("--flux", entropy_flux, "Flux model: burgers | advection");
  entropy->add_option("--speed", entropy_speed, "Advection speed");
  entropy->add_option("--x0", entropy_x0, "Bump center");
  entropy->add_option("--w", entropy_w, "Bump half width");
  entropy->add_option("--t1", entropy_t1, "Cutoff window open");
  entropy->add_option("--t2", entropy_t2, "Cutoff window close");
  entropy->add_flag("--periodic,!--no-periodic", entropy_periodic,
                    "Trajectory domain periodicity");

  // evolve
  auto* evolve = app.add_subcommand("evolve", "Canonical solution of an ensemble");
  std::string evolve_in, evolve_flux = "burgers", evolve_out = "traj.csv";
  std::vector<double> evolve_times = {0.0, 0.1, 0.2, 0.3, 0.4, 0.5};
  double evolve_speed = 1.0, evolve_cfl = 0.9;
  bool evolve_periodic = true;
  evolve->add_option("--in", evolve_in, "Input ensemble CSV")->required();
  evolve->add_option("--flux", evolve_flux, "Flux model: burgers | advection");
  evolve->add_option("--speed", evolve_speed, "Advection speed");
  evolve->add_option("--times", evolve_times, "Output times (first must be 0)")->delimiter(',');
  evolve->add_option("--cfl", evolve_cfl, "CFL number in (0, 1]");
  evolve->add_flag("--periodic,!--no-periodic", evolve_periodic, "Input domain periodicity");
  evolve->add_option("--out", evolve_out, "Output trajectory CSV");

  // run + list-experiments
  auto* run = app.add_subcommand("run", "Run a named experiment from a JSON config");
  std::string run_config, run_out = "out";
  run->add_option("--config", run_config, "Experiment config (flat JSON object)")->required();
  run->add_option("--out", run_out, "Artifact directory");

  auto* list = app.add_subcommand("list-experiments", "List experiments and their keys");

  CLI11_PARSE(app, argc, argv);

  try {
    if (gaussian->parsed()) {
      return run_gaussian(kernel_name, length_scale, cells, members, seed, gaussian_grid,
                          gaussian_out);
    }
    if (moments->parsed()) {
      return run_moments(moments_in, moments_k, grid_stride, moments_periodic, moments_out);
    }
    if (structure->parsed()) {
      return run_structure(structure_in, structure_p, structure_radii, structure_periodic,
                           structure_out);
    }
    if (project->parsed()) {
      return run_project(project_in, project_cells, project_realizations, project_seed,
                         project_periodic, project_out);
    }
    if (wasserstein->parsed()) return run_wasserstein(w_a, w_b, w_periodic, w_plan);
    if (residual->parsed()) {
      return run_residual(residual_traj, residual_k, residual_flux, residual_speed, residual_x0,
                          residual_w, residual_t1, residual_t2, residual_periodic);
    }
    if (entropy->parsed()) {
      return run_entropy(entropy_traj, entropy_constants, entropy_flux, entropy_speed,
                         entropy_x0, entropy_w, entropy_t1, entropy_t2, entropy_periodic);
    }
    if (evolve->parsed()) {
      return run_evolve(evolve_in, evolve_flux, evolve_speed, evolve_times, evolve_cfl,
                        evolve_periodic, evolve_out);
    }
    if (run->parsed()) return run_run(run_config, run_out);
    if (list->parsed()) {
      for (const auto& name : statsol::experiment_names()) {
        std::cout << name << ": " << statsol::experiment_key_summary(name) << '\n';
      }
      return 0;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
