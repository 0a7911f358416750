#include "statsol/io.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>
#include <vector>

namespace statsol {

namespace {

std::ofstream open_output(const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open '" + path.string() + "' for writing");
  return out;
}

std::ifstream open_input(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open '" + path.string() + "' for reading");
  return in;
}

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> fields;
  std::string field;
  std::istringstream stream(line);
  while (std::getline(stream, field, ',')) fields.push_back(field);
  return fields;
}

double parse_double(const std::string& text, const std::filesystem::path& path) {
  double value = 0.0;
  const auto* begin = text.data();
  const auto* end = begin + text.size();
  const auto [ptr, ec] = std::from_chars(begin, end, value);
  if (ec != std::errc{} || ptr != end) {
    throw std::runtime_error("bad numeric field '" + text + "' in " + path.string());
  }
  return value;
}

void expect_header(std::istream& in, const std::string& expected,
                   const std::filesystem::path& path) {
  std::string line;
  if (!std::getline(in, line) || line != expected) {
    throw std::runtime_error("expected header '" + expected + "' in " + path.string());
  }
}

// Rebuilds a uniform grid from sorted distinct cell centers.
Domain infer_domain(const std::vector<double>& centers, bool periodic,
                    const std::filesystem::path& path) {
  if (centers.empty()) throw std::runtime_error("no cells in " + path.string());
  if (centers.size() == 1) {
    throw std::runtime_error("cannot infer cell width from a single cell in " + path.string());
  }
  const double dx = centers[1] - centers[0];
  for (std::size_t j = 0; j + 1 < centers.size(); ++j) {
    if (std::abs(centers[j + 1] - centers[j] - dx) > 1e-9 * std::max(1.0, std::abs(dx))) {
      throw std::runtime_error("non-uniform cell centers in " + path.string());
    }
  }
  return Domain{centers.front() - 0.5 * dx, centers.back() + 0.5 * dx, periodic};
}

}  // namespace

std::string format_double(double value) {
  char buffer[40];
  std::snprintf(buffer, sizeof(buffer), "%.17g", value);
  return buffer;
}

void write_grid_function_csv(const GridFunction& u, std::ostream& out) {
  out << "x_center,value\n";
  for (std::size_t j = 0; j < u.n_cells(); ++j) {
    out << format_double(u.cell_center(j)) << ',' << format_double(u.value(j)) << '\n';
  }
}

void write_grid_function_csv(const GridFunction& u, const std::filesystem::path& path) {
  auto out = open_output(path);
  write_grid_function_csv(u, out);
}

void write_ensemble_csv(const Ensemble& ensemble, std::ostream& out) {
  out << "member,x_center,value\n";
  for (std::size_t m = 0; m < ensemble.size(); ++m) {
    const auto& u = ensemble.member(m);
    for (std::size_t j = 0; j < u.n_cells(); ++j) {
      out << m << ',' << format_double(u.cell_center(j)) << ',' << format_double(u.value(j))
          << '\n';
    }
  }
}

void write_ensemble_csv(const Ensemble& ensemble, const std::filesystem::path& path) {
  auto out = open_output(path);
  write_ensemble_csv(ensemble, out);
}

void write_trajectory_csv(const Trajectory& traj, std::ostream& out) {
  out << "time,member,x_center,value\n";
  for (std::size_t k = 0; k < traj.n_times(); ++k) {
    const auto& state = traj.state(k);
    for (std::size_t m = 0; m < state.size(); ++m) {
      const auto& u = state.member(m);
      for (std::size_t j = 0; j < u.n_cells(); ++j) {
        out << format_double(traj.time(k)) << ',' << m << ',' << format_double(u.cell_center(j))
            << ',' << format_double(u.value(j)) << '\n';
      }
    }
  }
}

void write_trajectory_csv(const Trajectory& traj, const std::filesystem::path& path) {
  auto out = open_output(path);
  write_trajectory_csv(traj, out);
}

GridFunction read_grid_function_csv(const std::filesystem::path& path, bool periodic) {
  auto in = open_input(path);
  expect_header(in, "x_center,value", path);
  std::vector<double> centers, values;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto fields = split_csv_line(line);
    if (fields.size() != 2) throw std::runtime_error("bad row in " + path.string());
    centers.push_back(parse_double(fields[0], path));
    values.push_back(parse_double(fields[1], path));
  }
  const Domain domain = infer_domain(centers, periodic, path);
  return GridFunction(domain, std::move(values));
}

Ensemble read_ensemble_csv(const std::filesystem::path& path, bool periodic) {
  auto in = open_input(path);
  expect_header(in, "member,x_center,value", path);
  std::map<std::size_t, std::pair<std::vector<double>, std::vector<double>>> rows;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto fields = split_csv_line(line);
    if (fields.size() != 3) throw std::runtime_error("bad row in " + path.string());
    const auto member = static_cast<std::size_t>(parse_double(fields[0], path));
    rows[member].first.push_back(parse_double(fields[1], path));
    rows[member].second.push_back(parse_double(fields[2], path));
  }
  if (rows.empty()) throw std::runtime_error("no members in " + path.string());

  std::vector<GridFunction> members;
  members.reserve(rows.size());
  for (auto& [member, data] : rows) {
    (void)member;
    const Domain domain = infer_domain(data.first, periodic, path);
    members.emplace_back(domain, std::move(data.second));
  }
  return Ensemble(std::move(members));
}

Trajectory read_trajectory_csv(const std::filesystem::path& path, bool periodic) {
  auto in = open_input(path);
  expect_header(in, "time,member,x_center,value", path);
  std::map<double, std::map<std::size_t, std::pair<std::vector<double>, std::vector<double>>>>
      rows;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto fields = split_csv_line(line);
    if (fields.size() != 4) throw std::runtime_error("bad row in " + path.string());
    const double time = parse_double(fields[0], path);
    const auto member = static_cast<std::size_t>(parse_double(fields[1], path));
    auto& cell = rows[time][member];
    cell.first.push_back(parse_double(fields[2], path));
    cell.second.push_back(parse_double(fields[3], path));
  }
  if (rows.empty()) throw std::runtime_error("no states in " + path.string());

  std::vector<double> times;
  std::vector<Ensemble> states;
  for (auto& [time, members_by_id] : rows) {
    times.push_back(time);
    std::vector<GridFunction> members;
    members.reserve(members_by_id.size());
    for (auto& [member, data] : members_by_id) {
      (void)member;
      const Domain domain = infer_domain(data.first, periodic, path);
      members.emplace_back(domain, std::move(data.second));
    }
    states.emplace_back(std::move(members));
  }
  return Trajectory(std::move(times), std::move(states));
}

}  // namespace statsol
