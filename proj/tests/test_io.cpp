#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <vector>

#include "statsol/ensemble.hpp"
#include "statsol/grid.hpp"
#include "statsol/io.hpp"
#include "statsol/rng.hpp"
#include "statsol/solver.hpp"

using namespace statsol;

namespace {

std::filesystem::path temp_file(const std::string& name) {
  const auto dir = std::filesystem::temp_directory_path() / "statsol_io";
  std::filesystem::create_directories(dir);
  return dir / name;
}

Ensemble random_ensemble(std::uint64_t seed, std::size_t members, std::size_t cells,
                         bool periodic) {
  std::vector<GridFunction> result;
  for (std::size_t m = 0; m < members; ++m) {
    RandomStream stream = RandomStream::derive(seed, m);
    std::vector<double> values(cells);
    for (auto& v : values) v = stream.uniform(-5.0, 5.0);
    result.emplace_back(Domain{-1.0, 3.0, periodic}, std::move(values));
  }
  return Ensemble(std::move(result));
}

}  // namespace

TEST_CASE("format_double round-trips binary doubles") {
  RandomStream stream(1);
  for (int trial = 0; trial < 200; ++trial) {
    const double value = (stream.uniform01() - 0.5) * std::pow(10.0, stream.uniform(-12.0, 12.0));
    CHECK(std::stod(format_double(value)) == value);
  }
  CHECK(format_double(1.0) == "1");
  CHECK(format_double(0.5) == "0.5");
}

TEST_CASE("grid function CSV round trip") {
  RandomStream stream(9);
  std::vector<double> values(17);
  for (auto& v : values) v = stream.uniform(-2.0, 2.0);
  const GridFunction u(Domain{0.25, 1.75, false}, values);

  const auto path = temp_file("grid.csv");
  write_grid_function_csv(u, path);
  const auto back = read_grid_function_csv(path, false);

  REQUIRE(back.n_cells() == u.n_cells());
  CHECK(back.domain().left == doctest::Approx(u.domain().left).epsilon(1e-14));
  CHECK(back.domain().right == doctest::Approx(u.domain().right).epsilon(1e-14));
  for (std::size_t j = 0; j < u.n_cells(); ++j) CHECK(back.value(j) == u.value(j));

  std::ostringstream text;
  write_grid_function_csv(u, text);
  CHECK(text.str().rfind("x_center,value\n", 0) == 0);
}

TEST_CASE("ensemble CSV round trip preserves member order and bits") {
  const auto ensemble = random_ensemble(4, 6, 12, true);
  const auto path = temp_file("ensemble.csv");
  write_ensemble_csv(ensemble, path);
  const auto back = read_ensemble_csv(path, true);
  REQUIRE(back.size() == ensemble.size());
  for (std::size_t m = 0; m < ensemble.size(); ++m) {
    for (std::size_t j = 0; j < 12; ++j) {
      CHECK(back.member(m).value(j) == ensemble.member(m).value(j));
    }
  }
}

TEST_CASE("trajectory CSV round trip") {
  const auto initial = random_ensemble(11, 3, 16, true);
  const std::vector<double> times = {0.0, 0.05, 0.1};
  const auto traj = canonical_solution(initial, burgers_flux(), times, 0.5);

  const auto path = temp_file("traj.csv");
  write_trajectory_csv(traj, path);
  const auto back = read_trajectory_csv(path, true);

  REQUIRE(back.n_times() == traj.n_times());
  for (std::size_t k = 0; k < traj.n_times(); ++k) {
    CHECK(back.time(k) == traj.time(k));
    for (std::size_t m = 0; m < traj.members(); ++m) {
      for (std::size_t j = 0; j < 16; ++j) {
        CHECK(back.state(k).member(m).value(j) == traj.state(k).member(m).value(j));
      }
    }
  }
}

TEST_CASE("readers report the offending file") {
  const auto missing = temp_file("does_not_exist.csv");
  std::filesystem::remove(missing);
  CHECK_THROWS_WITH_AS(read_ensemble_csv(missing, true), doctest::Contains("does_not_exist"),
                       std::runtime_error);

  const auto bad_header = temp_file("bad_header.csv");
  {
    std::ofstream out(bad_header);
    out << "wrong,header\n0,1\n";
  }
  CHECK_THROWS_AS(read_ensemble_csv(bad_header, true), std::runtime_error);

  const auto bad_field = temp_file("bad_field.csv");
  {
    std::ofstream out(bad_field);
    out << "member,x_center,value\n0,0.25,abc\n0,0.75,1\n";
  }
  CHECK_THROWS_WITH_AS(read_ensemble_csv(bad_field, true), doctest::Contains("abc"),
                       std::runtime_error);
}
