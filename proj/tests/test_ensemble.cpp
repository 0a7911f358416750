#include <doctest.h>

#include <Eigen/Dense>

#include <cmath>
#include <numbers>
#include <numeric>
#include <stdexcept>
#include <vector>

#include "statsol/ensemble.hpp"
#include "statsol/grid.hpp"
#include "statsol/rng.hpp"
#include "statsol/solver.hpp"

using namespace statsol;

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

GridLayout torus(std::size_t cells) { return GridLayout{Domain{0.0, 1.0, true}, cells}; }

Ensemble sine_ensemble(std::size_t members, std::size_t cells, std::uint64_t seed) {
  std::vector<GridFunction> result;
  for (std::size_t m = 0; m < members; ++m) {
    RandomStream stream = RandomStream::derive(seed, m);
    const double offset = stream.uniform(-0.3, 0.3);
    const double amplitude = stream.uniform(0.2, 0.6);
    const double phase = stream.uniform01();
    result.push_back(GridFunction::sample(torus(cells), [&](double x) {
      return offset + amplitude * std::sin(kTwoPi * (x - phase));
    }));
  }
  return Ensemble(std::move(result), seed);
}

double mean_field_integral(const Ensemble& ensemble) {
  double total = 0.0;
  for (const auto& member : ensemble.members()) {
    for (double v : member.values()) total += v;
  }
  return total * ensemble.member(0).dx() / static_cast<double>(ensemble.size());
}

}  // namespace

TEST_CASE("ensemble construction validates shared grids") {
  std::vector<GridFunction> members;
  members.push_back(GridFunction::constant(torus(8), 1.0));
  members.push_back(GridFunction::constant(torus(16), 1.0));
  CHECK_THROWS_AS(Ensemble(std::move(members)), std::invalid_argument);
  CHECK_THROWS_AS(Ensemble(std::vector<GridFunction>{}), std::invalid_argument);
}

TEST_CASE("canonical solution with times (0,) returns the initial ensemble") {
  const auto initial = sine_ensemble(3, 32, 5);
  const auto traj = canonical_solution(initial, burgers_flux(), std::vector<double>{0.0});
  REQUIRE(traj.n_times() == 1);
  for (std::size_t m = 0; m < initial.size(); ++m) {
    for (std::size_t j = 0; j < initial.member(m).n_cells(); ++j) {
      CHECK(traj.state(0).member(m).value(j) == initial.member(m).value(j));
    }
  }
}

TEST_CASE("a singleton canonical solution is the entropy solution") {
  const auto initial = sine_ensemble(1, 64, 9);

  // One output segment: the trajectory runs the same step sequence as the
  // plain solver driver, so agreement is bitwise.
  const std::vector<double> single = {0.0, 0.25};
  const auto one_leg = canonical_solution(initial, burgers_flux(), single, 0.9);
  const auto direct = evolve(initial.member(0), burgers_flux(), 0.25, 0.9);
  for (std::size_t j = 0; j < direct.n_cells(); ++j) {
    CHECK(one_leg.state(1).member(0).value(j) == direct.value(j));
  }

  // Intermediate landings shorten some steps, so against a fresh solve from
  // t = 0 the two step sequences differ at the scheme's own accuracy.
  const std::vector<double> times = {0.0, 0.1, 0.25};
  const auto traj = canonical_solution(initial, burgers_flux(), times, 0.9);
  for (std::size_t k = 1; k < times.size(); ++k) {
    const auto reference = evolve(initial.member(0), burgers_flux(), times[k], 0.9);
    CHECK(l1_distance(traj.state(k).member(0), reference) <= 5.0 * reference.dx());
  }
}

TEST_CASE("member identity is preserved along trajectories") {
  const auto initial = sine_ensemble(5, 32, 11);
  const std::vector<double> times = {0.0, 0.2};
  std::vector<std::size_t> order = {3, 0, 4, 1, 2};

  const auto traj = canonical_solution(initial, burgers_flux(), times);
  const auto permuted_traj = canonical_solution(initial.permuted(order), burgers_flux(), times);
  for (std::size_t k = 0; k < times.size(); ++k) {
    for (std::size_t m = 0; m < order.size(); ++m) {
      for (std::size_t j = 0; j < 32; ++j) {
        CHECK(permuted_traj.state(k).member(m).value(j) ==
              traj.state(k).member(order[m]).value(j));
      }
    }
  }
}

TEST_CASE("ensemble mean field conserves the spatial integral") {
  const auto initial = sine_ensemble(6, 128, 3);
  const std::vector<double> times = {0.0, 0.1, 0.3, 0.5};
  const auto traj = canonical_solution(initial, burgers_flux(), times);
  const double reference = mean_field_integral(traj.state(0));
  for (std::size_t k = 1; k < times.size(); ++k) {
    CHECK(std::abs(mean_field_integral(traj.state(k)) - reference) <= 1e-10);
  }
}

TEST_CASE("zero kernel samples vanish below test tolerance") {
  const CovarianceKernel zero{"zero", [](double, double) { return 0.0; }};
  const auto ensemble = sample_gaussian(zero, torus(16), 5, 7);
  for (const auto& member : ensemble.members()) {
    for (double v : member.values()) CHECK(std::abs(v) <= 1e-4);  // nugget-level noise only
  }
}

TEST_CASE("sample_gaussian is bit-reproducible for a fixed key") {
  const auto a = sample_gaussian(brownian_kernel(), torus(32), 10, 123);
  const auto b = sample_gaussian(brownian_kernel(), torus(32), 10, 123);
  for (std::size_t m = 0; m < a.size(); ++m) {
    for (std::size_t j = 0; j < 32; ++j) CHECK(a.member(m).value(j) == b.member(m).value(j));
  }
  const auto c = sample_gaussian(brownian_kernel(), torus(32), 10, 124);
  bool any_difference = false;
  for (std::size_t j = 0; j < 32; ++j) {
    if (a.member(0).value(j) != c.member(0).value(j)) any_difference = true;
  }
  CHECK(any_difference);
}

TEST_CASE("brownian samples match the kernel variance and fourth moment") {
  const std::size_t members = 10000;
  const auto ensemble = sample_gaussian(brownian_kernel(), torus(64), members, 42);
  const double band = 5.0 / std::sqrt(static_cast<double>(members));

  for (double x : {0.25, 0.5, 0.75}) {
    double second = 0.0, fourth = 0.0;
    for (const auto& member : ensemble.members()) {
      const double v = eval_at(member, x);
      second += v * v;
      fourth += v * v * v * v;
    }
    second /= static_cast<double>(members);
    fourth /= static_cast<double>(members);
    CHECK(std::abs(second - x) / x <= band);
    // (k-1)!! sigma^k with k = 4: 3 x^2, within the wider 10/sqrt(M) band.
    CHECK(std::abs(fourth - 3.0 * x * x) / (3.0 * x * x) <= 2.0 * band);
  }
}

TEST_CASE("odd moments of gaussian ensembles sit inside the statistical band") {
  const std::size_t members = 10000;
  const auto ensemble = sample_gaussian(brownian_kernel(), torus(64), members, 42);
  for (double x : {0.3, 0.7}) {
    std::vector<double> cubes(members);
    double m3 = 0.0;
    for (std::size_t m = 0; m < members; ++m) {
      const double v = eval_at(ensemble.member(m), x);
      cubes[m] = v * v * v;
      m3 += cubes[m];
    }
    m3 /= static_cast<double>(members);
    double mean = 0.0;
    for (double c : cubes) mean += c;
    mean /= static_cast<double>(members);
    double variance = 0.0;
    for (double c : cubes) variance += (c - mean) * (c - mean);
    variance /= static_cast<double>(members);
    CHECK(std::abs(m3) <= 10.0 * std::sqrt(variance / static_cast<double>(members)));
  }
}

TEST_CASE("bundled kernel Gram matrices are positive semidefinite before the nugget") {
  for (const auto& kernel : {brownian_kernel(), exponential_kernel(0.1)}) {
    const auto layout = torus(48);
    const double dx = 1.0 / 48.0;
    Eigen::MatrixXd gram(48, 48);
    for (int i = 0; i < 48; ++i) {
      for (int j = 0; j < 48; ++j) {
        gram(i, j) = kernel.kernel((i + 0.5) * dx, (j + 0.5) * dx);
      }
    }
    const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eigen(gram);
    const double max_diag = gram.diagonal().maxCoeff();
    CHECK(eigen.eigenvalues().minCoeff() >= -1e-8 * max_diag);
    (void)layout;
  }
}

TEST_CASE("asymmetric kernels are rejected") {
  const CovarianceKernel skew{"skew", [](double x, double y) { return x - y; }};
  CHECK_THROWS_AS(sample_gaussian(skew, torus(8), 2, 1), std::invalid_argument);
}

TEST_CASE("indefinite kernels fail the factorization") {
  // Strongly negative off-diagonal entries leave the Gram matrix indefinite.
  const CovarianceKernel bad{"bad",
                             [](double x, double y) { return x == y ? 0.01 : -1.0; }};
  CHECK_THROWS_AS(sample_gaussian(bad, torus(8), 2, 1), std::runtime_error);
}

TEST_CASE("mixture with a single unit part returns the input") {
  const auto base = sine_ensemble(3, 16, 21);
  const std::pair<double, Ensemble> part{1.0, base};
  const auto mixed = mixture(std::span<const std::pair<double, Ensemble>>(&part, 1));
  REQUIRE(mixed.size() == base.size());
  for (std::size_t m = 0; m < base.size(); ++m) {
    for (std::size_t j = 0; j < 16; ++j) {
      CHECK(mixed.member(m).value(j) == base.member(m).value(j));
    }
  }
}

TEST_CASE("mixture realizes weights by multiplicity") {
  const auto u = GridFunction::constant(torus(4), 1.0);
  const auto v = GridFunction::constant(torus(4), 2.0);

  const std::vector<std::pair<double, Ensemble>> halves = {
      {0.5, Ensemble({u})},
      {0.5, Ensemble({v})},
  };
  const auto two = mixture(halves);
  REQUIRE(two.size() == 2);
  CHECK(two.member(0).value(0) == 1.0);
  CHECK(two.member(1).value(0) == 2.0);

  const std::vector<std::pair<double, Ensemble>> quarters = {
      {0.25, Ensemble({u})},
      {0.75, Ensemble({v})},
  };
  const auto four = mixture(quarters, 4);
  REQUIRE(four.size() == 4);
  CHECK(four.member(0).value(0) == 1.0);
  for (std::size_t m = 1; m < 4; ++m) CHECK(four.member(m).value(0) == 2.0);

  REQUIRE(four.parts().size() == 2);
  CHECK(four.parts()[0].offset == 0);
  CHECK(four.parts()[0].count == 1);
  CHECK(four.parts()[1].offset == 1);
  CHECK(four.parts()[1].count == 3);
}

TEST_CASE("non-realizable mixture weights name the required denominator") {
  const auto u = GridFunction::constant(torus(4), 1.0);
  const std::vector<std::pair<double, Ensemble>> thirds = {
      {1.0 / 3.0, Ensemble({u})},
      {2.0 / 3.0, Ensemble({u})},
  };
  CHECK_THROWS_WITH_AS(mixture(thirds, 4), doctest::Contains("3"), std::invalid_argument);
  CHECK(mixture(thirds).size() == 3);
}

TEST_CASE("mixture weights must sum to one") {
  const auto u = GridFunction::constant(torus(4), 1.0);
  const std::vector<std::pair<double, Ensemble>> bad = {
      {0.5, Ensemble({u})},
      {0.4, Ensemble({u})},
  };
  CHECK_THROWS_AS(mixture(bad), std::invalid_argument);
}

TEST_CASE("trajectory parts survive canonical evolution") {
  const auto u = GridFunction::constant(torus(8), 0.5);
  const auto v = GridFunction::constant(torus(8), -0.25);
  const std::vector<std::pair<double, Ensemble>> parts = {
      {0.25, Ensemble({u})},
      {0.75, Ensemble({v})},
  };
  const auto mixed = mixture(parts, 4);
  const auto traj = canonical_solution(mixed, burgers_flux(), std::vector<double>{0.0, 0.1});
  REQUIRE(traj.state(1).parts().size() == 2);
  CHECK(traj.state(1).parts()[0].weight == doctest::Approx(0.25));
  CHECK(traj.state(1).parts()[1].offset == 1);
}

TEST_CASE("trajectory validation") {
  const auto e = sine_ensemble(2, 8, 1);
  CHECK_THROWS_AS(Trajectory({0.1, 0.2}, {e, e}), std::invalid_argument);
  CHECK_THROWS_AS(Trajectory({0.0, 0.0}, {e, e}), std::invalid_argument);
  CHECK_THROWS_AS(Trajectory({0.0, 0.1}, {e}), std::invalid_argument);
}
