// Acceptance suite: one line per criterion, nonzero exit when any fails.
// Criteria are evaluated through the experiment pipelines plus direct oracle
// comparisons; every tolerance is pinned here or inside the pipelines.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <string>
#include <vector>

#include "statsol/ensemble.hpp"
#include "statsol/experiment.hpp"
#include "statsol/grid.hpp"
#include "statsol/rng.hpp"
#include "statsol/transport.hpp"

namespace {

using namespace statsol;

struct CriterionResult {
  bool pass = false;
  std::string detail;
};

double run_and_count(const std::string& config_text, std::size_t& failed, std::size_t& total) {
  const auto start = std::chrono::steady_clock::now();
  const auto report = run_experiment(ExperimentConfig::from_json_text(config_text));
  const auto stop = std::chrono::steady_clock::now();
  for (const auto& check : report.checks) {
    ++total;
    if (!check.pass) ++failed;
  }
  return std::chrono::duration<double>(stop - start).count();
}

CriterionResult criterion_contraction() {
  std::size_t failed = 0, total = 0;
  const double seconds = run_and_count(
      R"({"experiment":"contraction","cells":256,"members":64,"seed":42,
          "times":[0.0,0.1,0.2,0.3,0.4,0.5],"mode":"pair"})",
      failed, total);
  char detail[128];
  std::snprintf(detail, sizeof(detail), "%zu/%zu W1 checks, %.1f s (target 30 s)",
                total - failed, total, seconds);
  return {failed == 0 && seconds < 30.0, detail};
}

CriterionResult criterion_single_solution_stability() {
  std::size_t failed = 0, total = 0;
  run_and_count(
      R"({"experiment":"contraction","cells":256,"members":64,"seed":42,
          "times":[0.0,0.1,0.2,0.3,0.4,0.5],"mode":"singleton"})",
      failed, total);
  run_and_count(
      R"({"experiment":"contraction","cells":256,"members":64,"seed":42,
          "times":[0.0,0.1,0.2,0.3,0.4,0.5],"mode":"mixture"})",
      failed, total);
  char detail[128];
  std::snprintf(detail, sizeof(detail), "%zu/%zu checks (singleton + 3-atom mixture)",
                total - failed, total);
  return {failed == 0, detail};
}

CriterionResult criterion_gaussian_isserlis() {
  std::size_t failed = 0, total = 0;
  const double seconds = run_and_count(
      R"({"experiment":"gaussian_isserlis","cells":64,"members":10000,"seed":42})", failed,
      total);
  char detail[128];
  std::snprintf(detail, sizeof(detail),
                "%zu/%zu probe checks, %.1f s (target 60 s)", total - failed, total, seconds);
  return {failed == 0 && seconds < 60.0, detail};
}

CriterionResult criterion_dc_modulus() {
  std::size_t failed = 0, total = 0;
  run_and_count(
      R"({"experiment":"dc_modulus","cells":256,"members":8,"seed":42,
          "radii":[0.1,0.05,0.025],"structure_p":1})",
      failed, total);
  char detail[128];
  std::snprintf(detail, sizeof(detail), "%zu/%zu oracle/stability/floor checks",
                total - failed, total);
  return {failed == 0, detail};
}

CriterionResult criterion_projection_refinement() {
  std::size_t failed = 0, total = 0;
  run_and_count(
      R"({"experiment":"projection_refinement","cells":64,"members":32,"seed":42,
          "realizations":20,"partition_cells":[8,16,32]})",
      failed, total);
  char detail[128];
  std::snprintf(detail, sizeof(detail), "%zu/%zu refinement bounds", total - failed, total);
  return {failed == 0, detail};
}

CriterionResult criterion_residual_decay() {
  std::size_t failed = 0, total = 0;
  const double seconds = run_and_count(
      R"({"experiment":"residual_decay","cells_sweep":[128,256,512],"orders":[1,2],
          "seed":42})",
      failed, total);
  char detail[128];
  std::snprintf(detail, sizeof(detail),
                "%zu/%zu decay-ratio checks, %.1f s (target 120 s)", total - failed, total,
                seconds);
  return {failed == 0 && seconds < 120.0, detail};
}

CriterionResult criterion_entropy_discrimination() {
  std::size_t failed = 0, total = 0;
  run_and_count(
      R"({"experiment":"expansion_shock","cells":256,"seed":42,
          "entropy_constants":[-1.0,-0.5,0.0,0.25,0.5,0.75,1.0]})",
      failed, total);
  char detail[128];
  std::snprintf(detail, sizeof(detail), "%zu/%zu sweep + violation checks", total - failed,
                total);
  return {failed == 0, detail};
}

CriterionResult criterion_oracle_equivalences() {
  std::size_t failed = 0, total = 0;

  // Hungarian vs exhaustive search on random integer matrices.
  RandomStream stream(2026);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t n = 1 + static_cast<std::size_t>(stream.uniform01() * 6.0);
    CostMatrix cost(std::min<std::size_t>(n, 6));
    for (std::size_t i = 0; i < cost.size(); ++i) {
      for (std::size_t j = 0; j < cost.size(); ++j) {
        cost.at(i, j) = std::floor(stream.uniform01() * 100.0);
      }
    }
    ++total;
    if (hungarian(cost).cost != assignment_bruteforce(cost).cost) ++failed;
  }

  // Line metric vs the assignment route on single-cell grid functions.
  for (int trial = 0; trial < 50; ++trial) {
    const std::size_t m = 1 + static_cast<std::size_t>(stream.uniform01() * 7.0);
    std::vector<double> a(m), b(m);
    std::vector<GridFunction> ua, ub;
    for (std::size_t i = 0; i < m; ++i) {
      a[i] = stream.uniform(-2.0, 2.0);
      b[i] = stream.uniform(-2.0, 2.0);
      ua.emplace_back(Domain{0.0, 1.0, true}, std::vector<double>{a[i]});
      ub.emplace_back(Domain{0.0, 1.0, true}, std::vector<double>{b[i]});
    }
    ++total;
    if (std::abs(w1_real(a, b) - w1_ensembles(Ensemble(std::move(ua)), Ensemble(std::move(ub)))) >
        1e-12) {
      ++failed;
    }
  }

  // Godunov solutions vs the exact Riemann solutions at t = 0.25, 400 cells.
  run_and_count(R"({"experiment":"riemann_ensemble","cells":400,"time":0.25})", failed, total);

  char detail[128];
  std::snprintf(detail, sizeof(detail),
                "%zu/%zu assignment/line-metric/Riemann comparisons", total - failed, total);
  return {failed == 0, detail};
}

}  // namespace

int main() {
  struct Criterion {
    const char* name;
    std::function<CriterionResult()> run;
  };
  const std::vector<Criterion> criteria = {
      {"1. contraction W1(t) <= W1(0) + 1e-10", criterion_contraction},
      {"2. single-solution stability (singleton & mixture)", criterion_single_solution_stability},
      {"3. Gaussian variance / Isserlis / odd moments", criterion_gaussian_isserlis},
      {"4. DC modulus vs quadrature oracle & random-sign floor", criterion_dc_modulus},
      {"5. projection refinement W1 <= 3 * structure function", criterion_projection_refinement},
      {"6. moment-residual decay ratio in [1.4, 2.8]", criterion_residual_decay},
      {"7. entropy discrimination (shock passes, expansion fails)",
       criterion_entropy_discrimination},
      {"8. oracle equivalences (hungarian, W1 on the line, Riemann)",
       criterion_oracle_equivalences},
  };

  int failures = 0;
  for (const auto& criterion : criteria) {
    CriterionResult result;
    try {
      result = criterion.run();
    } catch (const std::exception& e) {
      result = {false, std::string("exception: ") + e.what()};
    }
    std::printf("[%s] %s — %s\n", result.pass ? "PASS" : "FAIL", criterion.name,
                result.detail.c_str());
    std::fflush(stdout);
    if (!result.pass) ++failures;
  }
  std::printf("%zu/%zu acceptance criteria passed\n", criteria.size() - failures,
              criteria.size());
  return failures == 0 ? 0 : 1;
}
