// End-to-end runs of the statsol binary; exercises the documented
// subcommands and the STATSOL_THREADS determinism contract.

#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#ifndef STATSOL_BIN
#error "STATSOL_BIN must point at the CLI binary"
#endif

namespace {

namespace fs = std::filesystem;

fs::path work_dir() {
  const auto dir = fs::temp_directory_path() / "statsol_cli";
  fs::create_directories(dir);
  return dir;
}

int run(const std::string& args) {
  const std::string command = std::string(STATSOL_BIN) + " " + args + " > /dev/null 2>&1";
  return std::system(command.c_str());
}

std::string capture(const std::string& args) {
  const auto out = work_dir() / "capture.txt";
  const std::string command =
      std::string(STATSOL_BIN) + " " + args + " > " + out.string() + " 2>&1";
  REQUIRE(std::system(command.c_str()) == 0);
  std::ifstream in(out);
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

std::string slurp(const fs::path& path) {
  std::ifstream in(path);
  REQUIRE(in);
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

}  // namespace

TEST_CASE("gaussian -> moments/structure/project pipeline") {
  const auto dir = work_dir();
  const auto ens = dir / "ens.csv";
  REQUIRE(run("gaussian --kernel brownian --cells 32 --members 50 --seed 42 --out " +
              ens.string()) == 0);
  CHECK(slurp(ens).rfind("member,x_center,value\n", 0) == 0);

  const auto m2 = dir / "m2.csv";
  REQUIRE(run("moments --in " + ens.string() + " --k 2 --grid-stride 8 --out " + m2.string()) ==
          0);
  CHECK(slurp(m2).rfind("x1,x2,value\n", 0) == 0);

  const auto structure = capture("structure --in " + ens.string() + " --p 1 --radii 0.2,0.1");
  CHECK(structure.rfind("r,value,below_resolution\n", 0) == 0);

  const auto projected = dir / "proj.csv";
  REQUIRE(run("project --in " + ens.string() + " --cells 8 --realizations 2 --seed 1 --out " +
              projected.string()) == 0);
  CHECK(slurp(projected).rfind("member,x_center,value\n", 0) == 0);
}

TEST_CASE("wasserstein prints W1 and emits a plan") {
  const auto dir = work_dir();
  const auto a = dir / "a.csv";
  const auto b = dir / "b.csv";
  REQUIRE(run("gaussian --cells 16 --members 8 --seed 1 --out " + a.string()) == 0);
  REQUIRE(run("gaussian --cells 16 --members 8 --seed 2 --out " + b.string()) == 0);

  const auto plan = dir / "plan.csv";
  const auto output = capture("wasserstein --a " + a.string() + " --b " + b.string() +
                              " --emit-plan " + plan.string());
  CHECK(output.rfind("W1=", 0) == 0);
  CHECK(slurp(plan).rfind("i,j\n", 0) == 0);
}

TEST_CASE("evolve -> residual and entropy sweeps") {
  const auto dir = work_dir();
  const auto ens = dir / "evolve_in.csv";
  REQUIRE(run("gaussian --kernel exponential --length-scale 0.3 --cells 64 --members 3 "
              "--seed 5 --out " +
              ens.string()) == 0);

  const auto traj = dir / "traj.csv";
  REQUIRE(run("evolve --in " + ens.string() +
              " --flux burgers --times 0,0.05,0.1,0.15,0.2,0.25,0.3,0.35,0.4,0.45 --out " +
              traj.string()) == 0);

  const auto residual = capture("residual --traj " + traj.string() +
                                " --k 2 --flux burgers --x0 0.5 --w 0.3 --t1 0.2 --t2 0.4");
  CHECK(residual.rfind("quantity,value\n", 0) == 0);
  CHECK(residual.find("moment_residual_k2,") != std::string::npos);

  const auto entropy = capture("entropy --traj " + traj.string() +
                               " --c -1,0,0.5,1 --x0 0.5 --w 0.3 --t1 0.2 --t2 0.4");
  CHECK(entropy.find("kruzkov_residual_c=0.5,") != std::string::npos);
}

TEST_CASE("list-experiments names all pipelines") {
  const auto output = capture("list-experiments");
  for (const char* name : {"riemann_ensemble", "gaussian_isserlis", "contraction",
                           "projection_refinement", "dc_modulus", "residual_decay",
                           "expansion_shock"}) {
    CHECK(output.find(name) != std::string::npos);
  }
}

TEST_CASE("run exits nonzero on unknown config fields") {
  const auto dir = work_dir();
  const auto cfg = dir / "bad.json";
  {
    std::ofstream out(cfg);
    out << "{\"experiment\":\"contraction\",\"wrong_key\":3}\n";
  }
  CHECK(run("run --config " + cfg.string() + " --out " + (dir / "bad_out").string()) != 0);
}

TEST_CASE("artifacts are identical across worker counts") {
  const auto dir = work_dir();
  const auto cfg = dir / "det.json";
  {
    std::ofstream out(cfg);
    out << "{\"experiment\":\"gaussian_isserlis\",\"cells\":32,\"members\":500,\"seed\":42}\n";
  }
  const auto out1 = dir / "threads1";
  const auto out2 = dir / "threads2";
  const std::string base = std::string(STATSOL_BIN) + " run --config " + cfg.string();
  REQUIRE(std::system(("STATSOL_THREADS=1 " + base + " --out " + out1.string() +
                       " > /dev/null 2>&1")
                          .c_str()) == 0);
  REQUIRE(std::system(("STATSOL_THREADS=2 " + base + " --out " + out2.string() +
                       " > /dev/null 2>&1")
                          .c_str()) == 0);
  CHECK(slurp(out1 / "summary.json") == slurp(out2 / "summary.json"));
  CHECK(slurp(out1 / "variance_field.csv") == slurp(out2 / "variance_field.csv"));
  CHECK(slurp(out1 / "odd_moments.csv") == slurp(out2 / "odd_moments.csv"));
}
