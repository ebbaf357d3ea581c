#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "doctest.h"
#include "hsk/report_io.hpp"

namespace fs = std::filesystem;

namespace {

const char* cli = HSK_CLI_PATH;

fs::path work_dir() {
  const fs::path dir = fs::temp_directory_path() / "hsk_cli_test";
  fs::create_directories(dir);
  return dir;
}

void write_file(const fs::path& p, const std::string& text) {
  std::ofstream out(p);
  out << text;
}

int run(const std::string& args) {
  const int status = std::system((std::string(cli) + " " + args + " > /dev/null 2>&1").c_str());
  return WEXITSTATUS(status);
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

TEST_CASE("list exits cleanly and names the scenarios") {
  const fs::path dir = work_dir();
  const fs::path capture = dir / "list.txt";
  const int status =
      std::system((std::string(cli) + " list > " + capture.string() + " 2>&1").c_str());
  CHECK(WEXITSTATUS(status) == 0);
  const std::string text = slurp(capture);
  CHECK(text.find("periodic_reset") != std::string::npos);
  CHECK(text.find("rps_nash") != std::string::npos);
  CHECK(text.find("literature") != std::string::npos);
}

TEST_CASE("run writes an arc CSV that round-trips bit-exactly") {
  const fs::path dir = work_dir();
  const fs::path cfg = dir / "run.cfg";
  write_file(cfg,
             "scenario.name = periodic_reset\n"
             "solver.t_max = 25\n"
             "# comments and blank lines are ignored\n"
             "\n");
  CHECK(run("run --config " + cfg.string() + " --out " + dir.string()) == 0);
  const fs::path csv = dir / "periodic_reset_arc.csv";
  REQUIRE(fs::exists(csv));
  REQUIRE(fs::exists(dir / "periodic_reset_meta.json"));

  const hsk::HybridArc arc = hsk::read_arc_csv(csv.string());
  CHECK(arc.dim() == 2);
  CHECK(arc.jump_count() == 2);
  const fs::path copy = dir / "copy.csv";
  hsk::write_arc_csv(copy.string(), arc, {"x1", "x2"});
  CHECK(slurp(csv) == slurp(copy));

  // Jump instants appear as duplicated time rows with consecutive j.
  const std::string text = slurp(csv);
  CHECK(text.rfind("t,j,x1,x2\n", 0) == 0);
}

TEST_CASE("repeated runs are byte-identical") {
  const fs::path dir = work_dir();
  const fs::path cfg = dir / "repro.cfg";
  write_file(cfg,
             "scenario.name = bouncing_seeker\n"
             "solver.t_max = 2\n");
  const fs::path out1 = dir / "r1", out2 = dir / "r2";
  CHECK(run("run --config " + cfg.string() + " --seed 7 --out " + out1.string()) == 0);
  CHECK(run("run --config " + cfg.string() + " --seed 7 --out " + out2.string()) == 0);
  CHECK(slurp(out1 / "bouncing_seeker_arc.csv") == slurp(out2 / "bouncing_seeker_arc.csv"));
}

TEST_CASE("termination maps onto exit codes") {
  const fs::path dir = work_dir();
  // A start point in neither C nor D.
  const fs::path dead = dir / "dead.cfg";
  write_file(dead,
             "scenario.name = periodic_reset\n"
             "scenario.param.x1_0 = -5\n");
  CHECK(run("run --config " + dead.string() + " --out " + dir.string()) == 3);
  // Shrinking the filter ball forces the flow to leave C with no jump set.
  const fs::path exits = dir / "exit.cfg";
  write_file(exits,
             "scenario.name = coulomb_plant_loop\n"
             "scenario.param.lambda_xi = 1e-6\n"
             "solver.t_max = 50\n");
  CHECK(run("run --config " + exits.string() + " --out " + dir.string()) == 2);
}

TEST_CASE("config and registry errors exit with status 1") {
  const fs::path dir = work_dir();
  const fs::path bad = dir / "bad.cfg";
  write_file(bad, "scenario.name = no_such_scenario\n");
  CHECK(run("run --config " + bad.string() + " --out " + dir.string()) == 1);
  write_file(bad, "scenario.name = periodic_reset\nunknown.key = 3\n");
  CHECK(run("run --config " + bad.string() + " --out " + dir.string()) == 1);
  write_file(bad, "scenario.name = periodic_reset\nsolver.h = abc\n");
  CHECK(run("run --config " + bad.string() + " --out " + dir.string()) == 1);
  write_file(bad, "solver.h = 0.01\n");  // missing scenario.name
  CHECK(run("run --config " + bad.string() + " --out " + dir.string()) == 1);
  CHECK(run("run --config " + (dir / "missing.cfg").string()) == 1);
}

TEST_CASE("sweep writes per-value arcs and a summary") {
  const fs::path dir = work_dir() / "sweep";
  fs::create_directories(dir);
  const fs::path cfg = dir / "sweep.cfg";
  write_file(cfg,
             "scenario.name = periodic_reset\n"
             "solver.t_max = 25\n"
             "sweep.param = gamma\n"
             "sweep.values = 0.05, 0.1, 0.2\n");
  CHECK(run("sweep --config " + cfg.string() + " --jobs 2 --out " + dir.string()) == 0);
  const fs::path summary = dir / "periodic_reset_sweep.csv";
  REQUIRE(fs::exists(summary));
  const std::string text = slurp(summary);
  CHECK(text.rfind("value,", 0) == 0);
  // Header plus one row per swept value.
  CHECK(std::count(text.begin(), text.end(), '\n') == 4);
  CHECK(fs::exists(dir / "periodic_reset_gamma_0_arc.csv"));
  CHECK(fs::exists(dir / "periodic_reset_gamma_2_arc.csv"));

  // An empty value list is a configuration error.
  write_file(cfg,
             "scenario.name = periodic_reset\n"
             "sweep.param = gamma\n"
             "sweep.values =\n");
  CHECK(run("sweep --config " + cfg.string() + " --out " + dir.string()) == 1);
}

TEST_CASE("compare requires a counterpart and reports closeness") {
  const fs::path dir = work_dir() / "compare";
  fs::create_directories(dir);
  const fs::path cfg = dir / "cmp.cfg";
  write_file(cfg,
             "scenario.name = growing_timer_es\n"
             "compare.tau = 3\n"
             "compare.eps_grid = 0.01, 0.05, 0.1, 0.5, 1\n");
  CHECK(run("compare --config " + cfg.string() + " --out " + dir.string()) == 0);
  const fs::path report = dir / "growing_timer_es_closeness.json";
  REQUIRE(fs::exists(report));
  const std::string text = slurp(report);
  CHECK(text.find("\"tau\"") != std::string::npos);
  CHECK(text.find("\"min_eps\"") != std::string::npos);

  write_file(cfg, "scenario.name = periodic_reset\n");
  CHECK(run("compare --config " + cfg.string() + " --out " + dir.string()) == 1);
}

TEST_CASE("the default output directory comes from the environment") {
  const fs::path dir = work_dir() / "envout";
  fs::create_directories(dir);
  const fs::path cfg = dir / "env.cfg";
  write_file(cfg,
             "scenario.name = periodic_reset\n"
             "solver.t_max = 5\n"
             "output.report_json = 0\n");
  const std::string command = "HSK_OUT_DIR=" + dir.string() + " " + std::string(cli) +
                              " run --config " + cfg.string() + " > /dev/null 2>&1";
  CHECK(WEXITSTATUS(std::system(command.c_str())) == 0);
  CHECK(fs::exists(dir / "periodic_reset_arc.csv"));
  CHECK_FALSE(fs::exists(dir / "periodic_reset_meta.json"));
}
