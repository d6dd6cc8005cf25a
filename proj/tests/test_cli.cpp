#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <regex>
#include <set>
#include <sstream>
#include <string>

#include "doctest.h"

namespace fs = std::filesystem;

namespace {

struct Outcome {
  int code;
  std::string out;
  std::string err;
};

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

fs::path scratch(const std::string& name) {
  const auto dir = fs::temp_directory_path() / ("pikl_cli_" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

Outcome pikl(const std::string& args, const fs::path& dir) {
  const auto out = dir / "stdout.txt";
  const auto err = dir / "stderr.txt";
  const std::string cmd = std::string("\"") + PIKL_CLI_PATH + "\" " + args + " > \"" + out.string() + "\" 2> \"" +
                          err.string() + "\"";
  const int status = std::system(cmd.c_str());
  const int code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return {code, slurp(out), slurp(err)};
}

}  // namespace

TEST_SUITE("cli") {
  TEST_CASE("run writes the report set and a manifest that reproduces it") {
    const auto dir = scratch("run");
    const auto out = dir / "first";
    const auto r = pikl("run --scenario convection --beta 20 --m 8 --seeds 1..10 --threads 1 -o \"" + out.string() + "\"",
                        dir);
    REQUIRE(r.code == 0);
    for (const char* f : {"report.csv", "report.json", "timings.csv", "manifest.json"}) CHECK(fs::exists(out / f));

    // Ten seed rows and one aggregate row.
    std::istringstream lines(slurp(out / "report.csv"));
    std::string line;
    int seeds = 0, aggregates = 0;
    while (std::getline(lines, line)) {
      seeds += line.rfind("1,convection,seed,", 0) == 0;
      aggregates += line.rfind("1,convection,aggregate,", 0) == 0;
    }
    CHECK(seeds == 10);
    CHECK(aggregates == 1);

    const auto again = dir / "second";
    const auto r2 = pikl("run -c \"" + (out / "manifest.json").string() + "\" -o \"" + again.string() + "\"", dir);
    REQUIRE(r2.code == 0);
    CHECK(slurp(out / "report.csv") == slurp(again / "report.csv"));
    CHECK(slurp(out / "report.json") == slurp(again / "report.json"));

    const auto ins = pikl("inspect \"" + (out / "manifest.json").string() + "\"", dir);
    CHECK(ins.code == 0);
    CHECK(ins.out.find("output,report.csv,ok") != std::string::npos);
  }

  TEST_CASE("printed numbers all come from the report file") {
    const auto dir = scratch("numbers");
    const auto r = pikl("run --scenario convection --m 8 --seeds 1..3 --threads 1 -o \"" + dir.string() + "\"", dir);
    REQUIRE(r.code == 0);
    const std::string report = slurp(dir / "report.csv");
    std::set<std::string> cells;
    std::stringstream ss(report);
    std::string row;
    while (std::getline(ss, row)) {
      std::stringstream rs(row);
      for (std::string cell; std::getline(rs, cell, ',');) cells.insert(cell);
    }
    const std::regex number(R"([-+]?(\d+\.?\d*|\.\d+)([eE][-+]?\d+)?)");
    std::stringstream os(r.out);
    while (std::getline(os, row)) {
      std::stringstream rs(row);
      for (std::string cell; std::getline(rs, cell, ',');)
        if (std::regex_match(cell, number)) CHECK_MESSAGE(cells.count(cell) == 1, cell);
    }
  }

  TEST_CASE("exit codes") {
    const auto dir = scratch("codes");
    const auto o = " -o \"" + dir.string() + "\"";
    const auto missing = pikl("run -c /nonexistent/cfg.json" + o, dir);
    CHECK(missing.code == 2);
    CHECK(missing.err.find("/nonexistent/cfg.json") != std::string::npos);
    CHECK(pikl("run --scenario convection --precision float32" + o, dir).code == 2);
    CHECK(pikl("run --scenario nowhere" + o, dir).code == 2);
    CHECK(pikl("solve-wave --method leapfrog --n 1000" + o, dir).code == 2);
    CHECK(pikl("run --scenario convection --seeds 9..1" + o, dir).code == 2);
    CHECK(pikl("frobnicate", dir).code == 2);
    {
      std::ofstream(dir / "f32.json") << R"({"scenario": {"preset": "wave", "dtype": "float32"}})";
    }
    CHECK(pikl("run -c \"" + (dir / "f32.json").string() + "\"" + o, dir).code == 2);
    {
      std::ofstream(dir / "pde.json") << R"({"scenario": {"preset": "heat_hybrid", "name": "pde_only", "ns": [100],
        "seeds": [1], "m": 10, "estimators": [{"name": "pde", "lambda": 1e-10, "mu": 1e10}]}})";
    }
    const auto numeric = pikl("run -c \"" + (dir / "pde.json").string() + "\"" + o, dir);
    CHECK(numeric.code == 3);
    CHECK(numeric.err.find("pde_only") != std::string::npos);
  }

  TEST_CASE("a tampered output fails manifest verification") {
    const auto dir = scratch("tamper");
    REQUIRE(pikl("run --scenario convection --m 6 --seeds 1 -o \"" + dir.string() + "\"", dir).code == 0);
    { std::ofstream(dir / "report.csv", std::ios::app) << "extra\n"; }
    const auto ins = pikl("inspect \"" + (dir / "manifest.json").string() + "\"", dir);
    CHECK(ins.code == 1);
    CHECK(ins.out.find("output,report.csv,MISMATCH") != std::string::npos);
  }

  TEST_CASE("effdim, spectrum and solve-wave") {
    const auto dir = scratch("other");
    const auto o = " -o \"" + dir.string() + "\"";
    const auto eff = pikl("effdim --preset ddx --m 10 --m 20 --n 100 --n 1000" + o, dir);
    REQUIRE(eff.code == 0);
    CHECK(fs::exists(dir / "effdim.csv"));
    CHECK(eff.out.find("loglog_slope,") != std::string::npos);
    const auto single = pikl("effdim --preset ddx --m 10 --n 100" + o, dir);
    CHECK(single.code == 0);
    CHECK(single.err.find("warning") != std::string::npos);
    CHECK(single.out.find("m_star") == std::string::npos);

    const auto spec = pikl("spectrum --preset heat_disk --m 4 --n 100 --save-matrix" + o, dir);
    REQUIRE(spec.code == 0);
    CHECK(fs::exists(dir / "spectrum.csv"));
    CHECK(fs::exists(dir / "m_matrix.bin"));
    const auto ins = pikl("inspect \"" + (dir / "m_matrix.bin").string() + "\"", dir);
    CHECK(ins.code == 0);
    CHECK(ins.out.find("kind,hermitian_matrix") != std::string::npos);

    const auto wave = pikl("solve-wave --n 1000 --method euler --method rk4 --method cn --grids" + o, dir);
    REQUIRE(wave.code == 0);
    CHECK(fs::exists(dir / "wave_table.csv"));
    CHECK(fs::exists(dir / "grid_rk4.csv"));
  }

  TEST_CASE("output directory from the environment") {
    const auto dir = scratch("env");
    const auto target = dir / "from_env";
    const std::string args = "run --scenario convection --m 6 --seeds 1";
    const std::string cmd = "PIKL_OUTPUT_DIR=\"" + target.string() + "\" \"" + std::string(PIKL_CLI_PATH) + "\" " +
                            args + " > /dev/null 2>&1";
    const int status = std::system(cmd.c_str());
    CHECK(WIFEXITED(status));
    CHECK(WEXITSTATUS(status) == 0);
    CHECK(fs::exists(target / "report.csv"));
  }
}
