#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#if defined(__unix__) || defined(__APPLE__)
#include <sys/wait.h>
#include <unistd.h>
#endif

namespace {

namespace fs = std::filesystem;

const char* cli_path() { return std::getenv("ORTHOCYCLE_CLI"); }

int run(const std::string& args) {
  const std::string cmd =
      std::string("\"") + cli_path() + "\" " + args + " >/dev/null 2>&1";
  const int status = std::system(cmd.c_str());
#if defined(__unix__) || defined(__APPLE__)
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
#else
  return status;
#endif
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  REQUIRE(in.good());
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

struct ScratchDir {
  fs::path path;
  ScratchDir() {
    path = fs::temp_directory_path() /
           ("orthocycle-cli-test-" + std::to_string(::getpid()));
    fs::remove_all(path);
    fs::create_directories(path);
  }
  ~ScratchDir() { fs::remove_all(path); }
};

}  // namespace

TEST_CASE("command line surface") {
  if (!cli_path()) SKIP("ORTHOCYCLE_CLI not set; CLI smoke tests need the built binary");
  ScratchDir tmp;

  SECTION("help exits cleanly") {
    CHECK(run("--help") == 0);
    CHECK(run("diagnose --help") == 0);
  }

  SECTION("bad invocations exit with the usage code") {
    CHECK(run("") == 2);                    // a subcommand is required
    CHECK(run("--definitely-not-a-flag") == 2);
    CHECK(run("frobnicate") == 2);
    // validated after parsing: too few starts
    CHECK(run("diagnose --N 500 --starts 4 --out " + (tmp.path / "a").string()) == 2);
    // unknown skew system
    CHECK(run("diagnose --system Q --N 500 --starts 8 --out " +
              (tmp.path / "b").string()) == 2);
    // missing config file
    CHECK(run("diagnose --N 500 --starts 8 --config /nonexistent.ini") == 2);
    // eta outside (0,1)
    CHECK(run("orbit --eta 1.5 --steps 10 --out " + (tmp.path / "c").string()) == 2);
  }

  SECTION("reports are byte-identical for a fixed seed") {
    const auto d1 = (tmp.path / "r1").string();
    const auto d2 = (tmp.path / "r2").string();
    const std::string base =
        "diagnose --cocycle cex1 --N 2000 --starts 8 --seed 99 --out ";
    REQUIRE(run(base + d1) == 0);
    REQUIRE(run(base + d2) == 0);
    const auto j1 = slurp(fs::path(d1) / "diagnose.json");
    CHECK(j1 == slurp(fs::path(d2) / "diagnose.json"));
    CHECK(j1.find("\"seed\": 99") != std::string::npos);
    CHECK(j1.find("wall_time") == std::string::npos);  // timing never in reports

    // a different seed produces a different report
    const auto d3 = (tmp.path / "r3").string();
    REQUIRE(run("diagnose --cocycle cex1 --N 2000 --starts 8 --seed 100 --out " +
                d3) == 0);
    CHECK(j1 != slurp(fs::path(d3) / "diagnose.json"));
  }

  SECTION("environment variables stand in for global flags") {
    const auto d1 = (tmp.path / "e1").string();
    const auto d2 = (tmp.path / "e2").string();
    REQUIRE(run("diagnose --cocycle cex1 --N 1000 --starts 8 --seed 7 --out " +
                d1) == 0);
    const std::string env_cmd = "ORTHOCYCLE_SEED=7 ORTHOCYCLE_OUT=" + d2 +
                                " \"" + cli_path() +
                                "\" diagnose --cocycle cex1 --N 1000 --starts 8"
                                " >/dev/null 2>&1";
    REQUIRE(std::system(env_cmd.c_str()) == 0);
    CHECK(slurp(fs::path(d1) / "diagnose.json") ==
          slurp(fs::path(d2) / "diagnose.json"));
  }

  SECTION("orbit dump has the expected shape") {
    const auto d = (tmp.path / "orbit").string();
    REQUIRE(run("orbit --cocycle example2 --steps 50 --system S --out " + d) == 0);
    const auto csv = slurp(fs::path(d) / "orbit.csv");
    CHECK(csv.rfind("n,base,fibre\n", 0) == 0);
    CHECK(std::count(csv.begin(), csv.end(), '\n') == 51);  // header + 50 rows
  }

  SECTION("config file feeds the run") {
    const auto cfgp = tmp.path / "exp.ini";
    {
      std::ofstream out(cfgp);
      out << "[cocycle]\nkind = cex1\n[scan]\nN = 1500\nstarts = 8\n";
    }
    const auto d = (tmp.path / "cfg-out").string();
    REQUIRE(run("diagnose --config " + cfgp.string() + " --out " + d) == 0);
    const auto j = slurp(fs::path(d) / "diagnose.json");
    CHECK(j.find("\"cocycle.kind\": \"cex1\"") != std::string::npos);
    CHECK(j.find("\"scan.N\": \"1500\"") != std::string::npos);
    CHECK(j.find("non-ergodic-detected") != std::string::npos);
  }
}
