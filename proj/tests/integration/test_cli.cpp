#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include "doctest.h"
#include "nlqw/io.hpp"

namespace fs = std::filesystem;

namespace {

struct TempDir {
  fs::path path;
  TempDir() {
    path = fs::temp_directory_path() / ("nlqw_cli_" + std::to_string(std::random_device{}()));
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
};

int cli(const std::string& args, const fs::path& log) {
  const std::string cmd =
      std::string(NLQW_CLI_PATH) + " " + args + " >" + log.string() + " 2>&1";
  const int status = std::system(cmd.c_str());
  REQUIRE(WIFEXITED(status));
  return WEXITSTATUS(status);
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream s;
  s << in.rdbuf();
  return s.str();
}

}  // namespace

TEST_CASE("walk subcommand writes a readable time series") {
  TempDir dir;
  const fs::path out = dir.path / "walk.csv";
  CHECK(cli("walk --theta pi/3 --chi 0.6 --steps 200 --stride 10 --out " + out.string(),
             dir.path / "log") == 0);
  std::ifstream in(out);
  const auto rows = nlqw::read_walk(in, nlqw::Format::csv);
  REQUIRE(rows.size() == 20);
  CHECK(rows.back().t == 200);
  CHECK(rows.back().sp > 0.5);
}

TEST_CASE("profile and sweep subcommands in both formats") {
  TempDir dir;
  const fs::path p = dir.path / "p.ndjson";
  CHECK(cli("profile --theta 0.7 --chi 0.2 --steps 20 --snapshots 20,5 --format ndjson "
             "--initial right --out " + p.string(),
             dir.path / "log") == 0);
  std::ifstream pin(p);
  CHECK(nlqw::read_profile(pin, nlqw::Format::ndjson).size() == 11 + 41);

  const fs::path s = dir.path / "s.csv";
  CHECK(cli("sweep --steps 50 --theta-count 3 --chi-count 2 --chi-max 1 --workers 2 "
             "--out " + s.string(),
             dir.path / "log") == 0);
  std::ifstream sin(s);
  CHECK(nlqw::read_sweep(sin, nlqw::Format::csv).size() == 6);
  CHECK(fs::exists(dir.path / "s.meta.json"));

  // The sidecar is a config: rerunning from it reproduces the table.
  const fs::path again = dir.path / "again.csv";
  CHECK(cli("sweep --config " + (dir.path / "s.meta.json").string() + " --out " +
                 again.string(),
             dir.path / "log") == 0);
  CHECK(slurp(again) == slurp(s));
}

TEST_CASE("config file with flag overrides") {
  TempDir dir;
  const fs::path cfg = dir.path / "run.json";
  std::ofstream(cfg) << R"({"mode": "walk",
    "walk": {"theta": "pi/4", "chi": 0.3, "steps": 30},
    "output_path": ")" << (dir.path / "from_config.csv").string() << "\"}\n";
  CHECK(cli("walk --config " + cfg.string(), dir.path / "log") == 0);
  std::ifstream a(dir.path / "from_config.csv");
  CHECK(nlqw::read_walk(a, nlqw::Format::csv).size() == 30);

  CHECK(cli("walk --config " + cfg.string() + " --steps 12 --out " +
                 (dir.path / "override.csv").string(),
             dir.path / "log") == 0);
  std::ifstream b(dir.path / "override.csv");
  CHECK(nlqw::read_walk(b, nlqw::Format::csv).size() == 12);

  CHECK(cli("sweep --config " + cfg.string(), dir.path / "log") == 2);
}

TEST_CASE("repeated runs produce identical bytes") {
  TempDir dir;
  const std::string args = "walk --theta 1.2 --chi 1.1 --steps 300 --format ndjson --out ";
  CHECK(cli(args + (dir.path / "a").string(), dir.path / "log") == 0);
  CHECK(cli(args + (dir.path / "b").string(), dir.path / "log") == 0);
  CHECK(slurp(dir.path / "a") == slurp(dir.path / "b"));
  CHECK(!slurp(dir.path / "a").empty());
}

TEST_CASE("exit codes") {
  TempDir dir;
  const fs::path log = dir.path / "log";
  const std::string out = " --out " + (dir.path / "x.csv").string();
  CHECK(cli("--help", log) == 0);
  CHECK(cli("--version", log) == 0);
  CHECK(slurp(log).find("1.0.0") != std::string::npos);
  CHECK(cli("", log) == 2);
  CHECK(cli("dance", log) == 2);
  CHECK(cli("walk --bogus 1" + out, log) == 2);
  CHECK(cli("walk --theta 0.5", log) == 2);  // no --out
  CHECK(cli("walk --theta -1" + out, log) == 2);
  CHECK(slurp(log).find("theta") != std::string::npos);
  CHECK(cli("walk --chi abc" + out, log) == 2);
  CHECK(cli("walk --steps 0" + out, log) == 2);
  CHECK(cli("walk --format xml" + out, log) == 2);
  CHECK(cli("walk --initial left" + out, log) == 2);
  CHECK(cli("walk --config " + (dir.path / "missing.json").string() + out, log) == 2);
  CHECK(cli("profile --steps 10 --snapshots 3,x" + out, log) == 2);
  CHECK(cli("profile --steps 10 --snapshots 11" + out, log) == 2);
  CHECK(cli("sweep --theta-count 1" + out, log) == 2);
  CHECK(cli("sweep --sampling odd" + out, log) == 2);
  CHECK(cli("walk --steps 10 --out /nonexistent-dir/x.csv", log) == 1);
  CHECK(slurp(log).find("/nonexistent-dir/x.csv") != std::string::npos);
  CHECK_FALSE(fs::exists(dir.path / "x.csv"));
}
