#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "arlkit/experiment.hpp"
#include "doctest.h"

#ifdef ARLKIT_CLI_PATH

namespace fs = std::filesystem;

namespace {

int run(const std::string& args) {
  const std::string cmd = std::string(ARLKIT_CLI_PATH) + " " + args + " >/dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

struct TempDir {
  fs::path path;
  TempDir() {
    path = fs::temp_directory_path() /
           ("arlkit_cli_" + std::to_string(reinterpret_cast<std::uintptr_t>(this)));
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
  fs::path write(const std::string& name, const std::string& text) const {
    std::ofstream(path / name) << text;
    return path / name;
  }
};

}  // namespace

TEST_SUITE("cli") {
  TEST_CASE("sweep output is byte-identical across runs and thread counts") {
    TempDir dir;
    const auto cfg = dir.write("c.cfg", "sweep.num_points = 8\n");
    const auto a = dir.path / "a.csv", b = dir.path / "b.csv";
    REQUIRE(run("sweep --quiet --config " + cfg.string() + " --out " + a.string()) == 0);
    REQUIRE(run("sweep --quiet --threads 3 --config " + cfg.string() + " --out " +
                b.string()) == 0);
    const std::string ca = slurp(a);
    CHECK(ca == slurp(b));
    CHECK(ca.rfind(std::string(arlkit::kCsvHeader) + "\n", 0) == 0);
    // library and CLI agree
    CHECK(ca == arlkit::format_csv(arlkit::run_sweep(arlkit::load_config(cfg.string()))));
  }

  TEST_CASE("seed override changes the output") {
    TempDir dir;
    const auto cfg = dir.write("c.cfg", "sweep.num_points = 3\n");
    const auto a = dir.path / "a.csv", b = dir.path / "b.csv";
    REQUIRE(run("sweep --quiet --config " + cfg.string() + " --out " + a.string()) == 0);
    REQUIRE(run("sweep --quiet --seed 99 --config " + cfg.string() + " --out " +
                b.string()) == 0);
    CHECK(slurp(a) != slurp(b));
  }

  TEST_CASE("exit codes") {
    TempDir dir;
    CHECK(run("validate") == 0);
    CHECK(run("crb") == 0);
    CHECK(run("arl --sigma2 1e-12") == 0);
    CHECK(run("sweep --config " + dir.write("bad.cfg", "geometry.L = 2\n").string()) == 2);
    CHECK(run("sweep --config " + dir.write("bad2.cfg", "nope = 1\n").string()) == 2);
    CHECK(run("sweep --config " + (dir.path / "missing.cfg").string()) == 3);
    CHECK(run("sweep --out /nonexistent/dir/x.csv") == 3);
    CHECK(run("crb --sigma2 -1") == 2);
  }
}

#endif
