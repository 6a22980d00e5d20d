#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "doctest.h"

namespace {

namespace fs = std::filesystem;

struct RunResult {
  int exit_code = -1;
  std::string out, err;
};

fs::path work_dir() {
  fs::path dir = fs::temp_directory_path() / "effham-cli-tests";
  fs::create_directories(dir);
  return dir;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

RunResult run_cli(const std::string& args) {
  static int counter = 0;
  fs::path out = work_dir() / ("stdout." + std::to_string(counter));
  fs::path err = work_dir() / ("stderr." + std::to_string(counter));
  ++counter;
  std::string cmd = std::string("\"") + EFFHAM_CLI_PATH + "\" " + args + " > " +
                    out.string() + " 2> " + err.string();
  int status = std::system(cmd.c_str());
  RunResult r;
  r.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  r.out = slurp(out);
  r.err = slurp(err);
  return r;
}

fs::path write_config(const std::string& name, const std::string& body) {
  fs::path p = work_dir() / name;
  std::ofstream out(p, std::ios::binary | std::ios::trunc);
  out << body;
  return p;
}

const char* kScanConfig = R"({
  "model": {"N": 3, "delta": 10.0, "J": 1.0},
  "trials": {"initials": ["x_1", "x_2", "x_3"], "time": 1.0},
  "scan": {"lambda_range": [0.9, 1.1], "kappa_range": [0.03, 0.07], "steps": 3}
})";

}  // namespace

TEST_CASE("help and argument errors") {
  CHECK(run_cli("--help").exit_code == 0);
  RunResult help = run_cli("--help");
  CHECK(help.out.find("scan") != std::string::npos);
  CHECK(help.out.find("grover") != std::string::npos);
  CHECK(help.out.find("variational") != std::string::npos);
  CHECK(help.out.find("oracle") != std::string::npos);

  CHECK(run_cli("").exit_code == 1);                 // a subcommand is required
  CHECK(run_cli("scan").exit_code == 1);             // --config is required
  CHECK(run_cli("frobnicate").exit_code == 1);       // unknown subcommand
  CHECK(run_cli("scan --config a.json --bogus").exit_code == 1);
}

TEST_CASE("configuration errors exit with status 1") {
  RunResult missing = run_cli("scan --config " + (work_dir() / "absent.json").string());
  CHECK(missing.exit_code == 1);
  CHECK(missing.err.find("config error") != std::string::npos);

  fs::path bad_json = write_config("bad-syntax.json", "{ not json");
  CHECK(run_cli("scan --config " + bad_json.string()).exit_code == 1);

  fs::path bad_key = write_config("bad-key.json", R"({
    "model": {"N": 3, "delta": 10.0, "J": 1.0, "oops": 1},
    "trials": {"initials": ["x_1"], "time": 1.0}
  })");
  RunResult r = run_cli("scan --config " + bad_key.string());
  CHECK(r.exit_code == 1);
  CHECK(r.err.find("$.model") != std::string::npos);

  // valid config without the block the subcommand needs
  fs::path no_scan = write_config("no-scan.json", R"({
    "model": {"N": 3, "delta": 10.0, "J": 1.0},
    "trials": {"initials": ["x_1"], "time": 1.0}
  })");
  RunResult blockless = run_cli("scan --config " + no_scan.string());
  CHECK(blockless.exit_code == 1);
  CHECK(blockless.err.find("$.scan") != std::string::npos);
}

TEST_CASE("scan runs end to end and is thread-count independent") {
  fs::path config = write_config("scan.json", kScanConfig);
  fs::path out1 = work_dir() / "scan-out1";
  fs::path out2 = work_dir() / "scan-out2";
  fs::remove_all(out1);
  fs::remove_all(out2);

  RunResult r1 = run_cli("scan --config " + config.string() + " --out " + out1.string());
  CHECK(r1.exit_code == 0);
  CHECK(r1.out.find("best f_ave") != std::string::npos);
  CHECK(fs::exists(out1 / "scan.csv"));
  CHECK(fs::exists(out1 / "manifest.json"));

  RunResult r2 = run_cli("scan --config " + config.string() + " --out " + out2.string() +
                         " --threads 3");
  CHECK(r2.exit_code == 0);
  CHECK(slurp(out1 / "scan.csv") == slurp(out2 / "scan.csv"));

  RunResult method = run_cli("scan --config " + config.string() + " --out " + out1.string() +
                             " --method trotter");
  CHECK(method.exit_code == 0);
  CHECK(slurp(out1 / "scan.csv").find(",trotter\n") != std::string::npos);

  RunResult bad_method = run_cli("scan --config " + config.string() + " --out " +
                                 out1.string() + " --method bogus");
  CHECK(bad_method.exit_code == 1);
}

TEST_CASE("weak transverse field prints a warning") {
  fs::path config = write_config("weak.json", R"({
    "model": {"N": 3, "delta": 1.0, "J": 1.0},
    "trials": {"initials": ["x_1"], "time": 0.5},
    "scan": {"lambda_range": [0.9, 1.1], "kappa_range": [0.03, 0.07], "steps": 2}
  })");
  fs::path out = work_dir() / "weak-out";
  RunResult r = run_cli("scan --config " + config.string() + " --out " + out.string());
  CHECK(r.exit_code == 0);
  CHECK(r.err.find("warning:") != std::string::npos);
}

TEST_CASE("numeric failures exit with status 2") {
  // dt at the double range edge overflows the first parameter update
  fs::path config = write_config("overflow.json", R"({
    "model": {"N": 3, "delta": 10.0, "J": 1.0},
    "trials": {"initials": ["x_1", "x_2", "x_3"], "time": 1.0},
    "variational": {"lambda": "exact", "kappa": 1e160, "t_final": 1e308, "dt": 1e308}
  })");
  fs::path out = work_dir() / "overflow-out";
  RunResult r = run_cli("variational --config " + config.string() + " --out " + out.string());
  CHECK(r.exit_code == 2);
  CHECK(r.err.find("numeric error") != std::string::npos);
}
