#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <sys/wait.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <limits>
#include <sstream>

#include "nlh/config.hpp"
#include "nlh/report_io.hpp"

using namespace nlh;
using nlohmann::json;
namespace fs = std::filesystem;

namespace {

const std::string kCli = NLH_CLI_PATH;
const std::string kConfigs = NLH_CONFIG_DIR;

json read_json(const std::string& path) {
  std::ifstream in(path);
  return json::parse(in);
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

fs::path fresh_dir(const std::string& name) {
  const fs::path d = fs::temp_directory_path() / ("nlh_test_cli_" + name);
  fs::remove_all(d);
  return d;
}

int run_cli(const std::string& args) {
  const int st = std::system((kCli + " " + args + " > /dev/null 2>&1").c_str());
  return WIFEXITED(st) ? WEXITSTATUS(st) : -1;
}

}  // namespace

TEST_CASE("unknown keys are rejected by name") {
  json j = read_json(kConfigs + "/run_smoke.json");
  j["scenario"]["schedule"]["dtt"] = 0.1;
  try {
    parse_config(j);
    FAIL("expected a config error");
  } catch (const ConfigError& e) {
    CHECK(std::string(e.what()).find("scenario.schedule.dtt") != std::string::npos);
  }
  json k = read_json(kConfigs + "/run_smoke.json");
  k["kernel"]["alpha"] = "one";
  CHECK_THROWS_AS(parse_config(k), ConfigError);
  json m = read_json(kConfigs + "/run_smoke.json");
  m.erase("schema_version");
  CHECK_THROWS_AS(parse_config(m), ConfigError);
}

TEST_CASE("resolved config round-trips") {
  for (const char* name : {"run_smoke", "run_heat", "verify", "sweep", "counterexample", "axes"}) {
    CAPTURE(name);
    const ExperimentConfig c = parse_config(read_json(kConfigs + "/" + name + ".json"));
    const json once = to_json(c);
    CHECK(to_json(parse_config(once)) == once);
  }
}

TEST_CASE("report formatting") {
  CHECK(format_double(0.5) == "0.5");
  CHECK(format_double(std::numeric_limits<double>::infinity()) == "inf");
  CHECK(format_double(-std::numeric_limits<double>::infinity()) == "-inf");
  CHECK(format_double(std::nan("")) == "nan");
  CHECK(std::stod(format_double(0.1)) == 0.1);
  CsvTable t({"a", "b"});
  t.add_row({"1", "2"});
  CHECK(t.str() == "a,b\n1,2\n");
  CHECK_THROWS(t.add_row({"1"}));
  CHECK(json_number(std::numeric_limits<double>::infinity()).is_string());
  CHECK(json_number(2.0).is_number());
}

TEST_CASE("run writes a constant solution") {
  const fs::path out = fresh_dir("smoke");
  REQUIRE(run_cli("run --config " + kConfigs + "/run_smoke.json --out " + out.string()) == 0);
  CHECK(fs::exists(out / "resolved_config.json"));
  CHECK(fs::exists(out / "diagnostics.json"));
  std::ifstream in(out / "solution.csv");
  std::string line;
  std::getline(in, line);
  CHECK(line == "t,x1,u");
  int rows = 0;
  while (std::getline(in, line)) {
    const double u = std::stod(line.substr(line.rfind(',') + 1));
    CHECK(std::abs(u - 1.0) < 1e-12);
    ++rows;
  }
  CHECK(rows > 0);
  const json resolved = read_json((out / "resolved_config.json").string());
  CHECK(resolved["kernel"]["alpha"] == 1.0);
  CHECK(to_json(parse_config(resolved)) == resolved);
}

TEST_CASE("seed override lands in the resolved config") {
  const fs::path out = fresh_dir("seed");
  REQUIRE(run_cli("run --config " + kConfigs + "/run_smoke.json --seed 42 --out " + out.string()) == 0);
  CHECK(read_json((out / "resolved_config.json").string())["seed"] == 42);
}

TEST_CASE("exit codes") {
  CHECK(run_cli("run --config " + kConfigs + "/run_cfl_violation.json --out " + fresh_dir("cfl").string()) == 3);
  const fs::path bad = fresh_dir("bad");
  fs::create_directories(bad);
  json j = read_json(kConfigs + "/run_smoke.json");
  j["grid"]["bogus"] = 1;
  std::ofstream(bad / "bad.json") << j.dump();
  CHECK(run_cli("run --config " + (bad / "bad.json").string() + " --out " + (bad / "out").string()) == 2);
  CHECK(run_cli("run --config " + (bad / "missing.json").string()) == 2);
  std::ofstream(bad / "broken.json") << "{ not json";
  CHECK(run_cli("run --config " + (bad / "broken.json").string()) == 2);
  CHECK(run_cli("frobnicate") == 2);
}

TEST_CASE("verify writes one row per report") {
  const fs::path out = fresh_dir("verify");
  REQUIRE(run_cli("verify --config " + kConfigs + "/verify.json --out " + out.string()) == 0);
  const std::string csv = slurp(out / "reports.csv");
  CHECK(csv.rfind("inequality,t0,x0,R,left,right,constant,flag", 0) == 0);
  const json reports = read_json((out / "reports.json").string());
  REQUIRE(reports.contains("reports"));
  // Hoelder emits one report per gamma.
  CHECK(reports["reports"].size() == 7);
}
