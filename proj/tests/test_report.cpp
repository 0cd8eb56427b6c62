#include <catch_amalgamated.hpp>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "bcg/commands.hpp"
#include "bcg/error.hpp"
#include "bcg/report.hpp"

using namespace bcg;

namespace {

std::string read_file(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream s;
  s << in.rdbuf();
  return s.str();
}

int run_cli(const std::string& args) {
  const std::string cmd = std::string(BCGLAB_PATH) + " " + args + " >/dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

}  // namespace

TEST_CASE("format_double keeps 17 significant digits", "[report]") {
  CHECK(format_double(0.1) == "0.10000000000000001");
  CHECK(format_double(1.0) == "1");
  CHECK(format_double(1.0 / 3.0) == "0.33333333333333331");
  CHECK(format_double(-2.5e-300) == "-2.5e-300");
  CHECK(format_double(std::nan("")) == "nan");
  CHECK(format_double(INFINITY) == "inf");
  CHECK(format_double(-INFINITY) == "-inf");
  for (double v : {M_PI, 1.0 / 3.0, 6.02214076e23, -1e-17}) {
    CHECK(std::stod(format_double(v)) == v);
  }
}

TEST_CASE("report JSON round trip", "[report]") {
  RunReport r;
  r.command = "demo";
  r.parameters = {{"grid", 16}, {"seed", 7}};
  r.payload = {{"values", {1.5, 2.5}}};
  r.add_check("ok", true, 1e-12, 1e-10);
  r.add_check("bad", false, std::nan(""), 1e-3, "detail text");
  CHECK_FALSE(r.all_passed());

  const auto j = r.to_json();
  CHECK(j.at("checks")[1].at("value").is_null());
  CHECK(j.at("version") == kArtifactVersion);
  const RunReport back = RunReport::from_json(nlohmann::json::parse(j.dump()));
  CHECK(back == r);
  CHECK(std::isnan(back.checks[1].value));

  try {
    RunReport::from_json(nlohmann::json{{"command", "x"}});
    FAIL("malformed report accepted");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::io_error);
  }
}

TEST_CASE("CSV output uses LF line endings", "[report]") {
  CsvTable t;
  t.header = {"a", "b"};
  t.add_row({format_double(0.1), "x"});
  t.add_row({"1", "2"});
  CHECK(to_csv(t) == "a,b\n0.10000000000000001,x\n1,2\n");
  std::ostringstream os;
  write_csv(t, os);
  CHECK(os.str() == to_csv(t));

  const auto path = std::filesystem::temp_directory_path() / "bcg_report_test.csv";
  write_text_file(path.string(), to_csv(t));
  CHECK(read_file(path) == to_csv(t));
}

TEST_CASE("write_text_file reports the path on failure", "[report]") {
  try {
    write_text_file("/nonexistent_dir/out.csv", "x");
    FAIL("write succeeded");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::io_error);
    CHECK(std::string(e.what()).find("/nonexistent_dir/out.csv") != std::string::npos);
  }
}

TEST_CASE("jfunc command table", "[report][commands]") {
  JfuncOptions opt;
  opt.points = 3;
  const CommandOutput out = cmd_jfunc_h2xh2(opt);
  CHECK(out.report.all_passed());
  REQUIRE(out.tables.size() >= 1);
  const CsvTable& t = out.tables[0].second;
  CHECK(t.header.size() == 5);
  CHECK(t.rows.size() == 9);
  for (const auto& row : t.rows) {
    if (std::stod(row[0]) == 0.0) CHECK(std::abs(std::stod(row[2]) - 1.0) <= 1e-8);
  }
  CHECK(out.report.parameters.at("points") == 3);
}

TEST_CASE("sl3 command marks degenerate rows", "[report][commands]") {
  Sl3Options opt;
  opt.deltas = {0.0, 1e-2, 5e-3};
  const CommandOutput out = cmd_sl3(opt);
  const CsvTable& t = out.tables[0].second;
  REQUIRE(t.rows.size() == 3);
  CHECK(t.rows[0][3] == "degenerate");
  CHECK(t.rows[1][3] != "degenerate");
}

TEST_CASE("bcglab exit codes", "[report][cli]") {
  CHECK(run_cli("--version-does-not-exist") == 2);
  CHECK(run_cli("") == 2);
  CHECK(run_cli("sl4 --atoms /nonexistent.csv") == 2);
  CHECK(run_cli("sl4 --weights 5") == 2);
  CHECK(run_cli("jfunc-h2xh2 --points 3 --grid 2") == 2);
  CHECK(run_cli("bcg --s 1.0") == 2);
  CHECK(run_cli("jfunc-h2xh2 --points 3") == 0);
  CHECK(run_cli("sl3") == 0);
  CHECK(run_cli("jfunc-h2xh2 --points 3 --out /nonexistent_dir/x.json") == 2);
  CHECK(run_cli("selftest --debug-printed-B --mc-samples 2000") == 1);
}

TEST_CASE("bcglab CSV output writes sidecar tables", "[report][cli]") {
  const auto dir = std::filesystem::temp_directory_path() / "bcg_cli_test";
  std::filesystem::create_directories(dir);
  const auto out = dir / "sl4.csv";
  REQUIRE(run_cli("sl4 --weights 1 --mc-samples 2000 --grid 5 --format csv --out " + out.string()) == 0);
  const std::string main = read_file(out);
  CHECK(main.rfind("weights,mass,residual", 0) == 0);
  CHECK(main.find('\r') == std::string::npos);
  CHECK(std::filesystem::exists(dir / "sl4.fcurve.csv"));
  CHECK(std::filesystem::exists(dir / "sl4.g_plane1.csv"));
}
