#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <nlohmann/json.hpp>
#include <sstream>
#include <string>

namespace {

namespace fs = std::filesystem;

struct Result {
  int exit_code;
  std::string out;
};

Result run_cli(const std::string& args) {
  static int counter = 0;
  fs::path out = fs::temp_directory_path() / ("gdft_cli_out_" + std::to_string(counter++));
  std::string cmd = std::string(GDFT_CLI_PATH) + " " + args + " > " + out.string() + " 2>&1";
  int rc = std::system(cmd.c_str());
  std::ifstream f(out);
  std::stringstream ss;
  ss << f.rdbuf();
  fs::remove(out);
  return {WEXITSTATUS(rc), ss.str()};
}

fs::path write_temp(const std::string& name, const std::string& content) {
  fs::path p = fs::temp_directory_path() / name;
  std::ofstream f(p);
  f << content;
  return p;
}

}  // namespace

TEST_CASE("dft of the identity delta over C4") {
  auto csv = write_temp("gdft_alpha.csv", "0,1,0\n");
  auto out = fs::temp_directory_path() / "gdft_out.json";
  auto r = run_cli("dft --group cyclic:4 --alpha " + csv.string() + " --out " + out.string());
  CHECK(r.exit_code == 0);
  std::ifstream f(out);
  nlohmann::json j;
  f >> j;
  CHECK(j["order"] == 4);
  REQUIRE(j["blocks"].size() == 4);
  for (const auto& b : j["blocks"]) {
    CHECK(b["dim"] == 1);
    CHECK(b["entries"][0][0].get<double>() == doctest::Approx(1.0));
    CHECK(b["entries"][0][1].get<double>() == doctest::Approx(0.0));
  }
  fs::remove(csv);
  fs::remove(out);
}

TEST_CASE("malformed group spec exits 2") {
  auto bad = write_temp("gdft_bad.json", "{ not valid json ");
  auto r = run_cli("dft --group " + bad.string() + " --alpha random:0");
  CHECK(r.exit_code == 2);
  fs::remove(bad);
}

TEST_CASE("group spec file with permutation generators") {
  auto spec = write_temp("gdft_group.json",
                         R"({"type":"permutation","degree":5,"generators":[[1,2,3,4,0],[1,0,2,3,4]]})");
  auto r = run_cli("dft --group " + spec.string() + " --alpha random:1 --out -");
  CHECK(r.exit_code == 0);
  auto j = nlohmann::json::parse(r.out);
  CHECK(j["order"] == 120);  // S5
  fs::remove(spec);
}

TEST_CASE("verify passes on assorted groups") {
  auto r = run_cli("verify --group symmetric:3 --seeds 2");
  CHECK(r.exit_code == 0);
  CHECK(r.out.find("residual") != std::string::npos);

  auto r2 = run_cli("verify --group dihedral:6 --seeds 2 --strategies naive,auto,prime");
  CHECK(r2.exit_code == 0);
}

TEST_CASE("forcing a triple where none exists exits 3") {
  auto r = run_cli("dft --group cyclic:6 --alpha random:0 --strategy triple");
  CHECK(r.exit_code == 3);
}

TEST_CASE("bench writes the documented CSV schema") {
  auto out = fs::temp_directory_path() / "gdft_bench.csv";
  auto r = run_cli("bench --catalog smoke --out " + out.string());
  CHECK(r.exit_code == 0);
  std::ifstream f(out);
  std::string header;
  std::getline(f, header);
  CHECK(header == "group,label,order,strategy,cmul,cadd,ms,residual,error");
  int rows = 0;
  std::string line;
  while (std::getline(f, line))
    if (!line.empty()) ++rows;
  CHECK(rows == 6);  // three groups, naive + auto each
  fs::remove(out);
}

TEST_CASE("empty bench emits just the header") {
  auto r = run_cli("bench --out -");
  CHECK(r.exit_code == 0);
  CHECK(r.out == "group,label,order,strategy,cmul,cadd,ms,residual,error\n");
}

TEST_CASE("plan dump and forced plan round trip") {
  auto plan_path = fs::temp_directory_path() / "gdft_plan.json";
  auto r = run_cli("dft --group cyclic:16 --alpha random:2 --base-order 4 --dump-plan " +
                   plan_path.string() + " --out -");
  CHECK(r.exit_code == 0);
  auto r2 = run_cli("dft --group cyclic:16 --alpha random:2 --plan " + plan_path.string() +
                    " --out -");
  CHECK(r2.exit_code == 0);
  // identical outputs under the dumped plan
  auto j1 = nlohmann::json::parse(r.out);
  auto j2 = nlohmann::json::parse(r2.out);
  CHECK(j1["blocks"] == j2["blocks"]);
  fs::remove(plan_path);
}

TEST_CASE("trace output lists pipeline stages") {
  auto trace_path = fs::temp_directory_path() / "gdft_trace.json";
  auto r = run_cli("dft --group alternating:5 --alpha random:0 --trace " + trace_path.string() +
                   " --out " + (fs::temp_directory_path() / "gdft_a5.json").string());
  CHECK(r.exit_code == 0);
  std::ifstream f(trace_path);
  nlohmann::json j;
  f >> j;
  CHECK(j["events"].size() >= 1);
  CHECK(j["events"][0].contains("stage"));
  CHECK(j["events"][0].contains("cmul"));
  fs::remove(trace_path);
  fs::remove(fs::temp_directory_path() / "gdft_a5.json");
}
