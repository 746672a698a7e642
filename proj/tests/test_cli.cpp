// End-to-end checks of the pikm binary: flag parsing, exit codes, file
// formats and determinism. The binary path comes from the build system.

#include <doctest.h>

#include <array>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>

#include "pikm/json_io.hpp"

using namespace pikm;

namespace {

struct RunResult {
  int exit_code = -1;
  std::string output;  // stdout only
};

RunResult run(const std::string& args) {
  std::string cmd = std::string(PIKM_CLI_PATH) + " " + args + " 2>/dev/null";
  std::array<char, 4096> buf{};
  RunResult result;
  FILE* pipe = popen(cmd.c_str(), "r");
  REQUIRE(pipe != nullptr);
  while (std::size_t n = std::fread(buf.data(), 1, buf.size(), pipe))
    result.output.append(buf.data(), n);
  int status = pclose(pipe);
  result.exit_code = WEXITSTATUS(status);
  return result;
}

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  REQUIRE(in.good());
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

TEST_CASE("optimize emits the expected solution as JSON") {
  auto result = run("optimize --eta 0.01 --json");
  REQUIRE(result.exit_code == 0);
  auto j = nlohmann::json::parse(result.output);
  CHECK(j["variant"] == "PI0M");
  CHECK(j["M"] == 199);
  CHECK(j["config"]["d_s_ns"] == 74336000);
  CHECK(j["d_m_ns"] == 14720000000);
  CHECK(j["one_way"]["advertiser"]["t_s_ns"].is_null());
  CHECK(j["one_way"]["scanner"]["t_a_ns"].is_null());
  // the emitted config survives a schema round-trip bit-identically
  auto cfg = j["config"].get<PiConfig>();
  nlohmann::json back = cfg;
  CHECK(back == j["config"]);
}

TEST_CASE("optimize reports infeasible duty-cycles with exit 2") {
  auto result = run("optimize --eta 0.5");
  CHECK(result.exit_code == 2);
}

TEST_CASE("optimize applies skew guards on request") {
  auto result = run("optimize --eta 0.01 --skew-guard 20 --json");
  REQUIRE(result.exit_code == 0);
  auto j = nlohmann::json::parse(result.output);
  CHECK(j["eps_ns"] == 610360);
  CHECK(j["eps_ta_ns"] == 610360);
}

TEST_CASE("usage errors exit with 1") {
  CHECK(run("optimize").exit_code == 1);
  CHECK(run("optimize --eta 0.01 --variant bogus").exit_code == 1);
  CHECK(run("optimize --eta 0.01 --eps 10").exit_code == 1);  // unit missing
  CHECK(run("nonsense").exit_code != 0);
}

TEST_CASE("compare produces one row per protocol and scales with d_sl") {
  auto result = run("compare --eta-min 0.05 --eta-max 0.05 --step 0.01");
  REQUIRE(result.exit_code == 0);
  std::istringstream lines(result.output);
  std::string line;
  std::getline(lines, line);
  CHECK(line == "eta,protocol,d_m_slotted_ns,d_m_pikm_ns,gain");
  int rows = 0, summaries = 0;
  long long disco10 = 0;
  while (std::getline(lines, line)) {
    if (line.rfind("# summary", 0) == 0) {
      ++summaries;
      continue;
    }
    ++rows;
    if (line.find(",disco,") != std::string::npos)
      disco10 = std::stoll(line.substr(line.find(",disco,") + 7));
  }
  CHECK(rows == 6);
  CHECK(summaries == 6);

  auto doubled = run(
      "compare --eta-min 0.05 --eta-max 0.05 --step 0.01 --dsl 20ms");
  REQUIRE(doubled.exit_code == 0);
  std::istringstream lines2(doubled.output);
  long long disco20 = 0;
  while (std::getline(lines2, line)) {
    if (line.rfind("#", 0) == 0) continue;
    if (line.find(",disco,") != std::string::npos)
      disco20 = std::stoll(line.substr(line.find(",disco,") + 7));
  }
  CHECK(disco20 == 2 * disco10);
}

TEST_CASE("infeasible grid points abort unless compare runs lenient") {
  // 0.24 and 0.25 sit above every variant's ceiling
  auto strict = run("compare --eta-min 0.23 --eta-max 0.25 --step 0.01");
  CHECK(strict.exit_code == 2);
  auto lenient =
      run("compare --eta-min 0.23 --eta-max 0.25 --step 0.01 --lenient");
  REQUIRE(lenient.exit_code == 0);
  std::istringstream lines(lenient.output);
  std::string line;
  int rows = 0;
  while (std::getline(lines, line))
    if (line.rfind("0.23", 0) == 0) ++rows;
  CHECK(rows == 6);  // the feasible point survives, one row per protocol
}

TEST_CASE("simulate is deterministic for a fixed seed") {
  std::string out1 = "/tmp/pikm_sim1.jsonl";
  std::string out2 = "/tmp/pikm_sim2.jsonl";
  std::string flags =
      "simulate --eta 0.05 --trials 200 --seed 7 --collisions --out ";
  REQUIRE(run(flags + out1).exit_code == 0);
  REQUIRE(run(flags + out2).exit_code == 0);
  auto a = slurp(out1);
  CHECK(a == slurp(out2));
  // every line is a self-contained JSON record
  std::istringstream lines(a);
  std::string line;
  int n = 0;
  while (std::getline(lines, line)) {
    auto j = nlohmann::json::parse(line);
    CHECK(j.contains("latency_ab_ns"));
    CHECK(j.contains("collisions"));
    ++n;
  }
  CHECK(n == 200);
  std::remove(out1.c_str());
  std::remove(out2.c_str());
}

TEST_CASE("cdf emits a normalized curve") {
  std::string out = "/tmp/pikm_cdf.csv";
  auto result =
      run("cdf --eta 0.05 --variant best --step 1us --out " + out);
  REQUIRE(result.exit_code == 0);
  std::istringstream lines(slurp(out));
  std::string line;
  std::getline(lines, line);
  CHECK(line == "latency_ns,cum_prob");
  double last = 0.0;
  while (std::getline(lines, line)) {
    if (line.rfind("#", 0) == 0) continue;
    auto comma = line.find(',');
    double p = std::stod(line.substr(comma + 1));
    CHECK(p >= last - 1e-12);
    last = p;
  }
  CHECK(last == doctest::Approx(1.0));
  std::remove(out.c_str());
}

TEST_CASE("granularity lists a dense PI column and a finite ladder") {
  auto result = run("granularity --min 0.01 --max 0.05 --step 0.005");
  REQUIRE(result.exit_code == 0);
  std::istringstream lines(result.output);
  std::string line;
  std::getline(lines, line);
  CHECK(line == "kind,target_eta,achieved_eta");
  int pi_rows = 0, ladder_rows = 0;
  while (std::getline(lines, line)) {
    if (line.rfind("pi,", 0) == 0) ++pi_rows;
    if (line.rfind("g-nihao,", 0) == 0) ++ladder_rows;
  }
  CHECK(pi_rows == 9);
  CHECK(ladder_rows >= 1);
  CHECK(ladder_rows <= pi_rows);
}

TEST_CASE("radio file overrides the default profile") {
  std::string path = "/tmp/pikm_radio.json";
  {
    std::ofstream out(path);
    out << R"({"d_a_ns": 184000, "d_s_min_ns": 10000000})";
  }
  auto result =
      run("--radio-file " + path + " optimize --eta 0.01 --json");
  REQUIRE(result.exit_code == 0);
  auto j = nlohmann::json::parse(result.output);
  CHECK(j["config"]["d_a_ns"] == 184000);
  std::remove(path.c_str());

  CHECK(run("--radio-file /nonexistent.json optimize --eta 0.01")
            .exit_code == 3);
}
