// Copyright 2026 The CountNoise Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <sys/wait.h>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

namespace {

const std::filesystem::path kWorkDir = "cli_test_tmp";

struct RunResult {
  int exit_code = -1;
  std::string output;
};

RunResult run_cli(const std::string& args, const std::string& tag) {
  std::filesystem::create_directories(kWorkDir);
  const std::filesystem::path out = kWorkDir / (tag + ".out");
  const std::string command = std::string(COUNTNOISE_CLI_PATH) + " " + args +
                              " > " + out.string() + " 2> " +
                              (kWorkDir / (tag + ".err")).string();
  const int status = std::system(command.c_str());
  RunResult result;
  result.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  std::ifstream file(out);
  std::stringstream buffer;
  buffer << file.rdbuf();
  result.output = buffer.str();
  return result;
}

std::vector<std::string> lines_of(const std::string& text) {
  std::vector<std::string> lines;
  std::stringstream stream(text);
  std::string line;
  while (std::getline(stream, line)) lines.push_back(line);
  return lines;
}

double field_value(const std::string& csv, const std::string& field) {
  for (const std::string& line : lines_of(csv)) {
    if (line.rfind(field + ",", 0) == 0) {
      return std::stod(line.substr(field.size() + 1));
    }
  }
  FAIL("field not found: " << field);
  return 0.0;
}

}  // namespace

TEST_CASE("solve prints the worked design point") {
  const RunResult result = run_cli("solve --eta 0.8 --D 6 --eps 2.18", "solve");
  REQUIRE(result.exit_code == 0);
  CHECK(lines_of(result.output).front().rfind("# countnoise solve", 0) == 0);
  CHECK(field_value(result.output, "regime") == doctest::Approx(3));
  CHECK(field_value(result.output, "delta_star") ==
        doctest::Approx(0.0049).epsilon(0.05));
  CHECK(field_value(result.output, "alpha_1") ==
        doctest::Approx(0.89874).epsilon(1e-3));
}

TEST_CASE("solve handles the degenerate and hand-solved points") {
  const RunResult d1 = run_cli("solve --eta 0.5 --D 1 --eps 0", "solve_d1");
  REQUIRE(d1.exit_code == 0);
  CHECK(field_value(d1.output, "delta_star") == doctest::Approx(0.25));

  const RunResult d2 = run_cli("solve --eta 0.5 --D 2 --eps 0.6931471805599453",
                               "solve_d2");
  REQUIRE(d2.exit_code == 0);
  CHECK(field_value(d2.output, "delta_star") == doctest::Approx(0.1));
  CHECK(field_value(d2.output, "alpha_1") == doctest::Approx(0.8));
  CHECK(field_value(d2.output, "alpha_2") == doctest::Approx(0.2));
}

TEST_CASE("solve as json carries the documented schema") {
  const RunResult result =
      run_cli("solve --eta 0.8 --D 6 --eps 2.18 --format json", "solve_json");
  REQUIRE(result.exit_code == 0);
  const nlohmann::json j = nlohmann::json::parse(result.output);
  CHECK(j["eta"].get<double>() == doctest::Approx(0.8));
  CHECK(j["D"].get<int>() == 6);
  CHECK(j["regime"].get<int>() == 3);
  CHECK(j["alphas"].size() == 6);
  CHECK(j.contains("delta_star"));
  CHECK(j.contains("dp_delta"));
  CHECK(j.contains("variance"));
}

TEST_CASE("invalid configuration exits with a usage error") {
  CHECK(run_cli("solve --eta 1.5 --D 6 --eps 1", "bad_eta").exit_code == 1);
  CHECK(run_cli("solve --eta 0.5 --D 0 --eps 1", "bad_d").exit_code == 1);
  CHECK(run_cli("nonsense", "bad_cmd").exit_code == 1);
}

TEST_CASE("single-point grids are rejected") {
  const RunResult result = run_cli(
      "sweep-eps --eta 0.5 --D 8 --grid-start 1 --grid-stop 2 --grid-points 1",
      "grid1");
  CHECK(result.exit_code == 1);
}

TEST_CASE("sweep-eps stays under the published ceiling for D = 8") {
  const RunResult result = run_cli(
      "sweep-eps --eta 0.5 --D 8 --grid-start 1.1 --grid-stop 3 "
      "--grid-points 20",
      "sweep_eps");
  REQUIRE(result.exit_code == 0);
  const std::vector<std::string> lines = lines_of(result.output);
  CHECK(lines[0].rfind("# countnoise sweep-eps", 0) == 0);
  CHECK(lines[1] == "epsilon,D,dp_delta");
  double previous = 1.0;
  for (size_t i = 2; i < lines.size(); ++i) {
    std::stringstream row(lines[i]);
    std::string eps_str, d_str, delta_str;
    std::getline(row, eps_str, ',');
    std::getline(row, d_str, ',');
    std::getline(row, delta_str, ',');
    const double delta = std::stod(delta_str);
    CHECK(delta <= 0.001);
    CHECK(delta <= previous + 1e-15);  // nonincreasing along the grid
    previous = delta;
  }
}

TEST_CASE("sweep-eta hits the published anchors and clamps near one") {
  const RunResult result = run_cli(
      "sweep-eta --eps 2.2 --D 8 --grid-start 0.8 --grid-stop 0.95 "
      "--grid-points 4",
      "sweep_eta");
  REQUIRE(result.exit_code == 0);
  const std::vector<std::string> lines = lines_of(result.output);
  CHECK(lines[1] == "eta,D,dp_delta");
  // First row is eta = 0.8: the published 5e-7-scale point.
  {
    std::stringstream row(lines[2]);
    std::string eta_str, d_str, delta_str;
    std::getline(row, eta_str, ',');
    std::getline(row, d_str, ',');
    std::getline(row, delta_str, ',');
    CHECK(std::stod(eta_str) == doctest::Approx(0.8));
    const double delta = std::stod(delta_str);
    CHECK(delta <= 1e-6);
    CHECK(delta >= 2.5e-7);
  }
  // Last row is eta = 0.95: vacuous, clamped to 1.
  {
    std::stringstream row(lines.back());
    std::string eta_str, d_str, delta_str;
    std::getline(row, eta_str, ',');
    std::getline(row, d_str, ',');
    std::getline(row, delta_str, ',');
    CHECK(std::stod(delta_str) == doctest::Approx(1.0));
  }
}

TEST_CASE("compare-gaussian uses the exact documented header") {
  const RunResult result = run_cli(
      "compare-gaussian --eta 0.5 --D 6 --grid-start 1.2 --grid-stop 3 "
      "--grid-points 10",
      "compare");
  REQUIRE(result.exit_code == 0);
  const std::vector<std::string> lines = lines_of(result.output);
  CHECK(lines[1] == "epsilon,our_dp_delta,gaussian_delta,sigma2,regime");
  for (size_t i = 2; i < lines.size(); ++i) {
    std::stringstream row(lines[i]);
    std::string eps_str, ours_str, gauss_str;
    std::getline(row, eps_str, ',');
    std::getline(row, ours_str, ',');
    std::getline(row, gauss_str, ',');
    CHECK(std::stod(ours_str) < std::stod(gauss_str));
  }
}

TEST_CASE("identical runs are byte-identical") {
  const RunResult a = run_cli(
      "sweep-eps --eta 0.5 --D 4 --D 8 --grid-start 0.5 --grid-stop 2.5 "
      "--grid-points 13 --seed 7",
      "det_a");
  const RunResult b = run_cli(
      "sweep-eps --eta 0.5 --D 4 --D 8 --grid-start 0.5 --grid-stop 2.5 "
      "--grid-points 13 --seed 7",
      "det_b");
  REQUIRE(a.exit_code == 0);
  REQUIRE(b.exit_code == 0);
  CHECK(a.output == b.output);
  CHECK(a.output.size() > 0);

  const RunResult s1 = run_cli(
      "sample --eta 0.5 --D 2 --eps 0.7 --trials 50000 --seed 3", "det_s1");
  const RunResult s2 = run_cli(
      "sample --eta 0.5 --D 2 --eps 0.7 --trials 50000 --seed 3", "det_s2");
  REQUIRE(s1.exit_code == 0);
  CHECK(s1.output == s2.output);
}

TEST_CASE("sample emits a histogram and a consistent json report") {
  const RunResult csv = run_cli(
      "sample --eta 0.5 --D 2 --eps 0.6931471805599453 --trials 100000 "
      "--seed 11",
      "sample_csv");
  REQUIRE(csv.exit_code == 0);
  const std::vector<std::string> lines = lines_of(csv.output);
  CHECK(lines[1] == "offset,count");
  long long total = 0;
  for (size_t i = 2; i < lines.size(); ++i) {
    std::stringstream row(lines[i]);
    std::string offset_str, count_str;
    std::getline(row, offset_str, ',');
    std::getline(row, count_str, ',');
    total += std::stoll(count_str);
  }
  CHECK(total == 100000);

  const RunResult json_run = run_cli(
      "sample --eta 0.5 --D 2 --eps 0.6931471805599453 --trials 100000 "
      "--seed 11 --format json",
      "sample_json");
  REQUIRE(json_run.exit_code == 0);
  const nlohmann::json j = nlohmann::json::parse(json_run.output);
  CHECK(j["trials"].get<long long>() == 100000);
  CHECK(j["rng"].get<std::string>() == "splitmix64");
  CHECK(j["tv_distance"].get<double>() < 0.02);
  CHECK(std::abs(j["empirical_correct_rate"].get<double>() - 0.5) < 0.01);
}

TEST_CASE("verify passes and the negative control fails") {
  const RunResult ok = run_cli("verify --configs 40 --seed 5", "verify_ok");
  CHECK(ok.exit_code == 0);
  CHECK(ok.output.find("VERIFY PASS") != std::string::npos);

  const RunResult bad =
      run_cli("verify --configs 40 --seed 5 --self-test-corrupt", "verify_bad");
  CHECK(bad.exit_code == 2);
  CHECK(bad.output.find("VERIFY FAIL") != std::string::npos);
}

TEST_CASE("figure-data writes the four bundles") {
  const std::filesystem::path dir = kWorkDir / "figures";
  std::filesystem::remove_all(dir);
  const RunResult result =
      run_cli("figure-data --out " + dir.string(), "figdata");
  REQUIRE(result.exit_code == 0);
  for (const char* name : {"fig1.csv", "fig2.csv", "fig3.csv", "fig4.csv"}) {
    CHECK(std::filesystem::exists(dir / name));
  }
  std::ifstream fig1(dir / "fig1.csv");
  std::string first_line;
  std::getline(fig1, first_line);
  CHECK(first_line.rfind("# countnoise figure-data", 0) == 0);

  // fig1 carries the two pmfs; z = 1 row holds 0.08987 and 0.11685.
  std::stringstream buffer;
  buffer << fig1.rdbuf();
  bool found = false;
  for (const std::string& line : lines_of(buffer.str())) {
    if (line.rfind("1,", 0) == 0) {
      std::stringstream row(line);
      std::string z_str, ours_str, gauss_str;
      std::getline(row, z_str, ',');
      std::getline(row, ours_str, ',');
      std::getline(row, gauss_str, ',');
      CHECK(std::stod(ours_str) == doctest::Approx(0.08987).epsilon(1e-3));
      CHECK(std::stod(gauss_str) == doctest::Approx(0.11685).epsilon(1e-3));
      found = true;
    }
  }
  CHECK(found);
}
