// Copyright 2026 The phaselimit Authors
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

#include "cli.hpp"

#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <numbers>
#include <sstream>

#include "phaselimit/bounds.hpp"
#include "phaselimit/povm.hpp"
#include "phaselimit/serialize.hpp"

using namespace phaselimit;

namespace {

struct Run {
  int code;
  std::string out;
  std::string err;
};

Run run(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

std::filesystem::path scratch(const std::string& name) {
  const auto dir = std::filesystem::temp_directory_path() / "phaselimit_cli_test";
  std::filesystem::create_directories(dir);
  return dir / name;
}

std::string read_file(const std::filesystem::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

TEST(cli, constants) {
  const auto r = run({"constants"});
  ASSERT_EQ(r.code, cli::kOk);
  EXPECT_NE(r.out.find("k_A = 0.559304368351"), std::string::npos);
  EXPECT_NE(r.out.find("k_C = 1.376083543344"), std::string::npos);
  EXPECT_NE(r.out.find("z_A = -2.338107410460"), std::string::npos);
  const auto j = Json::parse(run({"constants", "--format", "json"}).out);
  EXPECT_EQ(j["schema"], kSchema);
  EXPECT_NEAR(j["k_C"].get<double>(), 1.3760835433437749, 1e-13);
}

TEST(cli, usage_errors) {
  EXPECT_EQ(run({}).code, cli::kValidation);
  EXPECT_EQ(run({"bogus"}).code, cli::kValidation);
  EXPECT_EQ(run({"constants", "--format", "csv"}).code, cli::kValidation);
  EXPECT_EQ(run({"optimize"}).code, cli::kValidation);
  EXPECT_EQ(run({"--help"}).code, cli::kOk);
}

TEST(cli, bounds_table_and_json) {
  const auto table = run({"bounds", "--state", "[[1,0]]"});
  ASSERT_EQ(table.code, cli::kOk) << table.err;
  EXPECT_NE(table.out.find("H(Theta) + H(N) >= ln 2pi"), std::string::npos);
  const auto r = run({"bounds", "--state", "[[0.6,0],[0,0.8]]", "--format", "json"});
  ASSERT_EQ(r.code, cli::kOk) << r.err;
  const auto j = Json::parse(r.out);
  EXPECT_EQ(j["command"], "bounds");
  EXPECT_TRUE(j["report"]["all_satisfied"].get<bool>());
  EXPECT_NEAR(j["report"]["mean_number"].get<double>(), 0.64, 1e-12);
}

TEST(cli, bounds_rejects_bad_states) {
  EXPECT_EQ(run({"bounds", "--state", "[[0,0],[0,0]]"}).code, cli::kValidation);
  EXPECT_EQ(run({"bounds", "--state", "[[1,0"}).code, cli::kValidation);
  EXPECT_EQ(run({"bounds", "--state", "/nonexistent/state.json"}).code, cli::kValidation);
  EXPECT_EQ(run({"bounds", "--state", "[[1,0]]", "--grid", "100"}).code, cli::kValidation);
}

TEST(cli, state_file_argument) {
  const auto path = scratch("state.json");
  std::ofstream(path) << "[[0.6, 0], [0.8, 0]]";
  const auto r = run({"bounds", "--state", path.string(), "--format", "json"});
  ASSERT_EQ(r.code, cli::kOk) << r.err;
  EXPECT_NEAR(Json::parse(r.out)["report"]["mean_number"].get<double>(), 0.64, 1e-12);
}

TEST(cli, optimize) {
  const auto r = run({"optimize", "--means", "0.5", "--dim", "2", "--format", "json"});
  ASSERT_EQ(r.code, cli::kOk) << r.err;
  const auto j = Json::parse(r.out);
  EXPECT_NEAR(j["results"][0]["cost"].get<double>(), std::numbers::pi * std::numbers::pi / 3 - 2,
              1e-9);
  const auto csv = run({"optimize", "--means", "1,2", "--kind", "surrogate", "--format", "csv"});
  ASSERT_EQ(csv.code, cli::kOk);
  EXPECT_EQ(csv.out.rfind(kCurveCsvHeader, 0), 0u);
  EXPECT_EQ(std::count(csv.out.begin(), csv.out.end(), '\n'), 3);
  EXPECT_EQ(run({"optimize", "--means", "5", "--dim", "4"}).code, cli::kValidation);
  EXPECT_EQ(run({"optimize", "--means", "1,x"}).code, cli::kValidation);
  EXPECT_EQ(run({"optimize", "--means", "1", "--kind", "cubic"}).code, cli::kValidation);
}

TEST(cli, curve_products_bounded_below) {
  const auto r = run({"curve", "--kind", "exact", "--means", "0.5,1,2,5,10,20,50,100"});
  ASSERT_EQ(r.code, cli::kOk) << r.err;
  std::istringstream in(r.out);
  std::string line;
  std::getline(in, line);
  EXPECT_EQ(line, kCurveCsvHeader);
  double previous = 1e300;
  int rows = 0;
  while (std::getline(in, line)) {
    std::vector<std::string> cells;
    std::stringstream ls(line);
    for (std::string c; std::getline(ls, c, ',');) cells.push_back(c);
    ASSERT_EQ(cells.size(), 10u);
    EXPECT_EQ(cells[0], "exact");
    const double product = std::stod(cells[6]);
    EXPECT_GE(product, 1.376);
    EXPECT_LE(product, previous);
    previous = product;
    ++rows;
  }
  EXPECT_EQ(rows, 8);
  EXPECT_EQ(run({"curve", "--means", "2,1"}).code, cli::kValidation);
}

TEST(cli, curve_is_deterministic) {
  const std::vector<std::string> args{"curve", "--means", "0.5,3,9", "--format", "json"};
  EXPECT_EQ(run(args).out, run(args).out);
}

TEST(cli, simulate) {
  const auto povm = to_json(canonical_measurement(2, 5)).dump();
  const auto r = run({"simulate", "--povm", povm, "--state", "[[0.7071067811865476,0],[0.7071067811865476,0]]"});
  ASSERT_EQ(r.code, cli::kOk) << r.err;
  const auto j = Json::parse(r.out);
  EXPECT_NEAR(j["mean_square_deviation"].get<double>(),
              std::numbers::pi * std::numbers::pi / 3 - 2, 1e-12);
  EXPECT_TRUE(j["heisenberg"]["satisfied"].get<bool>());
  EXPECT_NEAR(j["holevo_variance"].get<double>(), 3.0, 1e-12);

  const auto csv = run({"simulate", "--povm", povm, "--state", "[[1,0]]", "--format", "csv"});
  ASSERT_EQ(csv.code, cli::kOk) << csv.err;
  EXPECT_EQ(std::count(csv.out.begin(), csv.out.end(), '\n'), 4097);

  EXPECT_EQ(run({"simulate", "--povm", povm, "--state", "[[1,0],[0,0],[0,1]]"}).code,
            cli::kValidation);
  const std::string bad = R"({"dim":1,"outcomes":[{"estimate":0,"element":[[[0.5,0]]]}]})";
  EXPECT_EQ(run({"simulate", "--povm", bad, "--state", "[[1,0]]"}).code, cli::kValidation);
}

TEST(cli, discriminate) {
  const auto r = run({"discriminate", "--K", "8"});
  ASSERT_EQ(r.code, cli::kOk) << r.err;
  const auto j = Json::parse(r.out);
  EXPECT_LE(j["gram_identity_error"].get<double>(), 1e-12);
  EXPECT_NEAR(j["mean_number"].get<double>(), 3.5, 1e-12);
  EXPECT_EQ(run({"discriminate", "--K", "0"}).code, cli::kValidation);
}

TEST(cli, out_writes_file) {
  const auto path = scratch("constants.json");
  std::filesystem::remove(path);
  const auto r = run({"constants", "--format", "json", "--out", path.string()});
  ASSERT_EQ(r.code, cli::kOk);
  EXPECT_TRUE(r.out.empty());
  EXPECT_EQ(Json::parse(read_file(path))["command"], "constants");
  for (const auto& e : std::filesystem::directory_iterator(path.parent_path())) {
    EXPECT_EQ(e.path().string().find(".tmp"), std::string::npos) << e.path();
  }
}

TEST(cli, json_round_trips) {
  const auto s = ProbeState::from_amplitudes(std::vector<Complex>{{0.6, 0.0}, {0.0, 0.8}});
  const auto back = state_from_json(to_json(s));
  for (std::size_t n = 0; n < 2; ++n) EXPECT_EQ(back[n], s[n]);
  const auto povm = canonical_measurement(3, 7);
  const auto pback = pom_from_json(to_json(povm));
  ASSERT_EQ(pback.size(), povm.size());
  for (std::size_t j = 0; j < povm.size(); ++j) {
    EXPECT_EQ(pback[j].estimate, povm[j].estimate);
    EXPECT_EQ(pback[j].element, povm[j].element);
  }
  const auto d = canonical_distribution(s);
  EXPECT_EQ(distribution_from_json(to_json(d)).moments(), d.moments());
}
