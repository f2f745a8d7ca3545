// Copyright 2026 The fpif Authors
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


#include <doctest.h>

#include <unistd.h>

#include <filesystem>
#include <fstream>
#include <string>

#include "config.hpp"
#include "fpif/error.hpp"
#include "runner.hpp"

using namespace fpif;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() /
                       ("fpif-test-config-" + std::to_string(::getpid())) / name;
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

std::string error_of(const std::string& json) {
  try {
    config::parse(json, FPIF_PROBLEMS_DIR, {});
  } catch (const ConfigError& e) {
    return e.what();
  }
  return "";
}

bool contains(const std::string& haystack, const std::string& needle) {
  return haystack.find(needle) != std::string::npos;
}

}  // namespace

TEST_CASE("config errors name the offending field") {
  CHECK(contains(error_of(R"({"kind": "matrix-game", "payoff": [[1]], "bogus": 1})"),
                 "$.bogus"));
  CHECK(contains(error_of(R"({"payoff": [[1]]})"), "$.kind"));
  CHECK(contains(error_of(R"({"kind": "nope"})"), "$.kind"));
  CHECK(contains(error_of(R"({"kind": "matrix-game", "payoff": [[1, 2], [3]]})"),
                 "$.payoff[1]"));
  CHECK(contains(error_of(R"({"kind": "fpif", "space": {"dim": 2},
                              "A": {"type": "box", "lower": [0, 0, 0], "upper": 1}})"),
                 "$.A.lower"));
  CHECK(contains(error_of(R"({"kind": "fpif", "space": {"dim": 2}, "A": {"type": "spiral"}})"),
                 "$.A"));
  CHECK(contains(error_of(R"({"kind": "matrix-game", "payoff_file": "missing.csv"})"),
                 "$.payoff_file"));
  CHECK(contains(error_of("{not json"), "invalid JSON"));
  CHECK(contains(error_of(R"({"kind": "sum-m", "space": {"dim": 1},
                              "ops": ["zero", "zero"], "weights": [0.5, 0.7]})"),
                 "weights"));
}

TEST_CASE("solver configuration errors surface from parse or run") {
  // chi = |F| = 2 for matching pennies, so gamma = 1 is outside ]0, 1/2[.
  const std::string text =
      R"({"kind": "matrix-game", "payoff": [[1, -1], [-1, 1]], "schedule": {"gamma": 1}})";
  bool raised = false;
  try {
    config::Overrides ov;
    ov.out_dir = scratch("gamma").string();
    runner::run(config::parse(text, ".", ov));
  } catch (const ConfigError& e) {
    raised = true;
    CHECK(contains(e.what(), "1/chi"));
  }
  CHECK(raised);
}

TEST_CASE("overrides replace stop settings and seed") {
  config::Overrides ov;
  ov.max_iter = 7;
  ov.tol = 1e-3;
  ov.seed = 9;
  const auto cfg = config::load(fs::path(FPIF_PROBLEMS_DIR) / "tseng_affine.json", ov);
  CHECK(cfg.kind == "tseng");
  CHECK(cfg.stop.max_iter == 7);
  CHECK(cfg.stop.residual_tol == 1e-3);
  CHECK(cfg.seed == 9);
}

TEST_CASE("every shipped problem parses") {
  for (const auto& entry : fs::directory_iterator(FPIF_PROBLEMS_DIR)) {
    if (entry.path().extension() != ".json") continue;
    CAPTURE(entry.path().string());
    CHECK_NOTHROW(config::load(entry.path(), {}));
  }
}

TEST_CASE("matrix csv reader") {
  const fs::path dir = scratch("csv");
  {
    std::ofstream out(dir / "m.csv");
    out << "1, 2,3\n4,5,6e-1\n\n";
  }
  const Matrix m = config::read_matrix_csv(dir / "m.csv");
  REQUIRE(m.rows() == 2);
  REQUIRE(m.cols() == 3);
  CHECK(m(1, 2) == 0.6);
  {
    std::ofstream out(dir / "bad.csv");
    out << "1,2\n3\n";
  }
  CHECK_THROWS_AS(config::read_matrix_csv(dir / "bad.csv"), IoError);
  CHECK_THROWS_AS(config::read_matrix_csv(dir / "absent.csv"), IoError);
}

TEST_CASE("solution files round-trip bit for bit") {
  const fs::path dir = scratch("solution");
  runner::Solution sol;
  Vector a(3);
  a << 1.0 / 3.0, -2e-300, 12345.678901234567;
  sol.components = {{"x", a}, {"state", Vector::Constant(1, 0.1)}};
  runner::write_solution(dir / "s.csv", sol);
  const auto back = runner::read_solution(dir / "s.csv");
  REQUIRE(back.components.size() == 2);
  CHECK(*back.find("x") == a);
  CHECK((*back.find("state"))(0) == 0.1);
  CHECK(back.find("y") == nullptr);
}

TEST_CASE("run then evaluate reproduces residuals for every shipped problem") {
  for (const auto& entry : fs::directory_iterator(FPIF_PROBLEMS_DIR)) {
    if (entry.path().extension() != ".json") continue;
    CAPTURE(entry.path().string());
    config::Overrides ov;
    ov.out_dir = scratch(entry.path().stem().string()).string();
    const auto cfg = config::load(entry.path(), ov);
    const auto rep = runner::run(cfg);
    CHECK(rep.status == SolveStatus::kConverged);
    CHECK(fs::exists(rep.solution_path));
    CHECK(fs::exists(rep.trace_path));
    CHECK(fs::exists(rep.report_path));
    const auto sol = runner::read_solution(rep.solution_path);
    const auto res = runner::evaluate(cfg, sol);
    REQUIRE(res.size() == rep.residuals.size());
    for (std::size_t k = 0; k < res.size(); ++k) {
      CHECK(res[k].first == rep.residuals[k].first);
      CHECK(res[k].second == rep.residuals[k].second);
    }
  }
}

TEST_CASE("evaluate rejects mismatched solutions") {
  const auto cfg = config::load(fs::path(FPIF_PROBLEMS_DIR) / "matching_pennies.json", {});
  runner::Solution sol;
  sol.components = {{"x1", Vector::Constant(3, 0.3)}, {"x2", Vector::Constant(2, 0.5)},
                    {"state", Vector::Zero(4)}};
  CHECK_THROWS_AS(runner::evaluate(cfg, sol), Error);
}
