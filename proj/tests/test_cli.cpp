/*
 * Copyright 2026 The FCER Toolkit Authors.
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <string>
#include <sys/wait.h>

#include "fcer/error.hpp"
#include "fcer/report.hpp"
#include "model_spec.hpp"
#include "test_support.hpp"

using namespace fcer;
namespace fs = std::filesystem;

namespace {

int run(const std::string& args) {
  const std::string cmd = std::string(FCER_CLI_PATH) + " " + args + " >/dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

}  // namespace

TEST_CASE("model spec grammar") {
  using Kind = cli::ModelSpec::Kind;
  auto s = cli::parse_model_spec("ensemble");
  CHECK(s.kind == Kind::kEnsemble);
  CHECK(s.dir.empty());
  s = cli::parse_model_spec("ensemble:/data/other");
  CHECK(s.kind == Kind::kEnsemble);
  CHECK(s.dir == "/data/other");
  s = cli::parse_model_spec("student:runs/d1");
  CHECK(s.kind == Kind::kStudentMaps);
  CHECK(s.dir == "runs/d1");
  s = cli::parse_model_spec("student:data:runs/d1/head.json");
  CHECK(s.kind == Kind::kStudentHead);
  CHECK(s.dir == "data");
  CHECK(s.head == "runs/d1/head.json");
  CHECK_THROWS_AS(cli::parse_model_spec("student"), ArgumentError);
  CHECK_THROWS_AS(cli::parse_model_spec("student:"), ArgumentError);
  CHECK_THROWS_AS(cli::parse_model_spec("ensemble:"), ArgumentError);
  CHECK_THROWS_AS(cli::parse_model_spec("mc-dropout:x"), ArgumentError);
}

TEST_CASE("cli exit codes and outputs") {
  testing::TempDir dir("cli");
  const std::string d = dir.path().string();
  CHECK(run("--help") == 0);
  CHECK(run("") == 1);
  CHECK(run("eval") == 1);
  CHECK(run("eval " + d + "/missing --out " + d + "/e") == 1);

  REQUIRE(run("synth --out " + d + "/data --fires 8 --grid 32 --seed 3") == 0);
  CHECK(run("synth --out " + d + "/data --fires 8 --grid 32 --seed 3") == 1);
  CHECK(run("synth --out " + d + "/data --fires 8 --grid 32 --seed 3 --force") == 0);
  CHECK(run("validate " + d + "/data --crop 0") == 0);
  CHECK(run("validate " + d + "/data") == 1);  // 128 crop exceeds 32 px
  CHECK(run("eval " + d + "/data --crop 0 --radii 4-2 --out " + d + "/bad") == 1);

  REQUIRE(run("eval " + d + "/data --crop 24 --out " + d + "/eval") == 0);
  for (const char* f : {"table.csv", "table.md", "summary.json", "manifest.json"}) {
    CHECK(fs::exists(dir.path() / "eval" / f));
  }

  // Identical specs give identical tables.
  REQUIRE(run("eval " + d + "/data --crop 0 --model ensemble --model ensemble:" + d + "/data --out " + d + "/same") ==
          0);
  const std::string csv = read_text(dir.path() / "same" / "table.csv");
  std::string ens, ens2;
  for (std::size_t pos = 0; pos < csv.size();) {
    const std::size_t end = csv.find('\n', pos);
    std::string line = csv.substr(pos, end - pos);
    pos = end + 1;
    const auto c1 = line.find(',');
    const auto c2 = line.find(',', c1 + 1);
    const std::string method = line.substr(c1 + 1, c2 - c1 - 1);
    const std::string rest = line.substr(0, c1) + line.substr(c2);
    if (method == "Ensemble") ens += rest + "\n";
    if (method == "Ensemble (2)") ens2 += rest + "\n";
  }
  CHECK(!ens.empty());
  CHECK(ens == ens2);

  REQUIRE(run("sweep " + d + "/data --crop 0 --model-a ensemble --model-b ensemble --out " + d + "/sw") == 0);
  CHECK(run("stats " + d + "/sw --out " + d + "/st") == 2);  // all differences zero
  CHECK(run("stats " + d + "/sw --anchor 99 --out " + d + "/st2") == 1);
}
