// Copyright 2026 The wfslab Authors. All Rights Reserved.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <doctest.h>

#include <array>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>
#include <sys/wait.h>

#include "wfslab/analysis.hpp"
#include "wfslab/osc.hpp"

namespace fs = std::filesystem;

namespace {

struct Run {
  int code = -1;
  std::string out;
};

// Runs the CLI from a scratch directory, capturing stdout.
Run cli(const std::string& args, const fs::path& cwd) {
  const std::string cmd = "cd '" + cwd.string() + "' && '" WFSLAB_CLI "' " + args + " 2>/dev/null";
  Run r;
  FILE* pipe = ::popen(cmd.c_str(), "r");
  REQUIRE(pipe != nullptr);
  std::array<char, 4096> buf{};
  std::size_t n = 0;
  while ((n = std::fread(buf.data(), 1, buf.size(), pipe)) > 0) r.out.append(buf.data(), n);
  const int status = ::pclose(pipe);
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

struct Scratch {
  fs::path path;
  explicit Scratch(const std::string& name) : path(fs::temp_directory_path() / name) {
    fs::remove_all(path);
    fs::create_directories(path);
  }
  ~Scratch() { fs::remove_all(path); }
};

}  // namespace

TEST_CASE("usage errors exit with 2") {
  Scratch s("wfslab_cli_usage");
  CHECK(cli("", s.path).code == 2);
  CHECK(cli("frobnicate", s.path).code == 2);
  CHECK(cli("field", s.path).code == 2);  // --source is required
  CHECK(cli("field --source 1", s.path).code == 2);
  CHECK(cli("field --source 0,-1.5 --speakers 1", s.path).code == 2);
  CHECK(cli("osc-send --endpoint nonsense --position 1,2", s.path).code == 2);
  CHECK(cli("osc-send --dry-run", s.path).code == 2);
  CHECK(cli("--help", s.path).code == 0);
}

TEST_CASE("configuration errors exit with 2") {
  Scratch s("wfslab_cli_config");
  std::ofstream(s.path / "bad.cfg") << "[cohort]\nparticipants = many\n";
  CHECK(cli("simulate --config bad.cfg", s.path).code == 2);
  CHECK(cli("print-config", s.path).out.find("[cohort]") != std::string::npos);
}

TEST_CASE("dry-run hex dump of the two-float example") {
  Scratch s("wfslab_cli_osc");
  const auto r = cli("osc-send --address '/source/{id}/xy' --id 1 --position 1,2 --dry-run", s.path);
  CHECK(r.code == 0);
  CHECK(r.out ==
        "2F 73 6F 75 72 63 65 2F 31 2F 78 79 00 00 00 00\n"
        "2C 66 66 00 3F 80 00 00 40 00 00 00\n");
}

TEST_CASE("osc-send delivers to a local receiver") {
  Scratch s("wfslab_cli_udp");
  wfslab::osc::UdpReceiver rx;
  const auto r = cli("osc-send --endpoint 127.0.0.1:" + std::to_string(rx.port()) +
                         " --id 4 --trajectory 0,0,1,1,2",
                     s.path);
  CHECK(r.code == 0);
  const auto got = rx.receive();
  REQUIRE_FALSE(got.empty());
  CHECK(wfslab::osc::decode(got).address == "/source/4/trajectory");
}

TEST_CASE("generate, simulate and analyze") {
  Scratch s("wfslab_cli_pipeline");
  auto r = cli("generate --participants 2 --seed 10 --out plans", s.path);
  CHECK(r.code == 0);
  CHECK(fs::exists(s.path / "plans" / "P1_10.csv"));
  CHECK(fs::exists(s.path / "plans" / "P2_11.csv"));

  r = cli("simulate --participants 2 --seed 10 --out logs", s.path);
  CHECK(r.code == 0);
  CHECK(r.out.find("P2 seed=11") != std::string::npos);
  CHECK(fs::exists(s.path / "logs" / "P1_10" / "pos_round_54.csv"));

  r = cli("analyze logs --out bundle --bins 10", s.path);
  CHECK(r.code == 0);
  std::ifstream grid(s.path / "bundle" / "heatmap_sources.csv");
  CHECK(wfslab::read_grid_csv(grid).nx == 10);

  CHECK(cli("analyze nowhere", s.path).code == 1);
  fs::create_directories(s.path / "empty");
  CHECK(cli("analyze empty", s.path).code == 1);
}

TEST_CASE("field writes error maps for both modes") {
  Scratch s("wfslab_cli_field");
  const auto r = cli("field --source 0,-1.5 --grid 5 --out maps", s.path);
  CHECK(r.code == 0);
  for (const char* f : {"error_map_static.csv", "error_map_ud.csv", "speakers_static.csv",
                        "speakers_ud.csv"}) {
    CHECK(fs::exists(s.path / "maps" / f));
  }
  CHECK(cli("field --source 0,0 --mode ud --listener 0,0 --out maps", s.path).code == 2);
}
