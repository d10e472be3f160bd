// Copyright 2026 The symext Authors
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

// End-to-end tests of the command-line binary: spawns the real executable
// and asserts on exit codes and report files.  The exit convention is part
// of the interface: 0 extension found, 1 entangled (verified certificate
// only), 2 input/usage error, 3 numerical limit or inconclusive.

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <json.hpp>

#include "symext/states.hpp"

using nlohmann::json;
namespace {

const char* kCliPath = SYMEXT_CLI_PATH;
const char* kDataDir = SYMEXT_DATA_DIR;

struct RunResult {
  int exit_code = -1;
  std::string output;
};

RunResult run(const std::string& args) {
  const std::string command = std::string(kCliPath) + " " + args + " 2>&1";
  FILE* pipe = popen(command.c_str(), "r");
  REQUIRE(pipe != nullptr);
  RunResult result;
  char buffer[4096];
  while (std::fgets(buffer, sizeof(buffer), pipe) != nullptr) {
    result.output += buffer;
  }
  const int status = pclose(pipe);
  result.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return result;
}

std::filesystem::path work_dir() {
  const auto dir = std::filesystem::temp_directory_path() / "symext_cli";
  std::filesystem::create_directories(dir);
  return dir;
}

std::string path_of(const std::string& name) {
  return (work_dir() / name).string();
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  REQUIRE(in.good());
  std::stringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  REQUIRE(out.good());
  out << text;
}

// Reports must be byte-identical across identical runs except for the
// timings subtree, which is the only place wall-clock time may appear.
std::string stable_part(const std::string& report_text) {
  json report = json::parse(report_text);
  REQUIRE(report.contains("timings"));
  report.erase("timings");
  return report.dump();
}

std::string upb_state_path() {
  static const std::string path = [] {
    const std::string p = path_of("upb.json");
    const RunResult r =
        run("corpus --family upb_shifts --dims 2,2,2 --out " + p);
    REQUIRE(r.exit_code == 0);
    return p;
  }();
  return path;
}

std::string mixed_state_path() {
  static const std::string path = [] {
    const std::string p = path_of("mixed.json");
    const RunResult r = run("corpus --family werner --dims 2,2 --p 0 --out " + p);
    REQUIRE(r.exit_code == 0);
    return p;
  }();
  return path;
}

}  // namespace

TEST_CASE("usage errors exit 2") {
  CHECK(run("").exit_code == 2);                       // missing subcommand
  CHECK(run("frobnicate").exit_code == 2);             // unknown subcommand
  CHECK(run("check").exit_code == 2);                  // missing --in
  CHECK(run("check --in /nonexistent.json").exit_code == 2);
  CHECK(run("corpus").exit_code == 2);                 // no spec, no family
  CHECK(run("--help").exit_code == 0);
  CHECK(run("--version").exit_code == 0);

  const RunResult bad_level =
      run("check --in " + mixed_state_path() + " --level 2,x");
  CHECK(bad_level.exit_code == 2);
  CHECK(bad_level.output.find("bad level component") != std::string::npos);

  // Malformed input file: diagnostic names the offending field.
  const std::string broken = path_of("broken_state.json");
  write_file(broken, R"({"dims": [2, 2]})");
  const RunResult r = run("check --in " + broken);
  CHECK(r.exit_code == 2);
  CHECK(r.output.find("matrix") != std::string::npos);
}

TEST_CASE("corpus generates validated states") {
  const RunResult to_stdout = run("corpus --family ghz --dims 2,2,2 --p 0.5");
  CHECK(to_stdout.exit_code == 0);
  const json doc = json::parse(to_stdout.output);
  CHECK(doc["dims"] == json::array({2, 2, 2}));

  // Files written by the CLI load and validate through the library.
  const symext::StateFile file = symext::load_state(upb_state_path());
  symext::validate_density(file.rho,
                           symext::PartyStructure{file.dims});
  CHECK(file.dims == std::vector<int>{2, 2, 2});

  // Spec-file route produces the same state as inline flags.
  const std::string spec = path_of("spec.json");
  write_file(spec, R"({"family": "werner", "dims": [2, 2], "p": 0.25})");
  const std::string from_spec = path_of("werner_spec.json");
  const std::string from_flags = path_of("werner_flags.json");
  CHECK(run("corpus --spec " + spec + " --out " + from_spec).exit_code == 0);
  CHECK(run("corpus --family werner --dims 2,2 --p 0.25 --out " + from_flags)
            .exit_code == 0);
  CHECK(read_file(from_spec) == read_file(from_flags));
}

TEST_CASE("check exits 1 on detection and 0 on extension") {
  const std::string report_path = path_of("upb_report.json");
  const RunResult detect = run("check --in " + upb_state_path() +
                               " --level 2,1,1 --out " + report_path);
  CHECK(detect.exit_code == 1);

  const json report = json::parse(read_file(report_path));
  CHECK(report["command"] == "check");
  CHECK(report["state"]["dims"] == json::array({2, 2, 2}));
  CHECK(report["tolerances"]["tol_feas"] == 1e-7);
  REQUIRE(report["levels"].size() == 1);
  const json& verdict = report["levels"][0];
  CHECK(verdict["status"] == "entangled");
  CHECK(verdict["slack"].get<double>() < -1e-3);
  CHECK(verdict["certificate"]["value"].get<double>() < -1e-3);

  const RunResult separable =
      run("check --in " + mixed_state_path() + " --level 1,1");
  CHECK(separable.exit_code == 0);

  // Base level is the default when no --level is given.
  const RunResult base = run("check --in " + mixed_state_path());
  CHECK(base.exit_code == 0);

  // Multiple levels: all extension_found gives 0; any detection gives 1.
  CHECK(run("check --in " + mixed_state_path() + " --level 1,1 --level 2,1")
            .exit_code == 0);
  CHECK(run("check --in " + upb_state_path() +
            " --level 1,1,1 --level 2,1,1").exit_code == 1);
}

TEST_CASE("reports are deterministic outside the timings subtree") {
  const std::string a = path_of("report_a.json");
  const std::string b = path_of("report_b.json");
  const std::string args = "check --in " + upb_state_path() +
                           " --level 2,1,1 --seed 5 --out ";
  CHECK(run(args + a).exit_code == 1);
  CHECK(run(args + b).exit_code == 1);
  CHECK(stable_part(read_file(a)) == stable_part(read_file(b)));
  CHECK(read_file(a) != read_file(b));  // timings genuinely differ

  const std::string s1 = path_of("sweep_a.json");
  const std::string s2 = path_of("sweep_b.json");
  const std::string sweep_args =
      "sweep --in " + mixed_state_path() + " --max-levels 2 --out ";
  CHECK(run(sweep_args + s1).exit_code == 0);
  CHECK(run(sweep_args + s2).exit_code == 0);
  CHECK(stable_part(read_file(s1)) == stable_part(read_file(s2)));
}

TEST_CASE("sweep walks schedules and custom level lists") {
  const std::string bell = path_of("bell.json");
  REQUIRE(run("corpus --family bell --dims 2,2 --out " + bell).exit_code == 0);

  const std::string report_path = path_of("sweep_bell.json");
  const RunResult swept =
      run("sweep --in " + bell + " --schedule theorem1 --out " + report_path);
  CHECK(swept.exit_code == 1);
  const json report = json::parse(read_file(report_path));
  CHECK(report["schedule"] == "theorem1");
  REQUIRE(report["levels"].size() == 1);
  CHECK(report["levels"][0]["status"] == "entangled");
  CHECK(report["levels"][0]["base_closed_form"] == true);

  const std::string custom_path = path_of("sweep_custom.json");
  const RunResult custom =
      run("sweep --in " + mixed_state_path() +
          " --level 1,1 --level 2,1 --out " + custom_path);
  CHECK(custom.exit_code == 0);
  const json custom_report = json::parse(read_file(custom_path));
  CHECK(custom_report["schedule"] == "custom");
  REQUIRE(custom_report["levels"].size() == 2);
  CHECK(custom_report["levels"][1]["level"] == json::array({2, 1}));

  CHECK(run("sweep --in " + bell + " --schedule fibonacci").exit_code == 2);
}

TEST_CASE("verify exits 1 only on a passing certificate") {
  const std::string cert = std::string(kDataDir) + "/upb_witness_cert.json";
  const std::string report_path = path_of("verify_report.json");
  const RunResult good = run("verify --in " + upb_state_path() + " --cert " +
                             cert + " --out " + report_path);
  CHECK(good.exit_code == 1);
  const json report = json::parse(read_file(report_path));
  CHECK(report["result"]["valid"] == true);
  CHECK(report["result"]["value"].get<double>() ==
        doctest::Approx(-0.375).epsilon(1e-10));

  // Corrupt JSON: usage error, with a diagnostic naming the problem.
  const std::string truncated = path_of("truncated_cert.json");
  write_file(truncated, read_file(cert).substr(0, 500));
  const RunResult broken =
      run("verify --in " + upb_state_path() + " --cert " + truncated);
  CHECK(broken.exit_code == 2);

  // Well-formed but tampered: the verification itself fails, exit 3.
  json doc = json::parse(read_file(cert));
  doc["Z"][0][0][0] = doc["Z"][0][0][0].get<double>() + 0.5;
  const std::string tampered = path_of("tampered_cert.json");
  write_file(tampered, doc.dump());
  const std::string tampered_report = path_of("tampered_report.json");
  const RunResult failed = run("verify --in " + upb_state_path() + " --cert " +
                               tampered + " --out " + tampered_report);
  CHECK(failed.exit_code == 3);
  const json failed_doc = json::parse(read_file(tampered_report));
  CHECK(failed_doc["result"]["valid"] == false);
  CHECK(failed_doc["result"]["failure"].get<std::string>().find(
            "dual identity violated") != std::string::npos);
}

TEST_CASE("environment variables mirror the flags") {
  const std::string report_path = path_of("env_report.json");
  const std::string command = "SYMEXT_LEVEL=2,1,1 SYMEXT_OUT=" + report_path +
                              " " + std::string(kCliPath) + " check --in " +
                              upb_state_path() + " 2>&1";
  FILE* pipe = popen(command.c_str(), "r");
  REQUIRE(pipe != nullptr);
  char buffer[4096];
  while (std::fgets(buffer, sizeof(buffer), pipe) != nullptr) {
  }
  const int status = pclose(pipe);
  REQUIRE(WIFEXITED(status));
  CHECK(WEXITSTATUS(status) == 1);
  const json report = json::parse(read_file(report_path));
  CHECK(report["levels"][0]["level"] == json::array({2, 1, 1}));
}
