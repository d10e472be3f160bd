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

// Command-line front end.  Talks to the library exclusively through the C
// API in symext/symext.h, so every code path here doubles as a smoke test
// of the public binary interface.
//
// Exit codes (note the inverted success convention for detection):
//   0  extension found at every requested level (no entanglement detected)
//   1  entangled - an independently verified witness certificate exists
//   2  input or usage error (bad flags, malformed files, invalid states)
//   3  numerical limit or inconclusive verdicts (never reported as 1)

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "symext/symext.h"

using nlohmann::json;

namespace {

constexpr int kExitSeparable = 0;
constexpr int kExitEntangled = 1;
constexpr int kExitUsage = 2;
constexpr int kExitNumerical = 3;

using Clock = std::chrono::steady_clock;

double seconds_since(const Clock::time_point& start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

// Exit-code bucket for a failed C-API call: malformed input and bad
// arguments are usage errors; numerical guards and internal failures are
// the numerical-limit bucket.
int exit_for(symext_code code) {
  switch (code) {
    case SYMEXT_OK:
      return kExitSeparable;
    case SYMEXT_ERR_INVALID_ARGUMENT:
    case SYMEXT_ERR_PARSE:
    case SYMEXT_ERR_IO:
      return kExitUsage;
    case SYMEXT_ERR_NUMERICAL:
    case SYMEXT_ERR_INTERNAL:
      break;
  }
  return kExitNumerical;
}

[[noreturn]] void fail(symext_code code, const std::string& what) {
  std::cerr << "symext: " << what << ": " << symext_last_error() << "\n";
  std::exit(exit_for(code));
}

struct StateHandle {
  symext_state* ptr = nullptr;
  ~StateHandle() { symext_state_free(ptr); }
};

struct VerdictHandle {
  symext_verdict* ptr = nullptr;
  ~VerdictHandle() { symext_verdict_free(ptr); }
};

struct SweepHandle {
  symext_sweep* ptr = nullptr;
  ~SweepHandle() { symext_sweep_free(ptr); }
};

struct CertificateHandle {
  symext_certificate* ptr = nullptr;
  ~CertificateHandle() { symext_certificate_free(ptr); }
};

struct ReportHandle {
  symext_report* ptr = nullptr;
  ~ReportHandle() { symext_report_free(ptr); }
};

json take_json(char* text) {
  json parsed = json::parse(text);
  symext_buffer_free(text);
  return parsed;
}

// Flags shared by the solving commands; every tolerance the user can touch
// is recorded verbatim in the report.
struct Tunables {
  double tol_feas = 0.0;
  double entangled_margin = 0.0;
  double sdp_tol = 0.0;
  std::uint64_t seed = 0;
  int samples = 0;
  double budget_seconds = 0.0;
  int max_levels = 0;
  bool no_early_exit = false;

  symext_options options() const {
    symext_options opts;
    symext_options_init(&opts);
    opts.feas_tol = tol_feas;
    opts.entangled_margin = entangled_margin;
    opts.sdp_tol = sdp_tol;
    opts.verify_seed = seed;
    opts.verify_samples = samples;
    opts.budget_seconds = budget_seconds;
    opts.max_levels = max_levels;
    opts.early_exit = no_early_exit ? 0 : 1;
    return opts;
  }

  json recorded() const {
    json j;
    j["tol_feas"] = tol_feas;
    j["entangled_margin"] = entangled_margin;
    j["sdp_tol"] = sdp_tol;
    j["seed"] = seed;
    j["verify_samples"] = samples;
    j["early_exit"] = !no_early_exit;
    return j;
  }
};

void add_tunables(CLI::App* cmd, Tunables* t) {
  symext_options defaults;
  symext_options_init(&defaults);
  t->tol_feas = defaults.feas_tol;
  t->entangled_margin = defaults.entangled_margin;
  t->sdp_tol = defaults.sdp_tol;
  t->seed = defaults.verify_seed;
  t->samples = defaults.verify_samples;
  t->budget_seconds = defaults.budget_seconds;
  t->max_levels = defaults.max_levels;

  cmd->add_option("--tol-feas", t->tol_feas,
                  "extension/certificate acceptance tolerance")
      ->envname("SYMEXT_TOL_FEAS");
  cmd->add_option("--entangled-margin", t->entangled_margin,
                  "slack margin below which verdicts stay inconclusive")
      ->envname("SYMEXT_ENTANGLED_MARGIN");
  cmd->add_option("--sdp-tol", t->sdp_tol, "interior-point duality-gap target")
      ->envname("SYMEXT_SDP_TOL");
  cmd->add_option("--seed", t->seed, "seed for certificate probe sampling")
      ->envname("SYMEXT_SEED");
  cmd->add_option("--verify-samples", t->samples,
                  "product-state probes per certificate")
      ->envname("SYMEXT_VERIFY_SAMPLES");
  cmd->add_flag("--no-early-exit", t->no_early_exit,
                "always solve to the optimal slack");
}

void write_report(const json& report, const std::string& out_path) {
  const std::string text = report.dump(2) + "\n";
  if (out_path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream out(out_path, std::ios::binary);
  if (!out) {
    std::cerr << "symext: cannot write " << out_path << "\n";
    std::exit(kExitUsage);
  }
  out << text;
}

StateHandle load_input_state(const std::string& path) {
  StateHandle state;
  const symext_code rc = symext_state_load(path.c_str(), &state.ptr);
  if (rc != SYMEXT_OK) fail(rc, "cannot load state '" + path + "'");
  return state;
}

json state_summary(const symext_state* state) {
  std::vector<int> dims(
      static_cast<std::size_t>(symext_state_num_parties(state)));
  symext_state_dims(state, dims.data(), static_cast<int>(dims.size()));
  json j;
  j["dims"] = dims;
  return j;
}

std::vector<int> parse_level(const std::string& text) {
  std::vector<int> level;
  std::stringstream stream(text);
  std::string item;
  while (std::getline(stream, item, ',')) {
    try {
      std::size_t used = 0;
      const int value = std::stoi(item, &used);
      if (used != item.size()) throw std::invalid_argument(item);
      level.push_back(value);
    } catch (const std::exception&) {
      std::cerr << "symext: bad level component '" << item << "' in '" << text
                << "' (expected comma-separated integers)\n";
      std::exit(kExitUsage);
    }
  }
  if (level.empty()) {
    std::cerr << "symext: empty level '" << text << "'\n";
    std::exit(kExitUsage);
  }
  return level;
}

int exit_from_verdicts(const std::vector<symext_verdict_code>& codes) {
  bool inconclusive = false;
  for (const symext_verdict_code code : codes) {
    if (code == SYMEXT_ENTANGLED) return kExitEntangled;
    if (code != SYMEXT_EXTENSION_FOUND) inconclusive = true;
  }
  return inconclusive ? kExitNumerical : kExitSeparable;
}

// ---------------------------------------------------------------------------
// check: decide the requested levels one by one
// ---------------------------------------------------------------------------

int run_check(const std::string& in_path, const std::vector<std::string>& level_strs,
              const Tunables& tunables, const std::string& out_path) {
  const auto start = Clock::now();
  const StateHandle state = load_input_state(in_path);

  std::vector<std::vector<int>> levels;
  for (const auto& text : level_strs) levels.push_back(parse_level(text));
  if (levels.empty()) {
    const int parties = symext_state_num_parties(state.ptr);
    levels.emplace_back(static_cast<std::size_t>(parties), 1);  // base level
  }

  const symext_options opts = tunables.options();
  json report;
  report["command"] = "check";
  report["input"] = in_path;
  report["state"] = state_summary(state.ptr);
  report["tolerances"] = tunables.recorded();
  report["levels"] = json::array();

  std::vector<symext_verdict_code> codes;
  std::vector<double> level_times;
  for (const auto& level : levels) {
    VerdictHandle verdict;
    const symext_code rc = symext_check_level(
        state.ptr, level.data(), static_cast<int>(level.size()), &opts,
        &verdict.ptr);
    if (rc != SYMEXT_OK) fail(rc, "check failed");
    char* text = nullptr;
    if (symext_verdict_to_json(verdict.ptr, &text) != SYMEXT_OK) {
      fail(SYMEXT_ERR_INTERNAL, "cannot render verdict");
    }
    report["levels"].push_back(take_json(text));
    codes.push_back(symext_verdict_status(verdict.ptr));
    level_times.push_back(symext_verdict_wall_time(verdict.ptr));
  }

  report["timings"] = {{"levels", level_times},
                       {"total_seconds", seconds_since(start)}};
  write_report(report, out_path);
  return exit_from_verdicts(codes);
}

// ---------------------------------------------------------------------------
// sweep: walk a schedule until a definitive verdict
// ---------------------------------------------------------------------------

int run_sweep(const std::string& in_path, const std::string& schedule,
              const std::vector<std::string>& level_strs,
              const Tunables& tunables, const std::string& out_path) {
  const auto start = Clock::now();
  const StateHandle state = load_input_state(in_path);
  const symext_options opts = tunables.options();

  SweepHandle sweep;
  symext_code rc = SYMEXT_OK;
  if (!level_strs.empty()) {
    std::vector<int> flat;
    int level_len = 0;
    for (const auto& text : level_strs) {
      const std::vector<int> level = parse_level(text);
      if (level_len == 0) level_len = static_cast<int>(level.size());
      if (static_cast<int>(level.size()) != level_len) {
        std::cerr << "symext: custom levels must all have the same length\n";
        return kExitUsage;
      }
      flat.insert(flat.end(), level.begin(), level.end());
    }
    rc = symext_sweep_run_custom(state.ptr, flat.data(),
                                 static_cast<int>(level_strs.size()),
                                 level_len, &opts, &sweep.ptr);
  } else {
    rc = symext_sweep_run(state.ptr, schedule.c_str(), &opts, &sweep.ptr);
  }
  if (rc != SYMEXT_OK) fail(rc, "sweep failed");

  json report;
  report["command"] = "sweep";
  report["input"] = in_path;
  report["state"] = state_summary(state.ptr);
  report["schedule"] = level_strs.empty() ? schedule : "custom";
  report["budget"] = {{"seconds", tunables.budget_seconds},
                      {"max_levels", tunables.max_levels}};
  report["tolerances"] = tunables.recorded();
  report["levels"] = json::array();

  std::vector<symext_verdict_code> codes;
  std::vector<double> level_times;
  for (int i = 0; i < symext_sweep_size(sweep.ptr); ++i) {
    const symext_verdict* verdict = symext_sweep_at(sweep.ptr, i);
    char* text = nullptr;
    if (symext_verdict_to_json(verdict, &text) != SYMEXT_OK) {
      fail(SYMEXT_ERR_INTERNAL, "cannot render verdict");
    }
    report["levels"].push_back(take_json(text));
    codes.push_back(symext_verdict_status(verdict));
    level_times.push_back(symext_verdict_wall_time(verdict));
  }

  report["timings"] = {{"levels", level_times},
                       {"total_seconds", seconds_since(start)}};
  write_report(report, out_path);
  return exit_from_verdicts(codes);
}

// ---------------------------------------------------------------------------
// verify: re-check a witness certificate against a state
// ---------------------------------------------------------------------------

int run_verify(const std::string& in_path, const std::string& cert_path,
               const Tunables& tunables, const std::string& out_path) {
  const auto start = Clock::now();
  const StateHandle state = load_input_state(in_path);

  CertificateHandle cert;
  symext_code rc = symext_certificate_load(cert_path.c_str(), &cert.ptr);
  if (rc != SYMEXT_OK) fail(rc, "cannot load certificate '" + cert_path + "'");

  const symext_options opts = tunables.options();
  ReportHandle result;
  rc = symext_certificate_verify(cert.ptr, state.ptr, &opts, &result.ptr);
  if (rc != SYMEXT_OK) fail(rc, "verification failed");

  json report;
  report["command"] = "verify";
  report["input"] = in_path;
  report["certificate"] = cert_path;
  report["state"] = state_summary(state.ptr);
  report["tolerances"] = tunables.recorded();
  report["result"] = {
      {"valid", symext_report_valid(result.ptr) != 0},
      {"value", symext_report_value(result.ptr)},
      {"identity_residual", symext_report_identity_residual(result.ptr)},
      {"min_block_eig", symext_report_min_block_eig(result.ptr)},
      {"sampled_min", symext_report_sampled_min(result.ptr)},
      {"failure", symext_report_failure(result.ptr)},
  };
  report["timings"] = {{"total_seconds", seconds_since(start)}};
  write_report(report, out_path);

  // A valid certificate certifies entanglement of the input state; an
  // invalid one is a numerical failure, never silently "entangled".
  return symext_report_valid(result.ptr) != 0 ? kExitEntangled
                                              : kExitNumerical;
}

// ---------------------------------------------------------------------------
// corpus: generate a test state from a family spec
// ---------------------------------------------------------------------------

int run_corpus(const std::string& spec_path, const std::string& family,
               const std::vector<int>& dims, double p, std::uint64_t seed,
               int terms, const std::string& out_path) {
  std::string spec_text;
  if (!spec_path.empty()) {
    std::ifstream in(spec_path, std::ios::binary);
    if (!in) {
      std::cerr << "symext: cannot read " << spec_path << "\n";
      return kExitUsage;
    }
    std::stringstream buffer;
    buffer << in.rdbuf();
    spec_text = buffer.str();
  } else {
    if (family.empty() || dims.empty()) {
      std::cerr << "symext: corpus needs either --spec or --family/--dims\n";
      return kExitUsage;
    }
    json spec;
    spec["family"] = family;
    spec["dims"] = dims;
    spec["p"] = p;
    spec["seed"] = seed;
    spec["terms"] = terms;
    spec_text = spec.dump();
  }

  StateHandle state;
  symext_code rc = symext_state_generate(spec_text.c_str(), &state.ptr);
  if (rc != SYMEXT_OK) fail(rc, "cannot generate state");

  if (out_path.empty()) {
    char* text = nullptr;
    rc = symext_state_to_json(state.ptr, &text);
    if (rc != SYMEXT_OK) fail(rc, "cannot render state");
    std::cout << text << "\n";
    symext_buffer_free(text);
  } else {
    rc = symext_state_save(state.ptr, out_path.c_str());
    if (rc != SYMEXT_OK) fail(rc, "cannot save state");
  }
  return kExitSeparable;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"PPT locally symmetric extensions: entanglement detection "
               "via a converging SDP hierarchy"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(symext_version()));
  app.failure_message(CLI::FailureMessage::help);

  std::string in_path;
  std::string out_path;
  std::string cert_path;
  std::string schedule = "corollary1";
  std::vector<std::string> level_strs;
  Tunables tunables;

  CLI::App* check = app.add_subcommand(
      "check", "decide chosen hierarchy levels for a state");
  check->add_option("--in", in_path, "input state JSON")
      ->envname("SYMEXT_IN")
      ->required();
  check->add_option("--level", level_strs,
                    "level as comma-separated copies, e.g. 2,1,1 "
                    "(repeatable; default: base level)")
      ->envname("SYMEXT_LEVEL");
  check->add_option("--out", out_path, "report path (default: stdout)")
      ->envname("SYMEXT_OUT");
  add_tunables(check, &tunables);

  CLI::App* sweep = app.add_subcommand(
      "sweep", "walk a level schedule until a definitive verdict");
  sweep->add_option("--in", in_path, "input state JSON")
      ->envname("SYMEXT_IN")
      ->required();
  sweep->add_option("--schedule", schedule, "theorem1 or corollary1")
      ->envname("SYMEXT_SCHEDULE");
  sweep->add_option("--level", level_strs,
                    "custom schedule: explicit levels in order (repeatable)")
      ->envname("SYMEXT_LEVEL");
  sweep->add_option("--budget-seconds", tunables.budget_seconds,
                    "wall-clock budget for the sweep")
      ->envname("SYMEXT_BUDGET_SECONDS");
  sweep->add_option("--max-levels", tunables.max_levels,
                    "maximum number of levels attempted")
      ->envname("SYMEXT_MAX_LEVELS");
  sweep->add_option("--out", out_path, "report path (default: stdout)")
      ->envname("SYMEXT_OUT");
  add_tunables(sweep, &tunables);

  CLI::App* verify = app.add_subcommand(
      "verify", "re-verify a witness certificate against a state");
  verify->add_option("--in", in_path, "input state JSON")
      ->envname("SYMEXT_IN")
      ->required();
  verify->add_option("--cert", cert_path, "certificate JSON")
      ->envname("SYMEXT_CERT")
      ->required();
  verify->add_option("--out", out_path, "report path (default: stdout)")
      ->envname("SYMEXT_OUT");
  add_tunables(verify, &tunables);

  std::string spec_path;
  std::string family;
  std::vector<int> dims;
  double noise_p = 1.0;
  std::uint64_t corpus_seed = 0;
  int terms = 1;
  CLI::App* corpus = app.add_subcommand(
      "corpus", "generate a test state from a family spec");
  corpus->add_option("--spec", spec_path, "StateSpec JSON file");
  corpus->add_option("--family", family,
                     "family name (product, bell, ghz, w, werner, "
                     "upb_shifts, mixture, explicit)");
  corpus->add_option("--dims", dims, "party dimensions")->delimiter(',');
  corpus->add_option("--p", noise_p, "structured-part weight in [0, 1]");
  corpus->add_option("--seed", corpus_seed, "seed for random families");
  corpus->add_option("--terms", terms, "product family: number of terms");
  corpus->add_option("--out", out_path, "state path (default: stdout)")
      ->envname("SYMEXT_OUT");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : kExitUsage;  // help/version exit 0; errors exit 2
  }

  if (check->parsed()) {
    return run_check(in_path, level_strs, tunables, out_path);
  }
  if (sweep->parsed()) {
    return run_sweep(in_path, schedule, level_strs, tunables, out_path);
  }
  if (verify->parsed()) {
    return run_verify(in_path, cert_path, tunables, out_path);
  }
  return run_corpus(spec_path, family, dims, noise_p, corpus_seed, terms,
                    out_path);
}
