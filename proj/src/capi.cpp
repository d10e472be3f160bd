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

#include "symext/symext.h"

#include <cstring>
#include <exception>
#include <memory>
#include <new>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "symext/hierarchy.hpp"
#include "symext/linalg.hpp"
#include "symext/states.hpp"
#include "symext/witness.hpp"

using nlohmann::json;

// ---------------------------------------------------------------------------
// Opaque handle definitions
// ---------------------------------------------------------------------------

struct symext_state {
  symext::PartyStructure parties;
  symext::CMatrix rho;
};

struct symext_verdict {
  symext::PartyStructure parties;
  symext::LevelVerdict verdict;
};

struct symext_sweep {
  // Wrapper handles are materialized up front so symext_sweep_at can hand
  // out stable borrowed pointers.
  std::vector<std::unique_ptr<symext_verdict>> verdicts;
};

struct symext_certificate {
  symext::WitnessCertificate cert;
};

struct symext_report {
  symext::VerifyReport report;
};

namespace {

thread_local std::string t_last_error;

template <typename F>
symext_code guarded(F&& body) {
  try {
    body();
    return SYMEXT_OK;
  } catch (const symext::ParseError& e) {
    t_last_error = e.what();
    return SYMEXT_ERR_PARSE;
  } catch (const symext::IoError& e) {
    t_last_error = e.what();
    return SYMEXT_ERR_IO;
  } catch (const std::invalid_argument& e) {
    t_last_error = e.what();
    return SYMEXT_ERR_INVALID_ARGUMENT;
  } catch (const std::logic_error& e) {
    // Internal numerical guards (factorization checks, extraction
    // preconditions) throw logic_error; they mean the computation refused
    // to produce an unverified answer.
    t_last_error = e.what();
    return SYMEXT_ERR_NUMERICAL;
  } catch (const std::bad_alloc& e) {
    t_last_error = e.what();
    return SYMEXT_ERR_INTERNAL;
  } catch (const std::exception& e) {
    t_last_error = e.what();
    return SYMEXT_ERR_INTERNAL;
  }
}

symext_code fail_invalid(const char* message) {
  t_last_error = message;
  return SYMEXT_ERR_INVALID_ARGUMENT;
}

void require(bool ok, const char* message) {
  if (!ok) throw std::invalid_argument(message);
}

char* copy_string(const std::string& text) {
  char* out = new char[text.size() + 1];
  std::memcpy(out, text.c_str(), text.size() + 1);
  return out;
}

symext_options default_options() {
  symext_options opts;
  symext_options_init(&opts);
  return opts;
}

void validate_options(const symext_options& o) {
  require(o.sdp_tol > 0.0, "sdp_tol must be positive");
  require(o.sdp_max_iter >= 1, "sdp_max_iter must be at least 1");
  require(o.entangled_margin >= 0.0, "entangled_margin must be nonnegative");
  require(o.feas_tol > 0.0, "feas_tol must be positive");
  require(o.verify_samples >= 0, "verify_samples must be nonnegative");
  require(o.dim_cap >= 1, "dim_cap must be at least 1");
  require(o.max_levels >= 1, "max_levels must be at least 1");
  require(o.budget_seconds > 0.0, "budget_seconds must be positive");
}

symext::CheckOptions check_options(const symext_options* raw) {
  const symext_options o = raw ? *raw : default_options();
  validate_options(o);
  symext::CheckOptions opts;
  opts.sdp.tol = o.sdp_tol;
  opts.sdp.max_iter = o.sdp_max_iter;
  opts.entangled_margin = o.entangled_margin;
  opts.feas_tol = o.feas_tol;
  opts.verify_samples = o.verify_samples;
  opts.verify_seed = o.verify_seed;
  opts.early_exit = o.early_exit != 0;
  opts.dim_cap = o.dim_cap;
  return opts;
}

symext::SweepOptions sweep_options(const symext_options* raw) {
  const symext_options o = raw ? *raw : default_options();
  symext::SweepOptions opts;
  opts.check = check_options(raw);
  opts.budget.max_levels = o.max_levels;
  opts.budget.seconds = o.budget_seconds;
  return opts;
}

symext::VerifyOptions verify_options(const symext_options* raw) {
  const symext_options o = raw ? *raw : default_options();
  validate_options(o);
  symext::VerifyOptions opts;
  opts.samples = o.verify_samples;
  opts.seed = o.verify_seed;
  opts.residual_tol = o.feas_tol;
  return opts;
}

symext_state* wrap_state(std::vector<int> dims, symext::CMatrix rho) {
  symext::PartyStructure parties{std::move(dims)};
  symext::validate_density(rho, parties);
  return new symext_state{std::move(parties), std::move(rho)};
}

symext_verdict* run_check(const symext_state& state,
                          const symext::ExtensionVector& level,
                          const symext_options* opts) {
  symext::LevelVerdict v =
      symext::check_level(state.rho, state.parties, level,
                          check_options(opts));
  return new symext_verdict{state.parties, std::move(v)};
}

json verdict_json(const symext_verdict& handle) {
  const symext::LevelVerdict& v = handle.verdict;
  json j;
  j["level"] = v.level.copies;
  j["status"] = symext::to_string(v.status);
  j["slack"] = v.t_star;
  j["base_closed_form"] = v.base_closed_form;
  j["solver"] = {{"status", symext::to_string(v.solver_status)},
                 {"iterations", v.solver_iterations}};
  j["message"] = v.message;
  if (v.witness.has_value()) {
    j["certificate"] = json::parse(symext::certificate_to_json(*v.witness));
  }
  return j;
}

void copy_matrix_out(const symext::CMatrix& m, double* buffer,
                     long long buffer_len) {
  const long long need = 2LL * m.rows() * m.cols();
  require(buffer_len == need, "buffer length does not match the matrix size");
  long long k = 0;
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      buffer[k++] = m(i, j).real();
      buffer[k++] = m(i, j).imag();
    }
  }
}

}  // namespace

// ---------------------------------------------------------------------------
// Error reporting and utilities
// ---------------------------------------------------------------------------

const char* symext_last_error(void) { return t_last_error.c_str(); }

const char* symext_version(void) { return "1.0.0"; }

void symext_buffer_free(char* buffer) { delete[] buffer; }

void symext_options_init(symext_options* opts) {
  if (opts == nullptr) return;
  const symext::CheckOptions check;
  const symext::SweepBudget budget;
  opts->sdp_tol = check.sdp.tol;
  opts->sdp_max_iter = check.sdp.max_iter;
  opts->entangled_margin = check.entangled_margin;
  opts->feas_tol = check.feas_tol;
  opts->verify_samples = check.verify_samples;
  opts->verify_seed = check.verify_seed;
  opts->early_exit = check.early_exit ? 1 : 0;
  opts->dim_cap = check.dim_cap;
  opts->max_levels = budget.max_levels;
  opts->budget_seconds = budget.seconds;
}

// ---------------------------------------------------------------------------
// States
// ---------------------------------------------------------------------------

symext_code symext_state_load(const char* path, symext_state** out) {
  if (path == nullptr || out == nullptr) return fail_invalid("null argument");
  return guarded([&] {
    symext::StateFile file = symext::load_state(path);
    *out = wrap_state(std::move(file.dims), std::move(file.rho));
  });
}

symext_code symext_state_from_json(const char* text, symext_state** out) {
  if (text == nullptr || out == nullptr) return fail_invalid("null argument");
  return guarded([&] {
    symext::StateFile file = symext::state_from_json(text);
    *out = wrap_state(std::move(file.dims), std::move(file.rho));
  });
}

symext_code symext_state_save(const symext_state* state, const char* path) {
  if (state == nullptr || path == nullptr) return fail_invalid("null argument");
  return guarded(
      [&] { symext::save_state(path, state->parties.dims, state->rho); });
}

symext_code symext_state_to_json(const symext_state* state, char** out_text) {
  if (state == nullptr || out_text == nullptr) {
    return fail_invalid("null argument");
  }
  return guarded([&] {
    *out_text =
        copy_string(symext::state_to_json(state->parties.dims, state->rho));
  });
}

symext_code symext_state_generate(const char* spec_json, symext_state** out) {
  if (spec_json == nullptr || out == nullptr) {
    return fail_invalid("null argument");
  }
  return guarded([&] {
    const symext::StateSpec spec = symext::StateSpec::from_json(spec_json);
    symext::CMatrix rho = symext::make_family(spec);
    *out = wrap_state(spec.dims, std::move(rho));
  });
}

int symext_state_num_parties(const symext_state* state) {
  return state == nullptr ? 0 : state->parties.num_parties();
}

long long symext_state_dim(const symext_state* state) {
  return state == nullptr ? 0 : state->parties.total_dim();
}

symext_code symext_state_dims(const symext_state* state, int* dims, int len) {
  if (state == nullptr || dims == nullptr) return fail_invalid("null argument");
  return guarded([&] {
    require(len == state->parties.num_parties(),
            "dims length does not match the number of parties");
    for (int i = 0; i < len; ++i) dims[i] = state->parties.dims[i];
  });
}

symext_code symext_state_matrix(const symext_state* state, double* buffer,
                                long long buffer_len) {
  if (state == nullptr || buffer == nullptr) {
    return fail_invalid("null argument");
  }
  return guarded([&] { copy_matrix_out(state->rho, buffer, buffer_len); });
}

void symext_state_free(symext_state* state) { delete state; }

// ---------------------------------------------------------------------------
// Level checks
// ---------------------------------------------------------------------------

symext_code symext_check_level(const symext_state* state, const int* level,
                               int level_len, const symext_options* opts,
                               symext_verdict** out) {
  if (state == nullptr || level == nullptr || out == nullptr) {
    return fail_invalid("null argument");
  }
  return guarded([&] {
    require(level_len == state->parties.num_parties(),
            "level length does not match the number of parties");
    symext::ExtensionVector n;
    n.copies.assign(level, level + level_len);
    *out = run_check(*state, n, opts);
  });
}

symext_verdict_code symext_verdict_status(const symext_verdict* verdict) {
  if (verdict == nullptr) return SYMEXT_INCONCLUSIVE;
  switch (verdict->verdict.status) {
    case symext::VerdictStatus::extension_found:
      return SYMEXT_EXTENSION_FOUND;
    case symext::VerdictStatus::entangled:
      return SYMEXT_ENTANGLED;
    case symext::VerdictStatus::inconclusive:
      break;
  }
  return SYMEXT_INCONCLUSIVE;
}

double symext_verdict_slack(const symext_verdict* verdict) {
  return verdict == nullptr ? 0.0 : verdict->verdict.t_star;
}

double symext_verdict_wall_time(const symext_verdict* verdict) {
  return verdict == nullptr ? 0.0 : verdict->verdict.wall_time;
}

int symext_verdict_solver_iterations(const symext_verdict* verdict) {
  return verdict == nullptr ? 0 : verdict->verdict.solver_iterations;
}

const char* symext_verdict_message(const symext_verdict* verdict) {
  return verdict == nullptr ? "" : verdict->verdict.message.c_str();
}

symext_code symext_verdict_level(const symext_verdict* verdict, int* level,
                                 int len) {
  if (verdict == nullptr || level == nullptr) {
    return fail_invalid("null argument");
  }
  return guarded([&] {
    require(len == verdict->verdict.level.num_parties(),
            "level length does not match the number of parties");
    for (int i = 0; i < len; ++i) level[i] = verdict->verdict.level.copies[i];
  });
}

symext_code symext_verdict_to_json(const symext_verdict* verdict,
                                   char** out_text) {
  if (verdict == nullptr || out_text == nullptr) {
    return fail_invalid("null argument");
  }
  return guarded(
      [&] { *out_text = copy_string(verdict_json(*verdict).dump(2)); });
}

int symext_verdict_has_certificate(const symext_verdict* verdict) {
  return (verdict != nullptr && verdict->verdict.witness.has_value()) ? 1 : 0;
}

symext_code symext_verdict_certificate(const symext_verdict* verdict,
                                       symext_certificate** out) {
  if (verdict == nullptr || out == nullptr) return fail_invalid("null argument");
  return guarded([&] {
    require(verdict->verdict.witness.has_value(),
            "verdict carries no certificate");
    *out = new symext_certificate{*verdict->verdict.witness};
  });
}

int symext_verdict_has_extension(const symext_verdict* verdict) {
  return (verdict != nullptr && verdict->verdict.sigma.has_value()) ? 1 : 0;
}

symext_code symext_verdict_extension(const symext_verdict* verdict,
                                     double* buffer, long long buffer_len,
                                     long long* out_dim) {
  if (verdict == nullptr || out_dim == nullptr) {
    return fail_invalid("null argument");
  }
  return guarded([&] {
    require(verdict->verdict.sigma.has_value(),
            "verdict carries no extension");
    const symext::CMatrix lifted = symext::lift_extension(
        verdict->parties, verdict->verdict.level, *verdict->verdict.sigma);
    *out_dim = lifted.rows();
    if (buffer != nullptr) copy_matrix_out(lifted, buffer, buffer_len);
  });
}

void symext_verdict_free(symext_verdict* verdict) { delete verdict; }

// ---------------------------------------------------------------------------
// Sweeps
// ---------------------------------------------------------------------------

namespace {

symext_sweep* wrap_sweep(const symext_state& state,
                         std::vector<symext::LevelVerdict> results) {
  auto sweep = std::make_unique<symext_sweep>();
  for (auto& v : results) {
    sweep->verdicts.push_back(
        std::make_unique<symext_verdict>(symext_verdict{state.parties,
                                                        std::move(v)}));
  }
  return sweep.release();
}

}  // namespace

symext_code symext_sweep_run(const symext_state* state, const char* schedule,
                             const symext_options* opts, symext_sweep** out) {
  if (state == nullptr || schedule == nullptr || out == nullptr) {
    return fail_invalid("null argument");
  }
  return guarded([&] {
    symext::SweepOptions options = sweep_options(opts);
    const std::string name = schedule;
    if (name == "theorem1") {
      options.schedule = symext::SweepSchedule::theorem1;
    } else if (name == "corollary1") {
      options.schedule = symext::SweepSchedule::corollary1;
    } else {
      throw std::invalid_argument("unknown schedule: " + name);
    }
    *out = wrap_sweep(*state,
                      symext::sweep(state->rho, state->parties, options));
  });
}

symext_code symext_sweep_run_custom(const symext_state* state,
                                    const int* levels, int num_levels,
                                    int level_len, const symext_options* opts,
                                    symext_sweep** out) {
  if (state == nullptr || levels == nullptr || out == nullptr) {
    return fail_invalid("null argument");
  }
  return guarded([&] {
    require(num_levels >= 1, "custom schedule needs at least one level");
    require(level_len == state->parties.num_parties(),
            "level length does not match the number of parties");
    symext::SweepOptions options = sweep_options(opts);
    options.schedule = symext::SweepSchedule::custom;
    for (int i = 0; i < num_levels; ++i) {
      symext::ExtensionVector n;
      n.copies.assign(levels + i * level_len, levels + (i + 1) * level_len);
      options.custom.push_back(std::move(n));
    }
    *out = wrap_sweep(*state,
                      symext::sweep(state->rho, state->parties, options));
  });
}

int symext_sweep_size(const symext_sweep* sweep) {
  return sweep == nullptr ? 0 : static_cast<int>(sweep->verdicts.size());
}

const symext_verdict* symext_sweep_at(const symext_sweep* sweep, int index) {
  if (sweep == nullptr || index < 0 ||
      index >= static_cast<int>(sweep->verdicts.size())) {
    return nullptr;
  }
  return sweep->verdicts[static_cast<std::size_t>(index)].get();
}

void symext_sweep_free(symext_sweep* sweep) { delete sweep; }

// ---------------------------------------------------------------------------
// Certificates
// ---------------------------------------------------------------------------

symext_code symext_certificate_load(const char* path,
                                    symext_certificate** out) {
  if (path == nullptr || out == nullptr) return fail_invalid("null argument");
  return guarded(
      [&] { *out = new symext_certificate{symext::load_certificate(path)}; });
}

symext_code symext_certificate_from_json(const char* text,
                                         symext_certificate** out) {
  if (text == nullptr || out == nullptr) return fail_invalid("null argument");
  return guarded([&] {
    *out = new symext_certificate{symext::certificate_from_json(text)};
  });
}

symext_code symext_certificate_save(const symext_certificate* cert,
                                    const char* path) {
  if (cert == nullptr || path == nullptr) return fail_invalid("null argument");
  return guarded([&] { symext::save_certificate(path, cert->cert); });
}

symext_code symext_certificate_to_json(const symext_certificate* cert,
                                       char** out_text) {
  if (cert == nullptr || out_text == nullptr) {
    return fail_invalid("null argument");
  }
  return guarded([&] {
    *out_text = copy_string(symext::certificate_to_json(cert->cert));
  });
}

double symext_certificate_value(const symext_certificate* cert) {
  return cert == nullptr ? 0.0 : cert->cert.value;
}

double symext_certificate_residual(const symext_certificate* cert) {
  return cert == nullptr ? 0.0 : cert->cert.identity_residual;
}

void symext_certificate_free(symext_certificate* cert) { delete cert; }

symext_code symext_certificate_verify(const symext_certificate* cert,
                                      const symext_state* state,
                                      const symext_options* opts,
                                      symext_report** out) {
  if (cert == nullptr || state == nullptr || out == nullptr) {
    return fail_invalid("null argument");
  }
  return guarded([&] {
    *out = new symext_report{symext::verify_certificate(
        cert->cert, state->rho, verify_options(opts))};
  });
}

// ---------------------------------------------------------------------------
// Verification reports
// ---------------------------------------------------------------------------

int symext_report_valid(const symext_report* report) {
  return (report != nullptr && report->report.valid) ? 1 : 0;
}

double symext_report_value(const symext_report* report) {
  return report == nullptr ? 0.0 : report->report.value;
}

double symext_report_min_block_eig(const symext_report* report) {
  return report == nullptr ? 0.0 : report->report.min_block_eig;
}

double symext_report_identity_residual(const symext_report* report) {
  return report == nullptr ? 0.0 : report->report.identity_residual;
}

double symext_report_sampled_min(const symext_report* report) {
  return report == nullptr ? 0.0 : report->report.sampled_min;
}

const char* symext_report_failure(const symext_report* report) {
  return report == nullptr ? "" : report->report.failure.c_str();
}

void symext_report_free(symext_report* report) { delete report; }
