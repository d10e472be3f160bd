/* Copyright 2026 The symext Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#ifndef SYMEXT_SYMEXT_H
#define SYMEXT_SYMEXT_H

/* C binary interface of the symext library.
 *
 * The library decides whether a multipartite density matrix admits a PPT
 * locally symmetric extension at a chosen hierarchy level, and extracts a
 * verified entanglement witness when it does not.
 *
 * Conventions:
 *  - Every fallible call returns a symext_code; SYMEXT_OK means success.
 *    On failure, symext_last_error() describes the most recent failure on
 *    the calling thread.
 *  - Objects are opaque handles created by the library and released with
 *    the matching *_free function (all tolerate NULL).  Handles returned
 *    through out-parameters are owned by the caller unless documented as
 *    borrowed.
 *  - Matrices cross the boundary as row-major interleaved doubles
 *    [re00, im00, re01, im01, ...]; a d-dimensional matrix needs 2*d*d
 *    doubles.
 *  - Strings returned through char** out-parameters are heap-allocated and
 *    must be released with symext_buffer_free.
 */

#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

/* ------------------------------------------------------------------------ */
/* Status and error reporting                                               */
/* ------------------------------------------------------------------------ */

typedef enum symext_code {
  SYMEXT_OK = 0,
  SYMEXT_ERR_INVALID_ARGUMENT = 1, /* bad parameter, shape, or state        */
  SYMEXT_ERR_PARSE = 2,            /* malformed JSON input                  */
  SYMEXT_ERR_IO = 3,               /* file missing or unwritable            */
  SYMEXT_ERR_NUMERICAL = 4,        /* internal numerical guard tripped      */
  SYMEXT_ERR_INTERNAL = 5          /* anything else; please report          */
} symext_code;

typedef enum symext_verdict_code {
  SYMEXT_EXTENSION_FOUND = 0,
  SYMEXT_ENTANGLED = 1,
  SYMEXT_INCONCLUSIVE = 2
} symext_verdict_code;

/* Message for the most recent failing call on this thread; empty string if
 * no call has failed.  The pointer stays valid until the next failing call
 * on the same thread. */
const char* symext_last_error(void);

/* Library version, e.g. "1.0.0". */
const char* symext_version(void);

/* Releases strings returned through char** out-parameters. */
void symext_buffer_free(char* buffer);

/* ------------------------------------------------------------------------ */
/* Options                                                                  */
/* ------------------------------------------------------------------------ */

/* Tunables for checks, sweeps, and certificate verification.  Initialize
 * with symext_options_init and adjust fields as needed; every function
 * taking options also accepts NULL for the defaults. */
typedef struct symext_options {
  double sdp_tol;          /* interior-point duality-gap target   (1e-8)   */
  int sdp_max_iter;        /* interior-point iteration cap        (200)    */
  double entangled_margin; /* |slack| below this is inconclusive  (1e-6)   */
  double feas_tol;         /* extension / certificate acceptance  (1e-7)   */
  int verify_samples;      /* product-state probes per certificate (100000)*/
  uint64_t verify_seed;    /* seed for the probe sampler          (0)      */
  int early_exit;          /* stop once multipliers are feasible  (1)      */
  long long dim_cap;       /* max compressed*full dimension       (1e7)    */
  int max_levels;          /* sweep: levels attempted             (6)      */
  double budget_seconds;   /* sweep: wall-clock cap               (600)    */
} symext_options;

void symext_options_init(symext_options* opts);

/* ------------------------------------------------------------------------ */
/* States                                                                   */
/* ------------------------------------------------------------------------ */

/* A validated density matrix together with its party structure. */
typedef struct symext_state symext_state;

/* JSON document {"dims": [d1, ..., dN], "matrix": [[[re, im], ...], ...]}. */
symext_code symext_state_load(const char* path, symext_state** out);
symext_code symext_state_from_json(const char* text, symext_state** out);
symext_code symext_state_save(const symext_state* state, const char* path);
symext_code symext_state_to_json(const symext_state* state, char** out_text);

/* Builds a corpus state from a generator spec, JSON of the form
 * {"family": "werner", "dims": [2, 2], "p": 0.5, "seed": 7, ...}. */
symext_code symext_state_generate(const char* spec_json, symext_state** out);

int symext_state_num_parties(const symext_state* state);
long long symext_state_dim(const symext_state* state);
/* Writes the party dimensions into dims[0..len); len must equal the number
 * of parties. */
symext_code symext_state_dims(const symext_state* state, int* dims, int len);
/* Copies the matrix; buffer_len must be exactly 2*dim*dim. */
symext_code symext_state_matrix(const symext_state* state, double* buffer,
                                long long buffer_len);
void symext_state_free(symext_state* state);

/* ------------------------------------------------------------------------ */
/* Level checks                                                             */
/* ------------------------------------------------------------------------ */

typedef struct symext_verdict symext_verdict;

/* Decides one hierarchy level (level[i] = copies of party i, level_len must
 * equal the number of parties).  SYMEXT_ENTANGLED is only ever returned
 * with an embedded certificate that passed independent verification. */
symext_code symext_check_level(const symext_state* state, const int* level,
                               int level_len, const symext_options* opts,
                               symext_verdict** out);

symext_verdict_code symext_verdict_status(const symext_verdict* verdict);
double symext_verdict_slack(const symext_verdict* verdict);
double symext_verdict_wall_time(const symext_verdict* verdict);
int symext_verdict_solver_iterations(const symext_verdict* verdict);
/* Borrowed pointer, valid while the verdict lives. */
const char* symext_verdict_message(const symext_verdict* verdict);
/* Writes the level into level[0..len). */
symext_code symext_verdict_level(const symext_verdict* verdict, int* level,
                                 int len);

/* Deterministic JSON rendering (level, status, slack, solver data, message,
 * embedded certificate when present).  Wall time is deliberately excluded
 * so identical runs produce identical documents. */
symext_code symext_verdict_to_json(const symext_verdict* verdict,
                                   char** out_text);

/* Certificate attached to an entangled verdict; SYMEXT_ERR_INVALID_ARGUMENT
 * when none is present.  The returned handle is an independent copy. */
int symext_verdict_has_certificate(const symext_verdict* verdict);
symext_code symext_verdict_certificate(const symext_verdict* verdict,
                                       struct symext_certificate** out);

/* Extension found at this level, lifted to the full extended space (side
 * dimension *out_dim).  Call with buffer = NULL to query the dimension;
 * otherwise buffer_len must be exactly 2*dim*dim. */
int symext_verdict_has_extension(const symext_verdict* verdict);
symext_code symext_verdict_extension(const symext_verdict* verdict,
                                     double* buffer, long long buffer_len,
                                     long long* out_dim);
void symext_verdict_free(symext_verdict* verdict);

/* ------------------------------------------------------------------------ */
/* Sweeps                                                                   */
/* ------------------------------------------------------------------------ */

typedef struct symext_sweep symext_sweep;

/* Runs levels in schedule order ("theorem1" or "corollary1") until a
 * verdict of entangled, the budget, or the schedule is exhausted. */
symext_code symext_sweep_run(const symext_state* state, const char* schedule,
                             const symext_options* opts, symext_sweep** out);

/* Same with an explicit level list: levels is row-major num_levels x
 * level_len (level_len must equal the number of parties). */
symext_code symext_sweep_run_custom(const symext_state* state,
                                    const int* levels, int num_levels,
                                    int level_len, const symext_options* opts,
                                    symext_sweep** out);

int symext_sweep_size(const symext_sweep* sweep);
/* Borrowed handle, valid while the sweep lives. */
const symext_verdict* symext_sweep_at(const symext_sweep* sweep, int index);
void symext_sweep_free(symext_sweep* sweep);

/* ------------------------------------------------------------------------ */
/* Witness certificates                                                     */
/* ------------------------------------------------------------------------ */

typedef struct symext_certificate symext_certificate;
typedef struct symext_report symext_report;

/* JSON document {"dims", "n", "Z", "Z_S", "residual", "value"}; sufficient
 * for third-party re-verification without this library's solver. */
symext_code symext_certificate_load(const char* path,
                                    symext_certificate** out);
symext_code symext_certificate_from_json(const char* text,
                                         symext_certificate** out);
symext_code symext_certificate_save(const symext_certificate* cert,
                                    const char* path);
symext_code symext_certificate_to_json(const symext_certificate* cert,
                                       char** out_text);
double symext_certificate_value(const symext_certificate* cert);
double symext_certificate_residual(const symext_certificate* cert);
void symext_certificate_free(symext_certificate* cert);

/* Re-verifies a certificate against a state: blocks PSD, dual identity
 * within tolerance, negative expectation value, and nonnegativity on
 * sampled product states.  The report is produced even when verification
 * fails; only malformed inputs fail the call itself. */
symext_code symext_certificate_verify(const symext_certificate* cert,
                                      const symext_state* state,
                                      const symext_options* opts,
                                      symext_report** out);

int symext_report_valid(const symext_report* report);
double symext_report_value(const symext_report* report);
double symext_report_min_block_eig(const symext_report* report);
double symext_report_identity_residual(const symext_report* report);
double symext_report_sampled_min(const symext_report* report);
/* First violated condition, empty when valid; borrowed pointer. */
const char* symext_report_failure(const symext_report* report);
void symext_report_free(symext_report* report);

#ifdef __cplusplus
} /* extern "C" */
#endif

#endif /* SYMEXT_SYMEXT_H */
