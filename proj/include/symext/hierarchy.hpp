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

#ifndef SYMEXT_HIERARCHY_HPP
#define SYMEXT_HIERARCHY_HPP

// The extension hierarchy: decides whether a state rho on (x)_i H_i admits a
// PPT locally symmetric extension at level n = (n_1, ..., n_N), i.e. a
// density operator on (x)_i H_i^{(x) n_i} that
//   (i)   is supported on the per-party symmetric subspaces,
//   (ii)  stays PSD under every partial transpose across copy classes, and
//   (iii) reduces to rho when all duplicate copies are traced out.
//
// The decision problem is compiled to a standard-form SDP over the witness
// blocks W_S (one PSD block per canonical transpose class, in the compressed
// class-support basis):
//
//   minimize    sum_S <B_S(sigma_0), W_S>
//   subject to  sum_S <B_S(K_alpha), W_S> = 0   for every kernel direction,
//               sum_S Tr[W_S] = 1,   W_S >= 0,
//
// where sigma_0 is the least-norm compressed operator with the right partial
// trace, K_alpha spans the trace-free directions, and B_S compresses the
// class-S partial transpose of the lifted variable.  This program is the
// conic dual of the max-slack form "maximize t s.t. every transposed block
// of the extension dominates t*I": the solver's Lagrange multipliers y are
// exactly the extension coordinates plus the slack t, and its optimal value
// is the best slack t*.  t* >= 0 certifies an extension; t* < 0 yields the
// witness blocks directly from the primal optimum.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "symext/certificate.hpp"
#include "symext/linalg.hpp"
#include "symext/sdp.hpp"
#include "symext/tensor.hpp"
#include "symext/witness.hpp"

namespace symext {

// Guard against accidentally compiling a level whose isometries would not
// fit in memory; sym_dim * full_dim is capped by this default.
inline constexpr long long kDefaultDimCap = 10'000'000;

// Everything about a (party structure, level) pair that does not depend on
// the state: isometries, the partial-trace map in Hermitian coordinates,
// its SVD, and the state-independent part of the compiled SDP.  Compiling
// once and reusing it across states amortizes the dominant setup cost.
struct LevelCompilation {
  PartyStructure parties;
  ExtensionVector level;
  PartyStructure extended;               // copy slots, grouped by party
  Eigen::Index phys_dim = 0;             // D
  Eigen::Index sym_dim = 0;              // D_sym
  Eigen::Index full_dim = 0;             // prod_i d_i^{n_i}

  std::vector<TransposeClass> classes;   // canonical enumeration order
  CMatrix lift;                          // L : full_dim x sym_dim
  std::vector<CMatrix> class_isometries; // L_S : full_dim x class support

  // svec(partial trace of L sigma L') = tmat * svec(sigma); thin SVD
  // tmat = U diag(s) V^T with rank D^2, row_basis = leading V columns and
  // kernel = trailing V columns (the K_alpha directions).
  RMatrix tmat;
  RMatrix svd_u;
  RVector svd_s;
  RMatrix row_basis;
  RMatrix kernel;

  // Compiled constraints (kernel rows then the unit-trace row); the
  // objective is filled in per state by build_feasibility.
  SdpProblem skeleton;

  // B_S(sigma) = L_S' (L sigma L')^{T_S} L_S for class `class_index`.
  CMatrix class_projection(const CMatrix& sigma, std::size_t class_index) const;
};

// Compiles a level.  Throws std::invalid_argument when the level is invalid
// or sym_dim * full_dim would exceed `dim_cap` (checked in floating point,
// before any allocation), and std::logic_error if the partial-trace map
// unexpectedly loses rank.
LevelCompilation compile_level(const PartyStructure& parties,
                               const ExtensionVector& level,
                               long long dim_cap = kDefaultDimCap);

// Least-norm compressed operator sigma_0 with partial trace rho (Hermitian,
// generally indefinite; feasibility is what the SDP decides).
CMatrix least_norm_extension(const LevelCompilation& comp, const CMatrix& rho);

// The compressed extension candidate encoded by dual multipliers y:
// sigma(y) = sigma_0 - sum_alpha y_alpha K_alpha; its partial trace is rho
// for every y by construction.  Uses the leading kernel-count entries of y.
CMatrix extension_from_multipliers(const LevelCompilation& comp,
                                   const CMatrix& sigma0, const RVector& y);

// Compiles the feasibility program for one state (see the file comment for
// the exact standard form).  The convenience overload compiles the level
// first and throws on the same conditions as compile_level.
SdpProblem build_feasibility(const LevelCompilation& comp, const CMatrix& rho);
SdpProblem build_feasibility(const CMatrix& rho, const PartyStructure& parties,
                             const ExtensionVector& level);

// Builds the entanglement witness from a solved feasibility program with
// negative optimum: Z is recovered in the Hermitian operator basis from the
// least-squares inversion of the partial-trace adjoint, the blocks Z_S are
// the primal PSD blocks lifted to the full extended space, and everything
// is normalized so that sum_S Tr[Z_S] = 1 exactly.  Throws std::logic_error
// unless sol.status == optimal with sol.primal_obj < 0 - in particular for
// any state that admitted an extension.
WitnessCertificate extract_witness(const LevelCompilation& comp,
                                   const SdpSolution& sol, const CMatrix& rho);

// rho_ext = L sigma L' on the full extended space.
CMatrix lift_extension(const LevelCompilation& comp, const CMatrix& sigma);
CMatrix lift_extension(const PartyStructure& parties,
                       const ExtensionVector& level, const CMatrix& sigma);

// Traces an extension at level `from` down to level `to` (componentwise
// to <= from), discarding the trailing copies of each party.
CMatrix trace_extension(const CMatrix& rho_ext, const PartyStructure& parties,
                        const ExtensionVector& from, const ExtensionVector& to);

// Independent re-verification of a claimed extension on the full extended
// space: symmetric support, Hermiticity, unit trace, partial trace equal to
// rho, and positivity of every canonical class transpose.
struct ExtensionReport {
  double herm_defect = 0.0;
  double trace_error = 0.0;     // |Tr - 1|
  double support_defect = 0.0;  // ||rho_ext - pi rho_ext pi||_F
  double trace_defect = 0.0;    // ||Tr_copies rho_ext - rho||_F
  double min_block_eig = 0.0;   // over canonical transpose classes
  bool ok = false;
};
ExtensionReport verify_extension(const CMatrix& rho_ext, const CMatrix& rho,
                                 const PartyStructure& parties,
                                 const ExtensionVector& level,
                                 double tol = 1e-7);

enum class VerdictStatus { extension_found, entangled, inconclusive };
const char* to_string(VerdictStatus s);

struct CheckOptions {
  SdpOptions sdp;                  // inner solver controls
  // `entangled` requires t* < -entangled_margin AND an independently
  // verified certificate.  `extension_found` tolerates t* down to
  // -feas_tol (boundary states solve to t* = -eps) but always demands the
  // re-verified extension; the remaining band is inconclusive.
  double entangled_margin = 1e-6;
  double feas_tol = 1e-7;          // extension / certificate acceptance
  int verify_samples = 100000;     // product-state probe of certificates
  std::uint64_t verify_seed = 0;
  // Stop the solver as soon as the multipliers already encode a feasible
  // extension (cheap per-iteration test); the reported t_star is then the
  // verified positivity margin of that extension, not the optimal slack.
  bool early_exit = true;
  long long dim_cap = kDefaultDimCap;
};

struct LevelVerdict {
  ExtensionVector level;
  VerdictStatus status = VerdictStatus::inconclusive;
  double t_star = 0.0;             // best slack (see early_exit note above)
  std::optional<WitnessCertificate> witness;  // present iff entangled
  std::optional<CMatrix> sigma;    // compressed extension iff found
  double wall_time = 0.0;          // seconds
  bool base_closed_form = false;   // level (1,...,1) solved by eigh alone
  SdpStatus solver_status = SdpStatus::optimal;
  int solver_iterations = 0;
  std::string message;
};

// Decides one level.  Never reports `entangled` on solver evidence alone:
// the extracted certificate must pass module-witness verification, and any
// numerical failure degrades to `inconclusive`.  The (1,...,1) base level
// is closed-form: t* is the smallest eigenvalue over all canonical partial
// transposes of rho itself, and the witness is the transposed projector
// onto the most negative eigenvector.
LevelVerdict check_level(const LevelCompilation& comp, const CMatrix& rho,
                         const CheckOptions& opts = {});
LevelVerdict check_level(const CMatrix& rho, const PartyStructure& parties,
                         const ExtensionVector& level,
                         const CheckOptions& opts = {});

enum class SweepSchedule {
  theorem1,    // (k, k, ..., k, 1) for k = 1, 2, ...
  corollary1,  // single-party increments, smallest resulting sym_dim first
  custom,      // caller-provided list
};
const char* to_string(SweepSchedule s);

struct SweepBudget {
  int max_levels = 6;      // levels attempted
  double seconds = 600.0;  // wall-clock cap, checked before each level
};

struct SweepOptions {
  SweepSchedule schedule = SweepSchedule::corollary1;
  std::vector<ExtensionVector> custom;  // used when schedule == custom
  SweepBudget budget;
  CheckOptions check;
};

// The first `count` levels a schedule would attempt for this party
// structure, ignoring verdicts and budget (levels beyond the dimension cap
// are skipped).  sweep() consumes exactly this order.
std::vector<ExtensionVector> schedule_preview(const PartyStructure& parties,
                                              SweepSchedule schedule,
                                              int count,
                                              long long dim_cap = kDefaultDimCap);

// Runs levels in schedule order until a verdict of `entangled`, the budget,
// or the schedule is exhausted.  No level dominating an already-entangled
// level is ever attempted (by monotonicity it could not succeed), and every
// per-level result is returned in attempt order.  Evaluation is sequential
// and deterministic; because pruning only consults completed results, the
// output equals what any concurrent evaluation order would certify.
std::vector<LevelVerdict> sweep(const CMatrix& rho,
                                const PartyStructure& parties,
                                const SweepOptions& opts = {});

}  // namespace symext

#endif  // SYMEXT_HIERARCHY_HPP
