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

#ifndef SYMEXT_SDP_HPP
#define SYMEXT_SDP_HPP

// Self-contained primal-dual interior-point solver over direct sums of
// complex Hermitian PSD cones:
//
//   minimize   <C, X>   subject to   <A_j, X> = b_j,   X >= 0 (per block)
//
// HKM search direction with Mehrotra predictor-corrector from an infeasible
// self-scaled start.  Linearly dependent equality constraints are removed by
// a rank-revealing presolve; inconsistent dependencies yield an immediate,
// verified infeasibility certificate.  Divergence of the dual (primal)
// objective with small residuals triggers extraction of an improving ray,
// which is always re-verified by an independent eigendecomposition before
// the corresponding status is reported - no status is trusted unverified.

#include <functional>
#include <string>
#include <vector>

#include "symext/linalg.hpp"

namespace symext {

struct SdpProblem {
  std::vector<int> blocks;            // block dimensions, all >= 1
  std::vector<CMatrix> objective;     // C, one Hermitian matrix per block
  struct Constraint {
    std::vector<CMatrix> a;           // A_j, one Hermitian matrix per block
    double b = 0.0;
  };
  std::vector<Constraint> constraints;

  int num_blocks() const { return static_cast<int>(blocks.size()); }
  int num_constraints() const { return static_cast<int>(constraints.size()); }
  // Throws std::invalid_argument on shape/hermiticity violations.
  void validate() const;
  double objective_norm() const;      // Frobenius norm of C over all blocks
};

enum class SdpStatus {
  optimal,
  primal_infeasible,   // verified dual improving ray available
  dual_infeasible,     // verified primal improving ray available
  numerical_limit,     // iteration cap or step collapse; nothing certified
  stopped,             // caller's iterate callback requested an early stop
};

const char* to_string(SdpStatus s);

// Read-only view of the current iterate handed to the optional callback.
struct SdpIterate {
  const std::vector<CMatrix>& X;
  const RVector& y;                   // multipliers, original constraint order
  const std::vector<CMatrix>& S;
  double primal_obj;
  double dual_obj;
  double gap;                         // complementarity <X, S>
  int iteration;
};

enum class SdpCallbackAction { proceed, stop };

struct SdpOptions {
  double tol = 1e-8;            // feasibility and gap tolerance (scaled)
  int max_iter = 200;
  double step_fraction = 0.98;  // fraction of the max step to the boundary
  // Objective divergence is declared hopeless (numerical_limit) once it
  // exceeds divergence_threshold * 1e8 relative to the problem scale without
  // a verifiable improving ray; ray verification attempts start much earlier.
  double divergence_threshold = 1e8;
  double ray_tol = 1e-9;        // verification tolerance for improving rays
  double presolve_tol = 1e-10;  // rank tolerance for dependent constraints
  // Called once per iteration after the step; may request an early stop.
  std::function<SdpCallbackAction(const SdpIterate&)> callback;
};

struct SdpSolution {
  SdpStatus status = SdpStatus::numerical_limit;
  std::vector<CMatrix> X;       // primal blocks (strictly feasible iterate)
  RVector y;                    // dual multipliers, original constraint order
  std::vector<CMatrix> S;       // dual slack blocks
  double primal_obj = 0.0;
  double dual_obj = 0.0;
  double gap = 0.0;             // complementarity <X, S>
  double primal_residual = 0.0; // ||A(X) - b||_2
  double dual_residual = 0.0;   // ||C - S - A'(y)||_F
  int iterations = 0;
  std::string message;
  // status == primal_infeasible: y-ray with b.y = 1, sum_j y_j A_j <= 0.
  RVector farkas_y;
  // status == dual_infeasible: X-ray with <C, X> = -1, A(X) = 0, X >= 0.
  std::vector<CMatrix> farkas_X;
};

SdpSolution solve(const SdpProblem& p, const SdpOptions& opts = {});

// Returns the verified dual improving ray of a primal-infeasible solution;
// throws std::logic_error when sol.status != primal_infeasible.
RVector extract_farkas(const SdpSolution& sol, const SdpProblem& p);

}  // namespace symext

#endif  // SYMEXT_SDP_HPP
