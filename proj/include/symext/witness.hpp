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

#ifndef SYMEXT_WITNESS_HPP
#define SYMEXT_WITNESS_HPP

// Independent certificate verification.  Everything here is deliberately
// decoupled from the SDP solver: the dual identity is recomputed from
// scratch on the extended space, positivity of the blocks is checked by
// fresh eigendecompositions, and nonnegativity on product states is probed
// by Haar sampling plus deterministic block-coordinate refinement.  A
// certificate is accepted only on evidence this module derives itself.

#include <cstdint>
#include <string>
#include <vector>

#include "symext/certificate.hpp"
#include "symext/linalg.hpp"
#include "symext/tensor.hpp"

namespace symext {

// Stream of Haar-random pure product states |psi_1> (x) ... (x) |psi_N|.
class ProductStateSampler {
 public:
  ProductStateSampler(PartyStructure parties, std::uint64_t seed);
  ~ProductStateSampler();
  ProductStateSampler(const ProductStateSampler&) = delete;
  ProductStateSampler& operator=(const ProductStateSampler&) = delete;

  // Local kets of the next sample, one per party.
  std::vector<CVector> next_kets();
  // The next sample as a full tensor-product ket.
  CVector next();

  const PartyStructure& parties() const { return parties_; }

 private:
  PartyStructure parties_;
  struct Impl;
  Impl* impl_;
};

struct VerifyOptions {
  int samples = 100000;      // Haar product states for the positivity probe
  std::uint64_t seed = 0;    // sampling seed (reports stay reproducible)
  double block_eig_tol = 1e-9;   // (a) min eig of every Z_S block
  double residual_tol = 1e-7;    // (b) scaled by max(1, ||Z||_F)
  double sample_tol = 1e-9;      // (d) sampled product minimum
};

struct VerifyReport {
  std::vector<double> block_min_eigs;  // per certificate block, stored order
  double min_block_eig = 0.0;          // (a)
  double identity_residual = 0.0;      // (b) recomputed, never trusted
  double value = 0.0;                  // (c) Tr[Z rho] recomputed
  double sampled_min = 0.0;            // (d)
  bool valid = false;
  std::string failure;  // first violated condition, empty when valid
};

// Recomputes the dual-identity defect || pi (Z (x) I - sum_S Z_S^{T_S}) pi ||_F
// on the full extended space of the certificate's level.
double certificate_residual(const WitnessCertificate& cert);

// Full independent verification; throws std::invalid_argument on any shape
// or hermiticity inconsistency between the certificate, the state, and the
// canonical transpose classes of the level.
VerifyReport verify_certificate(const WitnessCertificate& cert,
                                const CMatrix& rho,
                                const VerifyOptions& opts = {});

struct ProductMinimum {
  double value = 0.0;
  std::vector<CVector> kets;  // optimizing local kets, one per party
};

// Minimizes <x_1...x_N| Z |x_1...x_N> over pure product states by
// block-coordinate descent: with all parties but i fixed, the optimal
// |x_i> is the minimum eigenvector of the partially contracted operator.
// The objective is monotone nonincreasing across updates; the best value
// over `restarts` Haar-random starts is returned.
ProductMinimum product_minimize(const CMatrix& z,
                                const PartyStructure& parties,
                                int restarts = 20, int sweeps = 100,
                                std::uint64_t seed = 0);

}  // namespace symext

#endif  // SYMEXT_WITNESS_HPP
