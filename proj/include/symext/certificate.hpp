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

#ifndef SYMEXT_CERTIFICATE_HPP
#define SYMEXT_CERTIFICATE_HPP

// The portable entanglement-witness certificate.  A certificate claims that
// the hermitian observable Z on the physical space has negative expectation
// on the target state while being nonnegative on every fully separable
// state.  The claim is backed by PSD blocks Z_S on the extended space of the
// hierarchy level n, tied to Z by the projected operator identity
//
//   pi (Z (x) I) pi  =  pi (sum_S Z_S^{T_S}) pi
//
// where pi projects onto the per-party symmetric subspaces of the extended
// space and T_S runs over the canonical transpose classes of level n.  A
// third party can re-verify everything in this file with an eigensolver and
// the tensor-layout conventions documented in tensor.hpp - no SDP required.

#include <utility>
#include <vector>

#include "symext/linalg.hpp"
#include "symext/tensor.hpp"

namespace symext {

struct WitnessCertificate {
  PartyStructure parties;   // physical party dimensions
  ExtensionVector level;    // hierarchy level n the blocks live on
  CMatrix Z;                // witness on the physical space
  // One PSD block per canonical transpose class, on the full extended
  // space (copies grouped by party), in enumerate_transpose_classes order.
  std::vector<std::pair<TransposeClass, CMatrix>> blocks;
  double identity_residual = 0.0;  // Frobenius defect of the identity above
  double value = 0.0;              // Tr[Z rho] for the state it was built on
};

}  // namespace symext

#endif  // SYMEXT_CERTIFICATE_HPP
