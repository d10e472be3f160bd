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

#ifndef SYMEXT_STATES_HPP
#define SYMEXT_STATES_HPP

// Test-state corpus and the on-disk interchange formats.
//
// State files are JSON documents
//
//   {"dims": [d1, ..., dN], "matrix": [[[re, im], ...], ...]}
//
// with the matrix in row-major order over the computational basis, party 1
// as the most significant index, and complex entries as [re, im] pairs.
// Witness certificate files are JSON documents
//
//   {"dims": [...], "n": [...], "Z": matrix,
//    "Z_S": [{"class": [m1, ..., mN], "matrix": ...}, ...],
//    "residual": r, "value": v}
//
// where each Z_S block lives on the full extended space of level n with
// copies grouped by party (see tensor.hpp for the layout conventions).
// Serialization uses shortest-round-trip number formatting, so a
// serialize/parse cycle reproduces every double to the last bit.

#include <cstdint>
#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

#include "symext/certificate.hpp"
#include "symext/linalg.hpp"
#include "symext/tensor.hpp"

namespace symext {

// Input text that is not valid JSON or lacks required fields.
struct ParseError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Filesystem-level failure (missing file, unwritable path).
struct IoError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

enum class Family {
  product,      // random mixture of `terms` Haar-random pure product states
  bell,         // |Phi+> on 2x2, weight p against white noise
  ghz,          // N-qubit GHZ, weight p against white noise
  w,            // N-qubit W state, weight p against white noise
  werner,       // p |Psi-><Psi-| + (1-p) I/4 on 2x2
  upb_shifts,   // the Shifts-UPB bound entangled 2x2x2 state, weight p
  mixture,      // p * base + (1-p) I/D for a nested base spec
  explicit_state,  // matrix supplied verbatim
};

const char* to_string(Family f);
Family family_from_string(const std::string& name);

struct StateSpec {
  Family family = Family::product;
  std::vector<int> dims;
  double p = 1.0;           // structured-part weight where applicable
  std::uint64_t seed = 0;   // drives the random families
  int terms = 1;            // product family: number of pure product terms
  std::shared_ptr<StateSpec> base;  // mixture family: the state being mixed
  CMatrix matrix;           // explicit_state family

  // Parses {"family": ..., "dims": [...], "p": ..., "seed": ...,
  // "terms": ..., "base": {...}, "matrix": [...]}; unknown fields rejected.
  static StateSpec from_json(const std::string& text);
};

// The 2x2x2 bound entangled state built from the Shifts unextendible
// product basis: rho = (1 - sum_j |psi_j><psi_j|) / 4 with psi_1 = |0,1,+>,
// psi_2 = |1,+,0>, psi_3 = |+,0,1>, psi_4 = |-,-,->.  Entangled, yet PPT
// across all three bipartitions.
CMatrix make_upb_state();

// The published 8x8 integer witness for the state above (trace 26,
// Tr[Z rho_upb] = -3/8).  Kept with exact integer entries; doubles as the
// regression anchor for the basis-ordering convention.
CMatrix upb_witness_fixture();

// Builds the density matrix described by the spec.  Every output is exactly
// hermitian, unit trace, and PSD up to -1e-12.  Throws std::invalid_argument
// on bad parameters (wrong dims for a fixed-dims family, p outside [0,1],
// terms < 1, missing base/matrix).
CMatrix make_family(const StateSpec& spec);

// Checks hermiticity (defect <= herm_tol), unit trace (|Tr - 1| <= herm_tol)
// and positivity (min eig >= -eig_tol) against the party structure; throws
// std::invalid_argument with a specific diagnostic otherwise.
void validate_density(const CMatrix& rho, const PartyStructure& parties,
                      double herm_tol = 1e-10, double eig_tol = 1e-10);

struct StateFile {
  std::vector<int> dims;
  CMatrix rho;
};

std::string state_to_json(const std::vector<int>& dims, const CMatrix& rho);
StateFile state_from_json(const std::string& text);
void save_state(const std::string& path, const std::vector<int>& dims,
                const CMatrix& rho);
StateFile load_state(const std::string& path);

std::string certificate_to_json(const WitnessCertificate& cert);
WitnessCertificate certificate_from_json(const std::string& text);
void save_certificate(const std::string& path,
                      const WitnessCertificate& cert);
WitnessCertificate load_certificate(const std::string& path);

}  // namespace symext

#endif  // SYMEXT_STATES_HPP
