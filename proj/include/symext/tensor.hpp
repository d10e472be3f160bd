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

#ifndef SYMEXT_TENSOR_HPP
#define SYMEXT_TENSOR_HPP

// Multipartite structure-aware operations: partial trace, partial transpose,
// copy-permutation operators, symmetric-subspace isometries/projectors, and
// canonical enumeration of inequivalent partial-transpose classes.
//
// Index conventions (part of the interchange contract):
//  * Party 1 (index 0 here) is the most significant tensor factor.
//  * Extended spaces lay copies out grouped by party: all n_1 copies of the
//    first party, then all n_2 copies of the second, and so on.
//  * Within a party, a transpose class acts on the first m_i copy slots.

#include <cstdint>
#include <vector>

#include "symext/linalg.hpp"

namespace symext {

// Ordered list of local dimensions d_i >= 1; total dimension is their product.
struct PartyStructure {
  std::vector<int> dims;

  int num_parties() const { return static_cast<int>(dims.size()); }
  long long total_dim() const;
  // Throws std::invalid_argument when empty or any d_i < 1.
  void validate() const;
};

// Copies per party, n_i >= 1, defining one hierarchy level.
struct ExtensionVector {
  std::vector<int> copies;

  int num_parties() const { return static_cast<int>(copies.size()); }
  int sum() const;
  void validate(const PartyStructure& parties) const;
  bool is_base() const;  // all ones

  // Componentwise partial order a <= b.
  static bool leq(const ExtensionVector& a, const ExtensionVector& b);
};

// Canonical representative of a partial-transpose subset: m_i counts how many
// copies of party i are transposed.  Canonical form replaces m by its
// complement n - m whenever the complement is lexicographically smaller.
struct TransposeClass {
  std::vector<int> transposed_counts;

  bool is_identity() const;  // all-zero class
  static TransposeClass canonicalize(const std::vector<int>& m,
                                     const ExtensionVector& n);
};

// Isometry from the symmetric subspace Sym^k of k copies of a d-dimensional
// space into the full d^k space.  Columns are the normalized occupation-number
// (bosonic) basis vectors in lexicographic order, so the matrix is
// deterministic and exactly column-orthonormal; P P^dagger is the symmetric
// projector.
struct SymmetricIsometry {
  int local_dim = 0;
  int copies = 0;
  CMatrix matrix;  // d^k rows, binom(d+k-1, k) columns
};

// binom(a, b) as long long; throws on overflow at desk-irrelevant sizes.
long long binom(int a, int b);

// ---------------------------------------------------------------------------
// Core operations on a plain party structure (physical or expanded space).
// ---------------------------------------------------------------------------

// Trace out the listed parties (0-based, any order, no duplicates); remaining
// parties keep their relative order.
CMatrix partial_trace(const CMatrix& x, const PartyStructure& parties,
                      const std::vector<int>& parties_to_trace);

// Transpose the listed parties (0-based).  Pure index permutation.
CMatrix partial_transpose(const CMatrix& x, const PartyStructure& parties,
                          const std::vector<int>& parties_to_transpose);

// Embed an operator acting on a subset of parties (given in increasing order,
// matching the operator's factor order) as op (x) identity on the rest.
CMatrix embed_on_parties(const CMatrix& op, const PartyStructure& parties,
                         const std::vector<int>& acting_parties);

// ---------------------------------------------------------------------------
// Extension-space helpers.
// ---------------------------------------------------------------------------

// Slot dimensions of the extended space: d_i repeated n_i times, grouped by
// party ("copies grouped by party" layout).
PartyStructure expanded_structure(const PartyStructure& parties,
                                  const ExtensionVector& n);

// First slot index of party i's copy block in the expanded layout.
int party_slot_start(const ExtensionVector& n, int party);

// Slots a transpose class acts on: the first m_i copies in each party block.
std::vector<int> class_slots(const ExtensionVector& n,
                             const TransposeClass& cls);

// Unitary permuting the copies of one party: perm is a permutation of
// {0..n_i-1}, and the operator moves the digit in copy slot k to copy slot
// perm[k], acting as identity elsewhere.  Composition satisfies
// V_tau V_sigma = V_{tau o sigma} with (tau o sigma)(k) = tau(sigma(k)).
CMatrix permutation_operator(const PartyStructure& parties,
                             const ExtensionVector& n, int party,
                             const std::vector<int>& perm);

SymmetricIsometry symmetric_isometry(int d, int k);

// Full symmetric isometry L = (x)_i P(d_i, n_i): maps (x)_i Sym^{n_i} into
// the expanded space.  Column dimension is prod_i binom(d_i+n_i-1, n_i).
CMatrix lift_isometry(const PartyStructure& parties, const ExtensionVector& n);

// Support isometry of a transpose class: (x)_i (P(d_i, m_i) x P(d_i, n_i-m_i))
// with the transposed copies grouped first inside each party block.  Any
// operator supported on the symmetric subspace has its class-S partial
// transpose supported on the range of this isometry, so conjugating by it
// compresses the transposed operator without losing spectrum.
CMatrix class_isometry(const PartyStructure& parties, const ExtensionVector& n,
                       const TransposeClass& cls);

// Partial transpose of an expanded-space operator over a class's slots.
CMatrix class_transpose(const CMatrix& x, const PartyStructure& parties,
                        const ExtensionVector& n, const TransposeClass& cls);

// One representative per equivalence class of partial transposes under
// (a) copy permutations within each party (only counts matter) and
// (b) complementation m <-> n-m; includes the all-zero class; output sorted
// lexicographically on the canonical form.
std::vector<TransposeClass> enumerate_transpose_classes(
    const ExtensionVector& n);

}  // namespace symext

#endif  // SYMEXT_TENSOR_HPP
