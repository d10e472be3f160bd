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

#include "symext/tensor.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>
#include <stdexcept>

namespace symext {

namespace {

// Global row-major strides for a slot-dim list: stride[i] = prod_{j>i} d_j.
std::vector<long long> strides_of(const std::vector<int>& dims) {
  std::vector<long long> str(dims.size(), 1);
  for (int i = static_cast<int>(dims.size()) - 2; i >= 0; --i) {
    str[i] = str[i + 1] * dims[i + 1];
  }
  return str;
}

// For a subset of slots (ascending), the full-space offset of every combined
// subset index, with the first listed slot most significant.
std::vector<long long> subset_offsets(const std::vector<int>& dims,
                                      const std::vector<long long>& strides,
                                      const std::vector<int>& subset) {
  long long sub_dim = 1;
  for (int s : subset) sub_dim *= dims[s];
  std::vector<long long> offsets(static_cast<std::size_t>(sub_dim), 0);
  if (subset.empty()) return offsets;  // single empty-product index
  std::vector<int> digit(subset.size(), 0);
  for (long long k = 0; k < sub_dim; ++k) {
    long long off = 0;
    for (std::size_t s = 0; s < subset.size(); ++s) {
      off += digit[s] * strides[subset[s]];
    }
    offsets[static_cast<std::size_t>(k)] = off;
    for (int s = static_cast<int>(subset.size()) - 1; s >= 0; --s) {
      if (++digit[s] < dims[subset[s]]) break;
      digit[s] = 0;
    }
  }
  return offsets;
}

std::vector<int> complement_of(const std::vector<int>& subset, int n) {
  std::vector<int> rest;
  rest.reserve(n - subset.size());
  std::size_t k = 0;
  for (int i = 0; i < n; ++i) {
    if (k < subset.size() && subset[k] == i) {
      ++k;
    } else {
      rest.push_back(i);
    }
  }
  return rest;
}

std::vector<int> sorted_unique(std::vector<int> v) {
  std::sort(v.begin(), v.end());
  if (std::adjacent_find(v.begin(), v.end()) != v.end()) {
    throw std::invalid_argument("party index set contains duplicates");
  }
  return v;
}

void check_subset(const std::vector<int>& subset, int n, const char* who) {
  for (int s : subset) {
    if (s < 0 || s >= n) {
      throw std::invalid_argument(std::string(who) +
                                  ": party index out of range");
    }
  }
}

}  // namespace

long long PartyStructure::total_dim() const {
  long long d = 1;
  for (int x : dims) d *= x;
  return d;
}

void PartyStructure::validate() const {
  if (dims.empty()) {
    throw std::invalid_argument("PartyStructure: no parties");
  }
  for (int d : dims) {
    if (d < 1) throw std::invalid_argument("PartyStructure: dimension < 1");
  }
}

int ExtensionVector::sum() const {
  int s = 0;
  for (int c : copies) s += c;
  return s;
}

void ExtensionVector::validate(const PartyStructure& parties) const {
  if (copies.size() != parties.dims.size()) {
    throw std::invalid_argument(
        "ExtensionVector: length does not match party count");
  }
  for (int c : copies) {
    if (c < 1) throw std::invalid_argument("ExtensionVector: copies < 1");
  }
}

bool ExtensionVector::is_base() const {
  return std::all_of(copies.begin(), copies.end(),
                     [](int c) { return c == 1; });
}

bool ExtensionVector::leq(const ExtensionVector& a, const ExtensionVector& b) {
  if (a.copies.size() != b.copies.size()) return false;
  for (std::size_t i = 0; i < a.copies.size(); ++i) {
    if (a.copies[i] > b.copies[i]) return false;
  }
  return true;
}

bool TransposeClass::is_identity() const {
  return std::all_of(transposed_counts.begin(), transposed_counts.end(),
                     [](int m) { return m == 0; });
}

TransposeClass TransposeClass::canonicalize(const std::vector<int>& m,
                                            const ExtensionVector& n) {
  if (m.size() != n.copies.size()) {
    throw std::invalid_argument("TransposeClass: length mismatch");
  }
  std::vector<int> comp(m.size());
  for (std::size_t i = 0; i < m.size(); ++i) {
    if (m[i] < 0 || m[i] > n.copies[i]) {
      throw std::invalid_argument("TransposeClass: count out of range");
    }
    comp[i] = n.copies[i] - m[i];
  }
  return TransposeClass{comp < m ? comp : m};
}

long long binom(int a, int b) {
  if (b < 0 || b > a) return 0;
  b = std::min(b, a - b);
  long long r = 1;
  for (int i = 1; i <= b; ++i) {
    r = r * (a - b + i) / i;  // exact: r always divisible at step i
  }
  return r;
}

CMatrix partial_trace(const CMatrix& x, const PartyStructure& parties,
                      const std::vector<int>& parties_to_trace) {
  parties.validate();
  const int n = parties.num_parties();
  if (x.rows() != parties.total_dim() || x.cols() != x.rows()) {
    throw std::invalid_argument("partial_trace: operator/structure mismatch");
  }
  const std::vector<int> traced = sorted_unique(parties_to_trace);
  check_subset(traced, n, "partial_trace");
  const std::vector<int> keep = complement_of(traced, n);
  const auto strides = strides_of(parties.dims);
  const auto off_keep = subset_offsets(parties.dims, strides, keep);
  const auto off_tr = subset_offsets(parties.dims, strides, traced);
  const long long dk = static_cast<long long>(off_keep.size());
  CMatrix out = CMatrix::Zero(dk, dk);
  for (long long r = 0; r < dk; ++r) {
    for (long long c = 0; c < dk; ++c) {
      Complex acc(0.0, 0.0);
      for (long long t = 0; t < static_cast<long long>(off_tr.size()); ++t) {
        acc += x(off_keep[r] + off_tr[t], off_keep[c] + off_tr[t]);
      }
      out(r, c) = acc;
    }
  }
  return out;
}

CMatrix partial_transpose(const CMatrix& x, const PartyStructure& parties,
                          const std::vector<int>& parties_to_transpose) {
  parties.validate();
  const int n = parties.num_parties();
  if (x.rows() != parties.total_dim() || x.cols() != x.rows()) {
    throw std::invalid_argument(
        "partial_transpose: operator/structure mismatch");
  }
  const std::vector<int> sub = sorted_unique(parties_to_transpose);
  check_subset(sub, n, "partial_transpose");
  const std::vector<int> rest = complement_of(sub, n);
  const auto strides = strides_of(parties.dims);
  const auto off_s = subset_offsets(parties.dims, strides, sub);
  const auto off_r = subset_offsets(parties.dims, strides, rest);
  const long long ds = static_cast<long long>(off_s.size());
  const long long dr = static_cast<long long>(off_r.size());
  CMatrix out(x.rows(), x.cols());
  // Row digits on the transposed slots swap with the column digits there.
  for (long long a = 0; a < ds; ++a) {
    for (long long b = 0; b < ds; ++b) {
      for (long long r = 0; r < dr; ++r) {
        for (long long q = 0; q < dr; ++q) {
          out(off_s[a] + off_r[r], off_s[b] + off_r[q]) =
              x(off_s[b] + off_r[r], off_s[a] + off_r[q]);
        }
      }
    }
  }
  return out;
}

CMatrix embed_on_parties(const CMatrix& op, const PartyStructure& parties,
                         const std::vector<int>& acting_parties) {
  parties.validate();
  const int n = parties.num_parties();
  const std::vector<int> act = sorted_unique(acting_parties);
  check_subset(act, n, "embed_on_parties");
  const std::vector<int> rest = complement_of(act, n);
  const auto strides = strides_of(parties.dims);
  const auto off_a = subset_offsets(parties.dims, strides, act);
  const auto off_r = subset_offsets(parties.dims, strides, rest);
  const long long da = static_cast<long long>(off_a.size());
  if (op.rows() != da || op.cols() != da) {
    throw std::invalid_argument("embed_on_parties: operator size mismatch");
  }
  const long long d = parties.total_dim();
  CMatrix out = CMatrix::Zero(d, d);
  for (long long ia = 0; ia < da; ++ia) {
    for (long long ja = 0; ja < da; ++ja) {
      const Complex v = op(ia, ja);
      if (v == Complex(0.0, 0.0)) continue;
      for (long long r = 0; r < static_cast<long long>(off_r.size()); ++r) {
        out(off_a[ia] + off_r[r], off_a[ja] + off_r[r]) = v;
      }
    }
  }
  return out;
}

PartyStructure expanded_structure(const PartyStructure& parties,
                                  const ExtensionVector& n) {
  parties.validate();
  n.validate(parties);
  PartyStructure out;
  for (std::size_t i = 0; i < parties.dims.size(); ++i) {
    for (int c = 0; c < n.copies[i]; ++c) out.dims.push_back(parties.dims[i]);
  }
  return out;
}

int party_slot_start(const ExtensionVector& n, int party) {
  if (party < 0 || party >= n.num_parties()) {
    throw std::invalid_argument("party_slot_start: party out of range");
  }
  int s = 0;
  for (int i = 0; i < party; ++i) s += n.copies[i];
  return s;
}

std::vector<int> class_slots(const ExtensionVector& n,
                             const TransposeClass& cls) {
  if (cls.transposed_counts.size() != n.copies.size()) {
    throw std::invalid_argument("class_slots: class/level length mismatch");
  }
  std::vector<int> slots;
  int start = 0;
  for (std::size_t i = 0; i < n.copies.size(); ++i) {
    const int m = cls.transposed_counts[i];
    if (m < 0 || m > n.copies[i]) {
      throw std::invalid_argument("class_slots: count out of range");
    }
    for (int c = 0; c < m; ++c) slots.push_back(start + c);
    start += n.copies[i];
  }
  return slots;
}

CMatrix permutation_operator(const PartyStructure& parties,
                             const ExtensionVector& n, int party,
                             const std::vector<int>& perm) {
  parties.validate();
  n.validate(parties);
  if (party < 0 || party >= parties.num_parties()) {
    throw std::invalid_argument("permutation_operator: party out of range");
  }
  const int k = n.copies[party];
  if (static_cast<int>(perm.size()) != k) {
    throw std::invalid_argument("permutation_operator: wrong permutation size");
  }
  {
    std::vector<bool> seen(k, false);
    for (int p : perm) {
      if (p < 0 || p >= k || seen[p]) {
        throw std::invalid_argument(
            "permutation_operator: not a permutation");
      }
      seen[p] = true;
    }
  }
  const PartyStructure ext = expanded_structure(parties, n);
  const auto strides = strides_of(ext.dims);
  const int start = party_slot_start(n, party);
  const long long d = ext.total_dim();
  const int nslots = ext.num_parties();
  CMatrix out = CMatrix::Zero(d, d);
  std::vector<int> digit(nslots, 0);
  for (long long idx = 0; idx < d; ++idx) {
    long long target = 0;
    for (int s = 0; s < nslots; ++s) {
      int dest = s;
      if (s >= start && s < start + k) dest = start + perm[s - start];
      target += digit[s] * strides[dest];
    }
    out(target, idx) = 1.0;
    for (int s = nslots - 1; s >= 0; --s) {
      if (++digit[s] < ext.dims[s]) break;
      digit[s] = 0;
    }
  }
  return out;
}

SymmetricIsometry symmetric_isometry(int d, int k) {
  if (d < 1 || k < 0) {
    throw std::invalid_argument("symmetric_isometry: need d >= 1, k >= 0");
  }
  SymmetricIsometry iso;
  iso.local_dim = d;
  iso.copies = k;
  if (k == 0) {
    iso.matrix = CMatrix::Identity(1, 1);  // empty tensor factor
    return iso;
  }
  // Columns: nondecreasing strings (combinations with repetition) in
  // ascending lexicographic order; each is the flat-amplitude superposition
  // of all distinct rearrangements.
  std::map<std::vector<int>, int> col_of;
  {
    std::vector<int> s(k, 0);
    int col = 0;
    while (true) {
      col_of.emplace(s, col++);
      int i = k - 1;
      while (i >= 0 && s[i] == d - 1) --i;
      if (i < 0) break;
      const int v = s[i] + 1;
      for (int j = i; j < k; ++j) s[j] = v;
    }
  }
  const long long rows = static_cast<long long>(std::llround(std::pow(d, k)));
  const long long cols = binom(d + k - 1, k);
  std::vector<long long> weight(static_cast<std::size_t>(cols), 0);
  std::vector<int> col_index(static_cast<std::size_t>(rows), 0);
  std::vector<int> digits(k, 0);
  for (long long r = 0; r < rows; ++r) {
    std::vector<int> sorted = digits;
    std::sort(sorted.begin(), sorted.end());
    const int c = col_of.at(sorted);
    col_index[static_cast<std::size_t>(r)] = c;
    ++weight[static_cast<std::size_t>(c)];
    for (int s = k - 1; s >= 0; --s) {
      if (++digits[s] < d) break;
      digits[s] = 0;
    }
  }
  iso.matrix = CMatrix::Zero(rows, cols);
  for (long long r = 0; r < rows; ++r) {
    const int c = col_index[static_cast<std::size_t>(r)];
    iso.matrix(r, c) = 1.0 / std::sqrt(static_cast<double>(
                                 weight[static_cast<std::size_t>(c)]));
  }
  return iso;
}

CMatrix lift_isometry(const PartyStructure& parties,
                      const ExtensionVector& n) {
  parties.validate();
  n.validate(parties);
  CMatrix out = CMatrix::Identity(1, 1);
  for (std::size_t i = 0; i < parties.dims.size(); ++i) {
    out = kron(out, symmetric_isometry(parties.dims[i], n.copies[i]).matrix);
  }
  return out;
}

CMatrix class_isometry(const PartyStructure& parties, const ExtensionVector& n,
                       const TransposeClass& cls) {
  parties.validate();
  n.validate(parties);
  if (cls.transposed_counts.size() != parties.dims.size()) {
    throw std::invalid_argument("class_isometry: class length mismatch");
  }
  CMatrix out = CMatrix::Identity(1, 1);
  for (std::size_t i = 0; i < parties.dims.size(); ++i) {
    const int d = parties.dims[i];
    const int m = cls.transposed_counts[i];
    if (m < 0 || m > n.copies[i]) {
      throw std::invalid_argument("class_isometry: count out of range");
    }
    out = kron(out, kron(symmetric_isometry(d, m).matrix,
                         symmetric_isometry(d, n.copies[i] - m).matrix));
  }
  return out;
}

CMatrix class_transpose(const CMatrix& x, const PartyStructure& parties,
                        const ExtensionVector& n, const TransposeClass& cls) {
  return partial_transpose(x, expanded_structure(parties, n),
                           class_slots(n, cls));
}

std::vector<TransposeClass> enumerate_transpose_classes(
    const ExtensionVector& n) {
  for (int c : n.copies) {
    if (c < 1) throw std::invalid_argument("enumerate: copies < 1");
  }
  const int np = n.num_parties();
  std::set<std::vector<int>> canon;
  std::vector<int> m(np, 0);
  while (true) {
    canon.insert(TransposeClass::canonicalize(m, n).transposed_counts);
    int i = np - 1;
    while (i >= 0 && m[i] == n.copies[i]) --i;
    if (i < 0) break;
    ++m[i];
    for (int j = i + 1; j < np; ++j) m[j] = 0;
  }
  std::vector<TransposeClass> out;
  out.reserve(canon.size());
  for (const auto& v : canon) out.push_back(TransposeClass{v});
  return out;
}

}  // namespace symext
