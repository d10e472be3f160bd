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

#include "symext/states.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "symext/detail/rng.hpp"

namespace symext {

namespace {

using nlohmann::json;

CVector basis_ket(int dim, int idx) {
  CVector v = CVector::Zero(dim);
  v(idx) = 1.0;
  return v;
}

CVector kron_kets(const std::vector<CVector>& kets) {
  CVector out = CVector::Ones(1);
  for (const auto& k : kets) {
    CVector next(out.size() * k.size());
    for (Eigen::Index i = 0; i < out.size(); ++i) {
      next.segment(i * k.size(), k.size()) = out(i) * k;
    }
    out = next;
  }
  return out;
}

CMatrix projector(const CVector& v) { return v * v.adjoint(); }

void require(bool ok, const std::string& what) {
  if (!ok) throw std::invalid_argument("make_family: " + what);
}

void require_dims(const StateSpec& spec, const std::vector<int>& want) {
  require(spec.dims == want || spec.dims.empty(),
          std::string("family ") + to_string(spec.family) +
              " has fixed dimensions");
}

void require_qubits(const StateSpec& spec) {
  require(spec.dims.size() >= 2, "family needs at least two parties");
  for (int d : spec.dims) require(d == 2, "family is defined on qubits");
}

double require_weight(const StateSpec& spec) {
  require(spec.p >= 0.0 && spec.p <= 1.0, "weight p must lie in [0, 1]");
  return spec.p;
}

// p * structured + (1 - p) * I/D, renormalized exactly.
CMatrix with_white_noise(const CMatrix& structured, double p) {
  const auto dim = structured.rows();
  CMatrix out = p * structured +
                ((1.0 - p) / static_cast<double>(dim)) *
                    CMatrix::Identity(dim, dim);
  out = hermitize(out);
  out /= out.trace().real();
  return out;
}

// ---------------------------------------------------------------------------
// JSON helpers shared by the state and certificate formats.
// ---------------------------------------------------------------------------

json matrix_to_json(const CMatrix& m) {
  json rows = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      row.push_back({m(i, j).real(), m(i, j).imag()});
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

CMatrix matrix_from_json(const json& rows, const std::string& field) {
  if (!rows.is_array() || rows.empty()) {
    throw ParseError(field + ": expected a non-empty array of rows");
  }
  const auto r = static_cast<Eigen::Index>(rows.size());
  if (!rows[0].is_array()) {
    throw ParseError(field + ": rows must be arrays");
  }
  const auto c = static_cast<Eigen::Index>(rows[0].size());
  CMatrix m(r, c);
  for (Eigen::Index i = 0; i < r; ++i) {
    const auto& row = rows[i];
    if (!row.is_array() || static_cast<Eigen::Index>(row.size()) != c) {
      throw ParseError(field + ": ragged rows");
    }
    for (Eigen::Index j = 0; j < c; ++j) {
      const auto& e = row[j];
      if (!e.is_array() || e.size() != 2 || !e[0].is_number() ||
          !e[1].is_number()) {
        throw ParseError(field + ": entries must be [re, im] pairs");
      }
      m(i, j) = Complex(e[0].get<double>(), e[1].get<double>());
    }
  }
  return m;
}

std::vector<int> dims_from_json(const json& j, const std::string& field) {
  if (!j.is_array() || j.empty()) {
    throw ParseError(field + ": expected a non-empty integer array");
  }
  std::vector<int> dims;
  for (const auto& d : j) {
    if (!d.is_number_integer() || d.get<int>() < 1) {
      throw ParseError(field + ": entries must be positive integers");
    }
    dims.push_back(d.get<int>());
  }
  return dims;
}

json parse_document(const std::string& text) {
  json doc = json::parse(text, nullptr, false);
  if (doc.is_discarded()) throw ParseError("input is not valid JSON");
  if (!doc.is_object()) throw ParseError("top-level JSON object expected");
  return doc;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in.good()) throw IoError("cannot open " + path);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out.good()) throw IoError("cannot write " + path);
  out << text;
  if (!out.good()) throw IoError("write failed for " + path);
}

StateSpec spec_from_json_value(const json& doc);

}  // namespace

const char* to_string(Family f) {
  switch (f) {
    case Family::product: return "product";
    case Family::bell: return "bell";
    case Family::ghz: return "ghz";
    case Family::w: return "w";
    case Family::werner: return "werner";
    case Family::upb_shifts: return "upb_shifts";
    case Family::mixture: return "mixture";
    case Family::explicit_state: return "explicit";
  }
  return "unknown";
}

Family family_from_string(const std::string& name) {
  for (Family f : {Family::product, Family::bell, Family::ghz, Family::w,
                   Family::werner, Family::upb_shifts, Family::mixture,
                   Family::explicit_state}) {
    if (name == to_string(f)) return f;
  }
  throw std::invalid_argument("unknown state family: " + name);
}

CMatrix make_upb_state() {
  const CVector zero = basis_ket(2, 0);
  const CVector one = basis_ket(2, 1);
  const CVector plus = (zero + one) / std::sqrt(2.0);
  const CVector minus = (zero - one) / std::sqrt(2.0);

  const std::vector<CVector> psi = {
      kron_kets({zero, one, plus}),
      kron_kets({one, plus, zero}),
      kron_kets({plus, zero, one}),
      kron_kets({minus, minus, minus}),
  };
  CMatrix rho = CMatrix::Identity(8, 8);
  for (const auto& v : psi) rho -= projector(v);
  rho /= 4.0;
  return hermitize(rho);
}

CMatrix upb_witness_fixture() {
  static const int z[8][8] = {
      {1, -1, -1, 1, -1, 1, 1, -1},  {-1, 4, 1, 0, 1, 3, -1, 1},
      {-1, 1, 4, 3, 1, -1, 0, 1},    {1, 0, 3, 4, -1, 1, 1, -1},
      {-1, 1, 1, -1, 4, 0, 3, 1},    {1, 3, -1, 1, 0, 4, 1, -1},
      {1, -1, 0, 1, 3, 1, 4, -1},    {-1, 1, 1, -1, 1, -1, -1, 1},
  };
  CMatrix m(8, 8);
  for (int i = 0; i < 8; ++i) {
    for (int j = 0; j < 8; ++j) m(i, j) = static_cast<double>(z[i][j]);
  }
  return m;
}

CMatrix make_family(const StateSpec& spec) {
  switch (spec.family) {
    case Family::product: {
      require(!spec.dims.empty(), "product family needs dims");
      for (int d : spec.dims) require(d >= 1, "dims must be positive");
      require(spec.terms >= 1, "product family needs terms >= 1");
      detail::Rng rng(spec.seed);
      const auto weights = rng.simplex_weights(spec.terms);
      PartyStructure parties{spec.dims};
      CMatrix rho = CMatrix::Zero(parties.total_dim(), parties.total_dim());
      for (int t = 0; t < spec.terms; ++t) {
        std::vector<CVector> kets;
        kets.reserve(spec.dims.size());
        for (int d : spec.dims) kets.push_back(rng.haar_ket(d));
        rho += weights[t] * projector(kron_kets(kets));
      }
      rho = hermitize(rho);
      rho /= rho.trace().real();
      return rho;
    }
    case Family::bell: {
      require_dims(spec, {2, 2});
      CVector phi = CVector::Zero(4);
      phi(0) = phi(3) = 1.0 / std::sqrt(2.0);
      return with_white_noise(projector(phi), require_weight(spec));
    }
    case Family::ghz: {
      require_qubits(spec);
      const auto n = spec.dims.size();
      const auto dim = static_cast<Eigen::Index>(1) << n;
      CVector ghz = CVector::Zero(dim);
      ghz(0) = ghz(dim - 1) = 1.0 / std::sqrt(2.0);
      return with_white_noise(projector(ghz), require_weight(spec));
    }
    case Family::w: {
      require_qubits(spec);
      const auto n = spec.dims.size();
      const auto dim = static_cast<Eigen::Index>(1) << n;
      CVector w = CVector::Zero(dim);
      for (std::size_t i = 0; i < n; ++i) {
        // |0...010...0> with the 1 on party i (party 1 most significant).
        w(static_cast<Eigen::Index>(1) << (n - 1 - i)) =
            1.0 / std::sqrt(static_cast<double>(n));
      }
      return with_white_noise(projector(w), require_weight(spec));
    }
    case Family::werner: {
      require_dims(spec, {2, 2});
      CVector singlet = CVector::Zero(4);
      singlet(1) = 1.0 / std::sqrt(2.0);
      singlet(2) = -1.0 / std::sqrt(2.0);
      return with_white_noise(projector(singlet), require_weight(spec));
    }
    case Family::upb_shifts: {
      require_dims(spec, {2, 2, 2});
      return with_white_noise(make_upb_state(), require_weight(spec));
    }
    case Family::mixture: {
      require(spec.base != nullptr, "mixture family needs a base spec");
      const CMatrix base = make_family(*spec.base);
      return with_white_noise(base, require_weight(spec));
    }
    case Family::explicit_state: {
      require(!spec.dims.empty(), "explicit family needs dims");
      PartyStructure parties{spec.dims};
      validate_density(spec.matrix, parties);
      CMatrix rho = hermitize(spec.matrix);
      rho /= rho.trace().real();
      return rho;
    }
  }
  throw std::invalid_argument("make_family: unknown family");
}

void validate_density(const CMatrix& rho, const PartyStructure& parties,
                      double herm_tol, double eig_tol) {
  parties.validate();
  const auto dim = static_cast<Eigen::Index>(parties.total_dim());
  if (rho.rows() != dim || rho.cols() != dim) {
    std::ostringstream msg;
    msg << "density matrix is " << rho.rows() << "x" << rho.cols()
        << " but the party dimensions require " << dim << "x" << dim;
    throw std::invalid_argument(msg.str());
  }
  const double defect = herm_defect(rho);
  if (defect > herm_tol) {
    std::ostringstream msg;
    msg << "density matrix is not hermitian (defect " << defect << ")";
    throw std::invalid_argument(msg.str());
  }
  const double tr = rho.trace().real();
  if (std::abs(tr - 1.0) > herm_tol) {
    std::ostringstream msg;
    msg << "density matrix trace is " << tr << ", expected 1";
    throw std::invalid_argument(msg.str());
  }
  const double lmin = min_eig(hermitize(rho));
  if (lmin < -eig_tol) {
    std::ostringstream msg;
    msg << "density matrix has negative eigenvalue " << lmin;
    throw std::invalid_argument(msg.str());
  }
}

namespace {

StateSpec spec_from_json_value(const json& doc) {
  StateSpec spec;
  if (!doc.contains("family") || !doc["family"].is_string()) {
    throw ParseError("spec: missing \"family\" string");
  }
  try {
    spec.family = family_from_string(doc["family"].get<std::string>());
  } catch (const std::invalid_argument& e) {
    throw ParseError(std::string("spec: ") + e.what());
  }
  for (const auto& [key, value] : doc.items()) {
    if (key == "family") {
      continue;
    } else if (key == "dims") {
      spec.dims = dims_from_json(value, "spec.dims");
    } else if (key == "p") {
      if (!value.is_number()) throw ParseError("spec.p: number expected");
      spec.p = value.get<double>();
    } else if (key == "seed") {
      if (!value.is_number_unsigned()) {
        throw ParseError("spec.seed: nonnegative integer expected");
      }
      spec.seed = value.get<std::uint64_t>();
    } else if (key == "terms") {
      if (!value.is_number_integer()) {
        throw ParseError("spec.terms: integer expected");
      }
      spec.terms = value.get<int>();
    } else if (key == "base") {
      if (!value.is_object()) throw ParseError("spec.base: object expected");
      spec.base = std::make_shared<StateSpec>(spec_from_json_value(value));
    } else if (key == "matrix") {
      spec.matrix = matrix_from_json(value, "spec.matrix");
    } else {
      throw ParseError("spec: unknown field \"" + key + "\"");
    }
  }
  return spec;
}

}  // namespace

StateSpec StateSpec::from_json(const std::string& text) {
  return spec_from_json_value(parse_document(text));
}

std::string state_to_json(const std::vector<int>& dims, const CMatrix& rho) {
  json doc;
  doc["dims"] = dims;
  doc["matrix"] = matrix_to_json(rho);
  return doc.dump(1);
}

StateFile state_from_json(const std::string& text) {
  const json doc = parse_document(text);
  if (!doc.contains("dims")) throw ParseError("state: missing \"dims\"");
  if (!doc.contains("matrix")) throw ParseError("state: missing \"matrix\"");
  StateFile out;
  out.dims = dims_from_json(doc["dims"], "state.dims");
  out.rho = matrix_from_json(doc["matrix"], "state.matrix");
  return out;
}

void save_state(const std::string& path, const std::vector<int>& dims,
                const CMatrix& rho) {
  write_file(path, state_to_json(dims, rho) + "\n");
}

StateFile load_state(const std::string& path) {
  return state_from_json(read_file(path));
}

std::string certificate_to_json(const WitnessCertificate& cert) {
  json doc;
  doc["dims"] = cert.parties.dims;
  doc["n"] = cert.level.copies;
  doc["Z"] = matrix_to_json(cert.Z);
  json blocks = json::array();
  for (const auto& [cls, mat] : cert.blocks) {
    json b;
    b["class"] = cls.transposed_counts;
    b["matrix"] = matrix_to_json(mat);
    blocks.push_back(std::move(b));
  }
  doc["Z_S"] = std::move(blocks);
  doc["residual"] = cert.identity_residual;
  doc["value"] = cert.value;
  return doc.dump(1);
}

WitnessCertificate certificate_from_json(const std::string& text) {
  const json doc = parse_document(text);
  for (const char* field : {"dims", "n", "Z", "Z_S", "residual", "value"}) {
    if (!doc.contains(field)) {
      throw ParseError(std::string("certificate: missing \"") + field +
                       "\"");
    }
  }
  WitnessCertificate cert;
  cert.parties.dims = dims_from_json(doc["dims"], "certificate.dims");
  const json& n = doc["n"];
  if (!n.is_array() || n.size() != cert.parties.dims.size()) {
    throw ParseError("certificate.n: length must match dims");
  }
  for (const auto& c : n) {
    if (!c.is_number_integer() || c.get<int>() < 1) {
      throw ParseError("certificate.n: entries must be positive integers");
    }
    cert.level.copies.push_back(c.get<int>());
  }
  cert.Z = matrix_from_json(doc["Z"], "certificate.Z");
  if (!doc["Z_S"].is_array()) {
    throw ParseError("certificate.Z_S: array expected");
  }
  for (const auto& b : doc["Z_S"]) {
    if (!b.is_object() || !b.contains("class") || !b.contains("matrix")) {
      throw ParseError("certificate.Z_S: entries need class and matrix");
    }
    TransposeClass cls;
    if (!b["class"].is_array() ||
        b["class"].size() != cert.parties.dims.size()) {
      throw ParseError("certificate.Z_S: class length must match dims");
    }
    for (const auto& c : b["class"]) {
      if (!c.is_number_integer() || c.get<int>() < 0) {
        throw ParseError("certificate.Z_S: class entries must be >= 0");
      }
      cls.transposed_counts.push_back(c.get<int>());
    }
    cert.blocks.emplace_back(cls,
                             matrix_from_json(b["matrix"], "certificate.Z_S"));
  }
  if (!doc["residual"].is_number() || !doc["value"].is_number()) {
    throw ParseError("certificate: residual and value must be numbers");
  }
  cert.identity_residual = doc["residual"].get<double>();
  cert.value = doc["value"].get<double>();
  return cert;
}

void save_certificate(const std::string& path,
                      const WitnessCertificate& cert) {
  write_file(path, certificate_to_json(cert) + "\n");
}

WitnessCertificate load_certificate(const std::string& path) {
  return certificate_from_json(read_file(path));
}

}  // namespace symext
