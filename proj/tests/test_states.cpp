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

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <string>
#include <vector>

#include "symext/states.hpp"
#include "test_support.hpp"

using namespace symext;
using symext::testing::Rng;

namespace {

CVector upb_ket(int a, int b, int c) {
  // a/b/c in {0, 1, 2, 3} meaning |0>, |1>, |+>, |->.
  auto local = [](int code) {
    CVector v(2);
    const double s = 1.0 / std::sqrt(2.0);
    switch (code) {
      case 0: v << 1.0, 0.0; break;
      case 1: v << 0.0, 1.0; break;
      case 2: v << s, s; break;
      default: v << s, -s; break;
    }
    return v;
  };
  return kron(kron(local(a), local(b)), local(c));
}

int rank_at(const CMatrix& m, double tol) {
  const auto eg = eigh(m);
  int r = 0;
  for (Eigen::Index i = 0; i < eg.eigenvalues.size(); ++i) {
    if (std::abs(eg.eigenvalues(i)) > tol) ++r;
  }
  return r;
}

void check_state_invariants(const CMatrix& rho) {
  CHECK(herm_defect(rho) <= 1e-13);
  CHECK(std::abs(rho.trace().real() - 1.0) <= 1e-13);
  CHECK(min_eig(rho) >= -1e-12);
}

}  // namespace

TEST_CASE("UPB state: rank, kernel, orthogonality, trace") {
  const CMatrix rho = make_upb_state();
  CHECK(rho.trace().real() == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(rank_at(rho, 1e-10) == 4);

  const std::vector<CVector> psi = {upb_ket(0, 1, 2), upb_ket(1, 2, 0),
                                    upb_ket(2, 0, 1), upb_ket(3, 3, 3)};
  for (const auto& v : psi) {
    CHECK((rho * v).norm() <= 1e-13);
  }
  for (std::size_t i = 0; i < psi.size(); ++i) {
    for (std::size_t j = i + 1; j < psi.size(); ++j) {
      CHECK(std::abs(psi[i].dot(psi[j])) <= 1e-14);
    }
  }
}

TEST_CASE("UPB state is PPT across all three bipartitions") {
  const CMatrix rho = make_upb_state();
  const PartyStructure parties{{2, 2, 2}};
  for (int party = 0; party < 3; ++party) {
    const CMatrix pt = partial_transpose(rho, parties, {party});
    CHECK(min_eig(pt) >= -1e-10);
  }
}

TEST_CASE("witness fixture: integer entries, trace, and the -3/8 pairing") {
  const CMatrix z = upb_witness_fixture();
  CHECK(z(0, 0).real() == 1.0);
  CHECK(z(1, 1).real() == 4.0);
  CHECK(z(1, 5).real() == 3.0);
  CHECK(herm_defect(z) == 0.0);
  CHECK(z.trace().real() == 26.0);

  // This pairing nails the basis-ordering convention: any ordering mistake
  // in either factor moves the value far away from -3/8.
  const double pairing = hs_inner(z, make_upb_state()).real();
  CHECK(pairing == doctest::Approx(-0.375).epsilon(1e-14));
}

TEST_CASE("werner family endpoints") {
  StateSpec spec;
  spec.family = Family::werner;
  spec.dims = {2, 2};

  spec.p = 0.0;
  const CMatrix white = make_family(spec);
  CHECK((white - CMatrix::Identity(4, 4) / 4.0).norm() <= 1e-15);

  spec.p = 1.0;
  const CMatrix singlet = make_family(spec);
  const PartyStructure parties{{2, 2}};
  CHECK(min_eig(partial_transpose(singlet, parties, {0})) ==
        doctest::Approx(-0.5).epsilon(1e-12));
  // Interior point of the family: PT minimum eigenvalue is (1 - 3p)/4.
  spec.p = 0.6;
  const CMatrix mixed = make_family(spec);
  CHECK(min_eig(partial_transpose(mixed, parties, {0})) ==
        doctest::Approx((1.0 - 3.0 * 0.6) / 4.0).epsilon(1e-12));
}

TEST_CASE("ghz and w families on three qubits") {
  StateSpec ghz;
  ghz.family = Family::ghz;
  ghz.dims = {2, 2, 2};
  ghz.p = 1.0;
  const CMatrix pure = make_family(ghz);
  CHECK((pure * pure - pure).norm() <= 1e-13);  // projector => pure
  const PartyStructure parties{{2, 2, 2}};
  CHECK(min_eig(partial_transpose(pure, parties, {0})) ==
        doctest::Approx(-0.5).epsilon(1e-12));

  StateSpec w;
  w.family = Family::w;
  w.dims = {2, 2, 2};
  const CMatrix wst = make_family(w);
  // |W> has weight 1/3 on |001>, |010>, |100> (indices 1, 2, 4).
  for (int idx : {1, 2, 4}) {
    CHECK(wst(idx, idx).real() == doctest::Approx(1.0 / 3.0).epsilon(1e-14));
  }
  CHECK(wst(0, 0).real() == doctest::Approx(0.0).epsilon(1e-14));
}

TEST_CASE("product family: purity, determinism, and mixtures of terms") {
  StateSpec spec;
  spec.family = Family::product;
  spec.dims = {2, 3};
  spec.seed = 11;

  const CMatrix pure = make_family(spec);
  CHECK((pure * pure - pure).norm() <= 1e-13);

  const CMatrix again = make_family(spec);
  CHECK((pure - again).norm() == 0.0);  // bitwise deterministic

  spec.seed = 12;
  CHECK((make_family(spec) - pure).norm() > 1e-3);

  spec.terms = 5;
  const CMatrix mix = make_family(spec);
  check_state_invariants(mix);
  // A mixture of five product states on 2x3 is separable, hence PPT.
  const PartyStructure parties{{2, 3}};
  CHECK(min_eig(partial_transpose(mix, parties, {0})) >= -1e-12);
}

TEST_CASE("mixture family applies white noise to its base") {
  auto base = std::make_shared<StateSpec>();
  base->family = Family::ghz;
  base->dims = {2, 2, 2};

  StateSpec spec;
  spec.family = Family::mixture;
  spec.dims = {2, 2, 2};
  spec.p = 0.7;
  spec.base = base;
  const CMatrix got = make_family(spec);
  const CMatrix want =
      0.7 * make_family(*base) + 0.3 * CMatrix::Identity(8, 8) / 8.0;
  CHECK((got - want).norm() <= 1e-14);
}

TEST_CASE("every family satisfies the generation invariants") {
  std::vector<StateSpec> corpus;
  for (std::uint64_t seed : {1u, 2u, 3u}) {
    StateSpec prod;
    prod.family = Family::product;
    prod.dims = {2, 2, 2};
    prod.seed = seed;
    prod.terms = static_cast<int>(seed) + 2;
    corpus.push_back(prod);
  }
  for (double p : {0.0, 0.3, 1.0}) {
    for (Family f : {Family::bell, Family::werner}) {
      StateSpec s;
      s.family = f;
      s.dims = {2, 2};
      s.p = p;
      corpus.push_back(s);
    }
    for (Family f : {Family::ghz, Family::w, Family::upb_shifts}) {
      StateSpec s;
      s.family = f;
      s.dims = {2, 2, 2};
      s.p = p;
      corpus.push_back(s);
    }
  }
  for (const auto& spec : corpus) {
    CAPTURE(to_string(spec.family));
    check_state_invariants(make_family(spec));
  }
}

TEST_CASE("family parameter validation") {
  StateSpec bad;
  bad.family = Family::werner;
  bad.dims = {2, 3};  // fixed-dims family
  CHECK_THROWS_AS(make_family(bad), std::invalid_argument);

  bad.dims = {2, 2};
  bad.p = 1.5;
  CHECK_THROWS_AS(make_family(bad), std::invalid_argument);

  StateSpec mix;
  mix.family = Family::mixture;  // no base
  CHECK_THROWS_AS(make_family(mix), std::invalid_argument);

  StateSpec prod;
  prod.family = Family::product;
  prod.dims = {2, 2};
  prod.terms = 0;
  CHECK_THROWS_AS(make_family(prod), std::invalid_argument);
}

TEST_CASE("validate_density diagnostics") {
  const PartyStructure parties{{2, 2}};
  CHECK_NOTHROW(validate_density(CMatrix::Identity(4, 4) / 4.0, parties));

  CHECK_THROWS_WITH_AS(
      validate_density(CMatrix::Identity(3, 3) / 3.0, parties),
      doctest::Contains("4x4"), std::invalid_argument);

  CMatrix nonherm = CMatrix::Identity(4, 4) / 4.0;
  nonherm(0, 1) = Complex(0.0, 1e-3);
  CHECK_THROWS_WITH_AS(validate_density(nonherm, parties),
                       doctest::Contains("hermitian"), std::invalid_argument);

  CHECK_THROWS_WITH_AS(validate_density(CMatrix::Identity(4, 4), parties),
                       doctest::Contains("trace"), std::invalid_argument);

  CMatrix neg = CMatrix::Identity(4, 4) / 2.0;
  neg(3, 3) = -0.5;
  CHECK_THROWS_WITH_AS(validate_density(neg, parties),
                       doctest::Contains("negative eigenvalue"),
                       std::invalid_argument);
}

TEST_CASE("state spec JSON parsing") {
  const auto spec = StateSpec::from_json(
      R"({"family": "mixture", "dims": [2,2,2], "p": 0.5,
          "base": {"family": "ghz", "dims": [2,2,2]}})");
  CHECK(spec.family == Family::mixture);
  CHECK(spec.p == 0.5);
  REQUIRE(spec.base != nullptr);
  CHECK(spec.base->family == Family::ghz);

  CHECK_THROWS_AS(StateSpec::from_json("not json"), ParseError);
  CHECK_THROWS_AS(StateSpec::from_json(R"({"family": "nope"})"), ParseError);
  CHECK_THROWS_AS(
      StateSpec::from_json(R"({"family": "bell", "oops": 1})"), ParseError);
  CHECK_THROWS_AS(
      StateSpec::from_json(R"({"family": "bell", "p": "high"})"), ParseError);
}

TEST_CASE("state JSON round-trip is the identity to the last bit") {
  Rng rng(31);
  const CMatrix rho = rng.density(6);
  const std::vector<int> dims = {2, 3};
  const auto text = state_to_json(dims, rho);
  const auto back = state_from_json(text);
  REQUIRE(back.dims == dims);
  REQUIRE(back.rho.rows() == 6);
  for (int i = 0; i < 6; ++i) {
    for (int j = 0; j < 6; ++j) {
      CHECK(back.rho(i, j).real() == rho(i, j).real());
      CHECK(back.rho(i, j).imag() == rho(i, j).imag());
    }
  }
}

TEST_CASE("state file save/load round-trip and error paths") {
  Rng rng(32);
  const CMatrix rho = rng.density(4);
  const std::string path = "/tmp/symext_test_state.json";
  save_state(path, {2, 2}, rho);
  const auto back = load_state(path);
  CHECK(back.dims == std::vector<int>{2, 2});
  CHECK((back.rho - rho).norm() == 0.0);
  std::remove(path.c_str());

  CHECK_THROWS_AS(load_state("/nonexistent/dir/state.json"), IoError);
  CHECK_THROWS_AS(state_from_json("[1,2,3]"), ParseError);
  CHECK_THROWS_AS(state_from_json(R"({"dims": [2,2]})"), ParseError);
  CHECK_THROWS_AS(
      state_from_json(R"({"dims": [2,2], "matrix": [[1, 2], [3, 4]]})"),
      ParseError);
}

TEST_CASE("certificate JSON round-trip preserves all fields bitwise") {
  Rng rng(33);
  WitnessCertificate cert;
  cert.parties.dims = {2, 2};
  cert.level.copies = {2, 1};
  cert.Z = rng.hermitian(4);
  cert.blocks.emplace_back(TransposeClass{{0, 0}}, rng.psd(8));
  cert.blocks.emplace_back(TransposeClass{{1, 0}}, rng.psd(8));
  cert.identity_residual = 3.25e-9;
  cert.value = -0.0123456789;

  const auto text = certificate_to_json(cert);
  const auto back = certificate_from_json(text);
  CHECK(back.parties.dims == cert.parties.dims);
  CHECK(back.level.copies == cert.level.copies);
  CHECK((back.Z - cert.Z).norm() == 0.0);
  REQUIRE(back.blocks.size() == 2);
  for (std::size_t i = 0; i < 2; ++i) {
    CHECK(back.blocks[i].first.transposed_counts ==
          cert.blocks[i].first.transposed_counts);
    CHECK((back.blocks[i].second - cert.blocks[i].second).norm() == 0.0);
  }
  CHECK(back.identity_residual == cert.identity_residual);
  CHECK(back.value == cert.value);

  CHECK_THROWS_AS(certificate_from_json(R"({"dims": [2,2]})"), ParseError);
}
