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

#include "symext/witness.hpp"

#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "symext/detail/rng.hpp"

namespace symext {

namespace {

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

void check_certificate_shapes(const WitnessCertificate& cert,
                              const CMatrix& rho) {
  cert.parties.validate();
  cert.level.validate(cert.parties);
  const auto phys = static_cast<Eigen::Index>(cert.parties.total_dim());
  if (cert.Z.rows() != phys || cert.Z.cols() != phys) {
    throw std::invalid_argument("certificate: Z shape mismatch");
  }
  if (rho.rows() != phys || rho.cols() != phys) {
    throw std::invalid_argument("certificate: state shape mismatch");
  }
  if (herm_defect(cert.Z) > 1e-10) {
    throw std::invalid_argument("certificate: Z is not hermitian");
  }
  const auto canonical = enumerate_transpose_classes(cert.level);
  if (cert.blocks.size() != canonical.size()) {
    std::ostringstream msg;
    msg << "certificate: expected " << canonical.size()
        << " transpose-class blocks, got " << cert.blocks.size();
    throw std::invalid_argument(msg.str());
  }
  const auto ext = static_cast<Eigen::Index>(
      expanded_structure(cert.parties, cert.level).total_dim());
  for (std::size_t i = 0; i < canonical.size(); ++i) {
    if (cert.blocks[i].first.transposed_counts !=
        canonical[i].transposed_counts) {
      throw std::invalid_argument(
          "certificate: block classes are not the canonical enumeration");
    }
    const CMatrix& b = cert.blocks[i].second;
    if (b.rows() != ext || b.cols() != ext) {
      throw std::invalid_argument("certificate: block shape mismatch");
    }
    if (herm_defect(b) > 1e-10) {
      throw std::invalid_argument("certificate: block is not hermitian");
    }
  }
}

}  // namespace

// ---------------------------------------------------------------------------
// ProductStateSampler
// ---------------------------------------------------------------------------

struct ProductStateSampler::Impl {
  detail::Rng rng;
  explicit Impl(std::uint64_t seed) : rng(seed) {}
};

ProductStateSampler::ProductStateSampler(PartyStructure parties,
                                         std::uint64_t seed)
    : parties_(std::move(parties)), impl_(new Impl(seed)) {
  parties_.validate();
}

ProductStateSampler::~ProductStateSampler() { delete impl_; }

std::vector<CVector> ProductStateSampler::next_kets() {
  std::vector<CVector> kets;
  kets.reserve(parties_.dims.size());
  for (int d : parties_.dims) kets.push_back(impl_->rng.haar_ket(d));
  return kets;
}

CVector ProductStateSampler::next() { return kron_kets(next_kets()); }

// ---------------------------------------------------------------------------
// Dual-identity residual, recomputed on the full extended space.
// ---------------------------------------------------------------------------

double certificate_residual(const WitnessCertificate& cert) {
  const PartyStructure ext = expanded_structure(cert.parties, cert.level);
  const int nparties = static_cast<int>(cert.parties.dims.size());

  // Z acts on the first copy of each party; identity on all other copies.
  std::vector<int> first_copies;
  first_copies.reserve(nparties);
  for (int i = 0; i < nparties; ++i) {
    first_copies.push_back(party_slot_start(cert.level, i));
  }
  CMatrix diff = embed_on_parties(cert.Z, ext, first_copies);
  for (const auto& [cls, block] : cert.blocks) {
    diff -= class_transpose(block, cert.parties, cert.level, cls);
  }
  // || pi M pi ||_F = || L' M L ||_F for the symmetric isometry L.
  const CMatrix l = lift_isometry(cert.parties, cert.level);
  return CMatrix(l.adjoint() * diff * l).norm();
}

// ---------------------------------------------------------------------------
// verify_certificate
// ---------------------------------------------------------------------------

VerifyReport verify_certificate(const WitnessCertificate& cert,
                                const CMatrix& rho,
                                const VerifyOptions& opts) {
  check_certificate_shapes(cert, rho);

  VerifyReport report;
  report.min_block_eig = std::numeric_limits<double>::infinity();
  for (const auto& [cls, block] : cert.blocks) {
    const double lmin = min_eig(hermitize(block));
    report.block_min_eigs.push_back(lmin);
    report.min_block_eig = std::min(report.min_block_eig, lmin);
  }
  report.identity_residual = certificate_residual(cert);
  report.value = hs_inner(cert.Z, rho).real();

  ProductStateSampler sampler(cert.parties, opts.seed);
  double sampled = std::numeric_limits<double>::infinity();
  for (int s = 0; s < opts.samples; ++s) {
    const CVector v = sampler.next();
    const double e = (v.adjoint() * cert.Z * v)(0, 0).real();
    sampled = std::min(sampled, e);
  }
  report.sampled_min = sampled;

  const double res_tol = opts.residual_tol * std::max(1.0, cert.Z.norm());
  std::ostringstream why;
  if (report.min_block_eig < -opts.block_eig_tol) {
    why << "block not PSD (min eig " << report.min_block_eig << ")";
  } else if (report.identity_residual > res_tol) {
    why << "dual identity violated (residual " << report.identity_residual
        << " > " << res_tol << ")";
  } else if (!(report.value < 0.0)) {
    why << "not a witness for this state (Tr[Z rho] = " << report.value
        << " >= 0)";
  } else if (report.sampled_min < -opts.sample_tol) {
    why << "negative on a sampled product state (" << report.sampled_min
        << ")";
  }
  report.failure = why.str();
  report.valid = report.failure.empty();
  return report;
}

// ---------------------------------------------------------------------------
// product_minimize
// ---------------------------------------------------------------------------

ProductMinimum product_minimize(const CMatrix& z,
                                const PartyStructure& parties,
                                int restarts, int sweeps,
                                std::uint64_t seed) {
  parties.validate();
  const auto dim = static_cast<Eigen::Index>(parties.total_dim());
  if (z.rows() != dim || z.cols() != dim) {
    throw std::invalid_argument("product_minimize: operator shape mismatch");
  }
  if (herm_defect(z) > 1e-10) {
    throw std::invalid_argument("product_minimize: operator not hermitian");
  }
  if (restarts < 1 || sweeps < 1) {
    throw std::invalid_argument("product_minimize: restarts/sweeps < 1");
  }
  const int nparties = static_cast<int>(parties.dims.size());

  ProductStateSampler sampler(parties, seed);
  ProductMinimum best;
  best.value = std::numeric_limits<double>::infinity();

  for (int r = 0; r < restarts; ++r) {
    std::vector<CVector> kets = sampler.next_kets();
    CVector full = kron_kets(kets);
    double value = (full.adjoint() * z * full)(0, 0).real();

    for (int sweep = 0; sweep < sweeps; ++sweep) {
      const double before = value;
      for (int i = 0; i < nparties; ++i) {
        // Contract every party but i:  M = B' Z B with
        // B = (x)_{j<i} psi_j (x) I_{d_i} (x) (x)_{j>i} psi_j.
        CMatrix b = CMatrix::Ones(1, 1);
        for (int j = 0; j < nparties; ++j) {
          if (j == i) {
            b = kron(b, CMatrix::Identity(parties.dims[j], parties.dims[j]));
          } else {
            b = kron(b, CMatrix(kets[j]));
          }
        }
        const CMatrix m = hermitize(b.adjoint() * z * b);
        const auto eg = eigh(m);
        const double lmin = eg.eigenvalues(0);
        // The previous ket attains `value`, so the eigen-minimum can only
        // improve on it.
        if (lmin > value + 1e-12) {
          throw std::logic_error(
              "product_minimize: objective increased during update");
        }
        kets[i] = eg.eigenvectors.col(0);
        value = lmin;
      }
      if (before - value <= 1e-14 * std::max(1.0, std::abs(before))) {
        break;  // converged for this restart
      }
    }
    if (value < best.value) {
      best.value = value;
      best.kets = kets;
    }
  }
  return best;
}

}  // namespace symext
