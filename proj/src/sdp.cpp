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

#include "symext/sdp.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>
#include <stdexcept>

namespace symext {

namespace {

// ---------------------------------------------------------------------------
// Block-diagonal helpers.  A "blockvec" is one Hermitian matrix per block;
// its svec concatenates the per-block svec coordinates.
// ---------------------------------------------------------------------------

struct BlockLayout {
  std::vector<int> dims;
  std::vector<int> offsets;  // svec offset of each block
  int total_svec = 0;
  int total_dim = 0;         // sum of block dimensions

  explicit BlockLayout(const std::vector<int>& d) : dims(d) {
    offsets.reserve(d.size());
    for (int n : d) {
      offsets.push_back(total_svec);
      total_svec += svec_dim(n);
      total_dim += n;
    }
  }
};

using BlockVec = std::vector<CMatrix>;

RVector svec_blocks(const BlockLayout& lay, const BlockVec& x) {
  RVector v(lay.total_svec);
  for (std::size_t b = 0; b < lay.dims.size(); ++b) {
    v.segment(lay.offsets[b], svec_dim(lay.dims[b])) = svec(x[b]);
  }
  return v;
}

BlockVec unsvec_blocks(const BlockLayout& lay, const RVector& v) {
  BlockVec x(lay.dims.size());
  for (std::size_t b = 0; b < lay.dims.size(); ++b) {
    x[b] = unsvec(v.segment(lay.offsets[b], svec_dim(lay.dims[b])),
                  lay.dims[b]);
  }
  return x;
}

BlockVec identity_blocks(const BlockLayout& lay, double scale) {
  BlockVec x;
  x.reserve(lay.dims.size());
  for (int n : lay.dims) x.push_back(scale * CMatrix::Identity(n, n));
  return x;
}

double inner_blocks(const BlockVec& a, const BlockVec& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    s += hs_inner(a[i], b[i]).real();
  }
  return s;
}

double fnorm_blocks(const BlockVec& a) {
  double s = 0.0;
  for (const auto& m : a) s += m.squaredNorm();
  return std::sqrt(s);
}

void hermitize_blocks(BlockVec& a) {
  for (auto& m : a) m = hermitize(m);
}

double min_eig_blocks(const BlockVec& a) {
  double v = std::numeric_limits<double>::infinity();
  for (const auto& m : a) v = std::min(v, min_eig(m));
  return v;
}

double max_eig_blocks(const BlockVec& a) {
  double v = -std::numeric_limits<double>::infinity();
  for (const auto& m : a) v = std::max(v, max_eig(m));
  return v;
}

// Largest alpha in (0, inf] with P + alpha*D >= 0, for P > 0 (Cholesky).
double max_step(const BlockVec& P, const BlockVec& D) {
  double alpha = std::numeric_limits<double>::infinity();
  for (std::size_t b = 0; b < P.size(); ++b) {
    Eigen::LLT<CMatrix> llt(P[b]);
    if (llt.info() != Eigen::Success) return 0.0;  // lost positivity
    const CMatrix l = llt.matrixL();
    const CMatrix tmp =
        l.triangularView<Eigen::Lower>().solve(D[b]);
    const CMatrix w =
        l.triangularView<Eigen::Lower>().solve(tmp.adjoint()).adjoint();
    const double lmin = min_eig(w);
    if (lmin < 0.0) alpha = std::min(alpha, -1.0 / lmin);
  }
  return alpha;
}

// ---------------------------------------------------------------------------
// Presolve: svec the constraints, drop linearly dependent rows, and detect
// inconsistent dependencies (which yield an immediate Farkas ray).
// ---------------------------------------------------------------------------

struct Presolved {
  RMatrix V;              // kept constraint rows (r x K)
  RVector b;              // kept right-hand sides
  std::vector<int> kept;  // original indices, ascending
  bool infeasible = false;
  RVector farkas_full;    // normalized ray over original constraints
  std::string message;
};

Presolved presolve(const SdpProblem& p, const BlockLayout& lay, double tol) {
  Presolved out;
  const int m = p.num_constraints();
  RMatrix vfull(m, lay.total_svec);
  RVector bfull(m);
  for (int j = 0; j < m; ++j) {
    vfull.row(j) = svec_blocks(lay, p.constraints[j].a);
    bfull(j) = p.constraints[j].b;
  }
  if (m == 0) return out;

  Eigen::ColPivHouseholderQR<RMatrix> qr(vfull.transpose());
  qr.setThreshold(tol);
  const int rank = static_cast<int>(qr.rank());
  const auto perm = qr.colsPermutation().indices();
  std::vector<int> kept(perm.data(), perm.data() + rank);
  std::sort(kept.begin(), kept.end());
  std::vector<bool> is_kept(m, false);
  for (int j : kept) is_kept[j] = true;

  out.kept = kept;
  out.V.resize(rank, lay.total_svec);
  out.b.resize(rank);
  for (int i = 0; i < rank; ++i) {
    out.V.row(i) = vfull.row(kept[i]);
    out.b(i) = bfull(kept[i]);
  }

  if (rank == m) return out;

  // Each dropped row must be a consistent combination of the kept rows.
  Eigen::HouseholderQR<RMatrix> kept_qr(out.V.transpose());
  const double bscale = 1.0 + bfull.cwiseAbs().maxCoeff();
  for (int j = 0; j < m; ++j) {
    if (is_kept[j]) continue;
    const RVector coeff = kept_qr.solve(vfull.row(j).transpose());
    const double bres = bfull(j) - coeff.dot(out.b);
    if (std::abs(bres) <= 1e-8 * bscale) continue;
    // Inconsistent: y has +1 on row j, -coeff on the kept rows; then
    // sum_i y_i A_i ~ 0 while b.y = bres != 0.  Normalize to b.y = 1.
    RVector ray = RVector::Zero(m);
    ray(j) = 1.0;
    for (int i = 0; i < rank; ++i) ray(kept[i]) -= coeff(i);
    ray /= bres;
    out.infeasible = true;
    out.farkas_full = ray;
    std::ostringstream msg;
    msg << "constraint " << j
        << " is a linear combination of the others with mismatched "
           "right-hand side (defect "
        << bres << ")";
    out.message = msg.str();
    return out;
  }
  return out;
}

}  // namespace

void SdpProblem::validate() const {
  if (blocks.empty()) throw std::invalid_argument("SdpProblem: no blocks");
  for (int n : blocks) {
    if (n < 1) throw std::invalid_argument("SdpProblem: block dim < 1");
  }
  auto check_blockvec = [&](const std::vector<CMatrix>& v, const char* who) {
    if (v.size() != blocks.size()) {
      throw std::invalid_argument(std::string("SdpProblem: ") + who +
                                  " has wrong block count");
    }
    for (std::size_t b = 0; b < v.size(); ++b) {
      if (v[b].rows() != blocks[b] || v[b].cols() != blocks[b]) {
        throw std::invalid_argument(std::string("SdpProblem: ") + who +
                                    " block shape mismatch");
      }
      if (!is_hermitian(v[b], 1e-10)) {
        throw std::invalid_argument(std::string("SdpProblem: ") + who +
                                    " block not Hermitian");
      }
    }
  };
  check_blockvec(objective, "objective");
  for (std::size_t j = 0; j < constraints.size(); ++j) {
    check_blockvec(constraints[j].a, "constraint");
  }
}

double SdpProblem::objective_norm() const {
  double s = 0.0;
  for (const auto& m : objective) s += m.squaredNorm();
  return std::sqrt(s);
}

const char* to_string(SdpStatus s) {
  switch (s) {
    case SdpStatus::optimal: return "optimal";
    case SdpStatus::primal_infeasible: return "primal_infeasible";
    case SdpStatus::dual_infeasible: return "dual_infeasible";
    case SdpStatus::numerical_limit: return "numerical_limit";
    case SdpStatus::stopped: return "stopped";
  }
  return "unknown";
}

SdpSolution solve(const SdpProblem& p, const SdpOptions& opts) {
  p.validate();
  const BlockLayout lay(p.blocks);
  const int nb = p.num_blocks();
  const int mfull = p.num_constraints();
  const double cnorm = p.objective_norm();
  const double cscale = std::max(1.0, cnorm);

  SdpSolution sol;
  sol.y = RVector::Zero(mfull);

  // Verify a candidate dual improving ray (over original constraints):
  // requires b.y = 1 and lambda_max(sum_j y_j A_j) <= ray_tol * max(1,||y||).
  auto verify_primal_infeasible = [&](const RVector& yfull,
                                      const RMatrix& vfull_unused) -> bool {
    (void)vfull_unused;
    BlockVec acc = identity_blocks(lay, 0.0);
    for (int j = 0; j < mfull; ++j) {
      if (yfull(j) == 0.0) continue;
      for (int b = 0; b < nb; ++b) acc[b] += yfull(j) * p.constraints[j].a[b];
    }
    const double lmax = max_eig_blocks(acc);
    return lmax <= opts.ray_tol * std::max(1.0, yfull.norm());
  };

  const Presolved pre = presolve(p, lay, opts.presolve_tol);
  if (pre.infeasible) {
    if (verify_primal_infeasible(pre.farkas_full, RMatrix())) {
      sol.status = SdpStatus::primal_infeasible;
      sol.farkas_y = pre.farkas_full;
      sol.message = "presolve: " + pre.message;
    } else {
      sol.status = SdpStatus::numerical_limit;
      sol.message = "presolve found an inconsistent dependency but the ray "
                    "failed verification: " + pre.message;
    }
    return sol;
  }

  const RMatrix& V = pre.V;
  const RVector& b = pre.b;
  const int m = static_cast<int>(pre.kept.size());
  const double bscale = std::max(1.0, m > 0 ? b.norm() : 0.0);

  auto expand_y = [&](const RVector& yred) {
    RVector y = RVector::Zero(mfull);
    for (int i = 0; i < m; ++i) y(pre.kept[i]) = yred(i);
    return y;
  };

  // No (independent) constraints: the optimum is analytic.
  if (m == 0) {
    const double lmin = min_eig_blocks(p.objective);
    if (lmin >= 0.0) {
      sol.status = SdpStatus::optimal;
      sol.X = identity_blocks(lay, 0.0);
      sol.S = p.objective;
      sol.message = "no constraints; X = 0 is optimal";
    } else {
      // Ray along the most negative objective eigendirection.
      sol.status = SdpStatus::dual_infeasible;
      sol.farkas_X = identity_blocks(lay, 0.0);
      for (int bidx = 0; bidx < nb; ++bidx) {
        const auto eg = eigh(p.objective[bidx]);
        if (eg.eigenvalues(0) == lmin) {
          const CVector v = eg.eigenvectors.col(0);
          sol.farkas_X[bidx] = (v * v.adjoint()) / (-lmin);
          break;
        }
      }
      sol.message = "no constraints and indefinite objective";
    }
    return sol;
  }

  // Infeasible self-scaled start.
  const double eta =
      std::max({1.0, cnorm, m > 0 ? b.cwiseAbs().maxCoeff() : 0.0});
  BlockVec X = identity_blocks(lay, eta);
  BlockVec S = identity_blocks(lay, eta);
  RVector y = RVector::Zero(m);

  const double ntot = static_cast<double>(lay.total_dim);
  int collapse_count = 0;
  // When the cap is reached while an objective is diverging, the loop is
  // extended (once) to let the improving ray sharpen enough to pass its
  // independent verification; certificate quality scales like 1/||X||.
  int iter_limit = opts.max_iter;

  auto record_iterate = [&](double pobj, double dobj, double gap, double rp,
                            double rd, int iter) {
    sol.X = X;
    sol.S = S;
    sol.y = expand_y(y);
    sol.primal_obj = pobj;
    sol.dual_obj = dobj;
    sol.gap = gap;
    sol.primal_residual = rp;
    sol.dual_residual = rd;
    sol.iterations = iter;
  };

  for (int iter = 1; iter <= iter_limit; ++iter) {
    // Residuals and objective values.
    const RVector ax = V * svec_blocks(lay, X);
    const RVector rp = b - ax;
    BlockVec aty = unsvec_blocks(lay, V.transpose() * y);
    BlockVec rd(nb);
    for (int bidx = 0; bidx < nb; ++bidx) {
      rd[bidx] = p.objective[bidx] - S[bidx] - aty[bidx];
    }
    const double pobj = inner_blocks(p.objective, X);
    const double dobj = b.dot(y);
    const double gap = inner_blocks(X, S);
    const double mu = gap / ntot;
    const double rp_norm = rp.norm();
    const double rd_norm = fnorm_blocks(rd);

    record_iterate(pobj, dobj, gap, rp_norm, rd_norm, iter - 1);

    // Convergence test (scaled per the solution contracts).
    if (rp_norm <= opts.tol * (1.0 + b.norm()) &&
        rd_norm <= opts.tol * (1.0 + cnorm) &&
        gap <= opts.tol * (1.0 + std::abs(pobj)) &&
        std::abs(pobj - dobj) <= opts.tol * (1.0 + std::abs(pobj))) {
      sol.status = SdpStatus::optimal;
      return sol;
    }

    if (!std::isfinite(pobj) || !std::isfinite(dobj) || !std::isfinite(gap)) {
      sol.status = SdpStatus::numerical_limit;
      sol.message = "iterate left the representable range";
      return sol;
    }

    // Opportunistic infeasibility certificates once an objective diverges.
    // Iterations continue past divergence_threshold to let the improving ray
    // sharpen; the verification tolerance never loosens.
    if (dobj > 1e2 * bscale) {
      const RVector yhat_full = expand_y(RVector(y / dobj));
      if (verify_primal_infeasible(yhat_full, V)) {
        sol.status = SdpStatus::primal_infeasible;
        sol.farkas_y = yhat_full;
        sol.message = "dual objective diverging; improving ray verified";
        return sol;
      }
    }
    if (pobj < -1e2 * cscale) {
      const double denom = -pobj;
      const RVector axhat = ax / denom;
      double xnorm = fnorm_blocks(X) / denom;
      if (axhat.norm() <= opts.ray_tol * std::max(1.0, xnorm)) {
        sol.status = SdpStatus::dual_infeasible;
        sol.farkas_X.clear();
        for (const auto& xb : X) sol.farkas_X.push_back(xb / denom);
        sol.message = "primal objective diverging; improving ray verified";
        return sol;
      }
    }
    const double giveup = opts.divergence_threshold * 1e8;
    if (dobj > giveup * bscale || pobj < -giveup * cscale) {
      sol.status = SdpStatus::numerical_limit;
      sol.message =
          "objective divergence without a verifiable improving ray";
      return sol;
    }
    if (iter == opts.max_iter && iter_limit == opts.max_iter &&
        (dobj > 1e2 * bscale || pobj < -1e2 * cscale)) {
      iter_limit = 3 * opts.max_iter;  // ray polish phase
    }

    // Per-block S^{-1} and X factors for the Schur complement.
    std::vector<CMatrix> sinv(nb);
    for (int bidx = 0; bidx < nb; ++bidx) {
      Eigen::LLT<CMatrix> llt(S[bidx]);
      if (llt.info() != Eigen::Success) {
        sol.status = SdpStatus::numerical_limit;
        sol.message = "dual slack lost positive definiteness";
        return sol;
      }
      sinv[bidx] =
          llt.solve(CMatrix::Identity(lay.dims[bidx], lay.dims[bidx]));
    }

    // U row k = svec(herm(X A_k S^{-1})); Schur matrix M = U V^T.
    RMatrix U(m, lay.total_svec);
    {
      for (int k = 0; k < m; ++k) {
        for (int bidx = 0; bidx < nb; ++bidx) {
          const int n = lay.dims[bidx];
          const CMatrix a =
              unsvec(V.row(k).segment(lay.offsets[bidx], svec_dim(n))
                         .transpose(),
                     n);
          const CMatrix t = X[bidx] * a * sinv[bidx];
          U.row(k).segment(lay.offsets[bidx], svec_dim(n)) =
              svec(hermitize(t)).transpose();
        }
      }
    }
    RMatrix M = U * V.transpose();
    M = 0.5 * (M + M.transpose());

    Eigen::LLT<RMatrix> mllt(M);
    if (mllt.info() != Eigen::Success) {
      // Tiny ridge; the Schur complement can be numerically singular near
      // convergence.
      const double ridge = 1e-13 * std::max(1.0, M.diagonal().maxCoeff());
      for (int tries = 0; tries < 3 && mllt.info() != Eigen::Success;
           ++tries) {
        M.diagonal().array() += ridge * std::pow(10.0, tries);
        mllt.compute(M);
      }
      if (mllt.info() != Eigen::Success) {
        sol.status = SdpStatus::numerical_limit;
        sol.message = "Schur complement factorization failed";
        return sol;
      }
    }

    // One Newton solve for a given centering weight and corrector term.
    const RVector a_sinv = V * svec_blocks(lay, sinv);
    auto newton = [&](double sigma_mu, const BlockVec* corr, RVector& dy,
                      BlockVec& dX, BlockVec& dS) {
      RVector rhs = b - sigma_mu * a_sinv;
      BlockVec q2(nb);
      for (int bidx = 0; bidx < nb; ++bidx) {
        q2[bidx] = hermitize(X[bidx] * rd[bidx] * sinv[bidx]);
        if (corr) {
          q2[bidx] += hermitize((*corr)[bidx] * sinv[bidx]);
        }
      }
      rhs += V * svec_blocks(lay, q2);
      dy = mllt.solve(rhs);
      const BlockVec atdy = unsvec_blocks(lay, V.transpose() * dy);
      dS.resize(nb);
      dX.resize(nb);
      for (int bidx = 0; bidx < nb; ++bidx) {
        dS[bidx] = hermitize(rd[bidx] - atdy[bidx]);
        CMatrix t = sigma_mu * sinv[bidx] - X[bidx] -
                    X[bidx] * dS[bidx] * sinv[bidx];
        if (corr) t -= (*corr)[bidx] * sinv[bidx];
        dX[bidx] = hermitize(t);
      }
    };

    // Mehrotra predictor-corrector.
    RVector dy_aff;
    BlockVec dx_aff, ds_aff;
    newton(0.0, nullptr, dy_aff, dx_aff, ds_aff);
    const double ap_aff = std::min(1.0, max_step(X, dx_aff));
    const double ad_aff = std::min(1.0, max_step(S, ds_aff));
    double mu_aff = 0.0;
    for (int bidx = 0; bidx < nb; ++bidx) {
      mu_aff += hs_inner(CMatrix(X[bidx] + ap_aff * dx_aff[bidx]),
                         CMatrix(S[bidx] + ad_aff * ds_aff[bidx]))
                    .real();
    }
    mu_aff /= ntot;
    double sigma = std::pow(std::max(0.0, mu_aff / mu), 3);
    sigma = std::clamp(sigma, 0.0, 1.0);

    BlockVec corr(nb);
    for (int bidx = 0; bidx < nb; ++bidx) {
      corr[bidx] = dx_aff[bidx] * ds_aff[bidx];
    }
    RVector dy;
    BlockVec dx, ds;
    newton(sigma * mu, &corr, dy, dx, ds);

    const double ap = std::min(1.0, opts.step_fraction * max_step(X, dx));
    const double ad = std::min(1.0, opts.step_fraction * max_step(S, ds));

    if (std::max(ap, ad) < 1e-10) {
      if (++collapse_count >= 2) {
        sol.status = SdpStatus::numerical_limit;
        sol.message = "step length collapsed";
        return sol;
      }
    } else {
      collapse_count = 0;
    }

    for (int bidx = 0; bidx < nb; ++bidx) {
      X[bidx] = hermitize(X[bidx] + ap * dx[bidx]);
      S[bidx] = hermitize(S[bidx] + ad * ds[bidx]);
    }
    y += ad * dy;

    if (opts.callback) {
      const RVector yfull = expand_y(y);
      const SdpIterate view{X,
                            yfull,
                            S,
                            inner_blocks(p.objective, X),
                            b.dot(y),
                            inner_blocks(X, S),
                            iter};
      if (opts.callback(view) == SdpCallbackAction::stop) {
        record_iterate(view.primal_obj, view.dual_obj, view.gap,
                       (b - V * svec_blocks(lay, X)).norm(), rd_norm, iter);
        sol.status = SdpStatus::stopped;
        sol.message = "stopped by caller callback";
        return sol;
      }
    }
  }

  sol.status = SdpStatus::numerical_limit;
  sol.message = "iteration limit reached";
  return sol;
}

RVector extract_farkas(const SdpSolution& sol, const SdpProblem& p) {
  if (sol.status != SdpStatus::primal_infeasible) {
    throw std::logic_error(
        "extract_farkas: solution is not primal_infeasible");
  }
  if (sol.farkas_y.size() != p.num_constraints()) {
    throw std::logic_error("extract_farkas: certificate missing");
  }
  return sol.farkas_y;
}

}  // namespace symext
