#!/usr/bin/env python3
# Copyright 2026 The symext Authors
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#     http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.
"""Regenerates the frozen reference data for the SDP solver tests.

Builds 50 small random instances over direct sums of complex Hermitian PSD
blocks -- bounded-feasible, infeasible-by-construction (with a planted
improving ray), and unbounded-by-construction (with a planted descent
direction) -- and records the status and optimal value reported by an
independent convex-optimization stack (CVXPY with the Clarabel
interior-point solver, cross-checked against SCS).  Every reference answer
is additionally re-verified directly in numpy before it is written out, so
a solver hiccup cannot silently corrupt the frozen data.

Outputs (relative to the repository root):
  tests/data/sdp_suite.json    the instances
  tests/data/sdp_oracle.json   the reference statuses/objectives

Usage: python3 tools/make_sdp_oracle.py
"""

import json
import os
import sys

import numpy as np

try:
    import cvxpy as cp
except ImportError:  # pragma: no cover
    sys.exit("cvxpy is required to regenerate the oracle data")

RNG = np.random.default_rng(20260815)
ROOT = os.path.dirname(os.path.dirname(os.path.abspath(__file__)))
OUT_DIR = os.path.join(ROOT, "tests", "data")

CROSS_TOL = 1e-7  # Clarabel-vs-SCS objective agreement
FEAS_TOL = 1e-7  # numpy re-verification of feasibility/optimality


def herm(n):
    g = RNG.normal(size=(n, n)) + 1j * RNG.normal(size=(n, n))
    return (g + g.conj().T) / 2.0


def psd(n):
    g = RNG.normal(size=(n, n)) + 1j * RNG.normal(size=(n, n))
    return g @ g.conj().T / n


def mat_to_json(m):
    return [[[float(np.real(v)), float(np.imag(v))] for v in row]
            for row in np.asarray(m)]


def blockvec_to_json(blocks):
    return [mat_to_json(b) for b in blocks]


def instance_json(name, dims, objective, constraints):
    return {
        "name": name,
        "blocks": [int(d) for d in dims],
        "objective": blockvec_to_json(objective),
        "constraints": [{
            "a": blockvec_to_json(a),
            "b": float(b)
        } for (a, b) in constraints],
    }


def inner(a, b):
    return float(np.real(np.trace(a.conj().T @ b)))


def apply_con(constraints, x_blocks):
    return np.array(
        [sum(inner(a[i], x_blocks[i]) for i in range(len(x_blocks)))
         for (a, _) in constraints])


def solve_reference(dims, objective, constraints):
    """Solves with Clarabel, cross-checks with SCS, returns (status, obj)."""
    xs = [cp.Variable((d, d), hermitian=True) for d in dims]
    cons = [x >> 0 for x in xs]
    for (a, b) in constraints:
        expr = sum(cp.real(cp.trace(a[i].conj().T @ xs[i]))
                   for i in range(len(dims)))
        cons.append(expr == b)
    obj = cp.Minimize(
        sum(cp.real(cp.trace(objective[i].conj().T @ xs[i]))
            for i in range(len(dims))))
    prob = cp.Problem(obj, cons)
    val = prob.solve(solver=cp.CLARABEL)
    status = prob.status

    prob2 = cp.Problem(obj, cons)
    val2 = prob2.solve(solver=cp.SCS, eps_abs=1e-10, eps_rel=1e-10,
                       max_iters=200000)
    status2 = prob2.status

    norm_status = {"optimal": "optimal", "infeasible": "primal_infeasible",
                   "unbounded": "dual_infeasible"}
    s1 = norm_status.get(status)
    s2 = norm_status.get(status2)
    if s1 is None or s1 != s2:
        raise RuntimeError(f"reference solvers disagree: {status} vs {status2}")
    if s1 == "optimal":
        if abs(val - val2) > CROSS_TOL * (1.0 + abs(val)):
            raise RuntimeError(f"objective mismatch: {val} vs {val2}")
        x_blocks = [np.asarray(x.value) for x in xs]
        return s1, float(val), x_blocks
    return s1, None, None


def verify_optimal(dims, objective, constraints, x_blocks, obj_val):
    r = apply_con(constraints, x_blocks) - np.array(
        [b for (_, b) in constraints])
    bnorm = np.linalg.norm([b for (_, b) in constraints])
    assert np.linalg.norm(r) <= FEAS_TOL * (1.0 + bnorm), "primal residual"
    for x in x_blocks:
        w = np.linalg.eigvalsh((x + x.conj().T) / 2.0)
        assert w.min() >= -FEAS_TOL, f"PSD violation {w.min()}"
    direct = sum(inner(objective[i], x_blocks[i]) for i in range(len(dims)))
    assert abs(direct - obj_val) <= 1e-6 * (1.0 + abs(obj_val)), "objective"


def verify_infeasible(constraints, ray):
    """Planted ray: sum_j y_j A_j <= -delta < 0 with b.y = 1."""
    nb = len(constraints[0][0])
    acc = [np.zeros_like(constraints[0][0][i]) for i in range(nb)]
    by = 0.0
    for (y_j, (a, b)) in zip(ray, constraints):
        by += y_j * b
        for i in range(nb):
            acc[i] = acc[i] + y_j * a[i]
    assert abs(by - 1.0) <= 1e-9, "ray normalization"
    lmax = max(np.linalg.eigvalsh(m).max() for m in acc)
    assert lmax < -1e-3, f"ray not strictly improving, lmax={lmax}"


def verify_unbounded(dims, objective, constraints, x0, direction):
    r = apply_con(constraints, x0) - np.array([b for (_, b) in constraints])
    assert np.linalg.norm(r) <= 1e-9, "x0 infeasible"
    ad = apply_con(constraints, direction)
    assert np.linalg.norm(ad) <= 1e-9, "direction not in constraint kernel"
    cd = sum(inner(objective[i], direction[i]) for i in range(len(dims)))
    assert cd <= -0.99, f"direction not descending, <C,D>={cd}"
    for d in direction:
        assert np.linalg.eigvalsh(d).min() >= -1e-12, "direction not PSD"


def make_feasible(idx):
    """Random bounded-feasible instance: interior point + trace cap."""
    nblocks = int(RNG.integers(1, 3))
    dims = [int(RNG.integers(2, 6)) for _ in range(nblocks)]
    objective = [herm(d) for d in dims]
    x0 = [psd(d) + 0.5 * np.eye(d) for d in dims]
    constraints = [([np.eye(d, dtype=complex) for d in dims],
                    sum(np.real(np.trace(x)) for x in x0))]
    m = int(RNG.integers(1, 6))
    for _ in range(m):
        a = [herm(d) for d in dims]
        b = sum(inner(a[i], x0[i]) for i in range(nblocks))
        constraints.append((a, b))
    if idx % 5 == 0 and m >= 1:
        # Plant an exactly redundant row to exercise presolve paths.
        a, b = constraints[1]
        constraints.append(([1.5 * ai for ai in a], 1.5 * b))
    return dims, objective, constraints, None


def make_offdiag(idx):
    """min Tr X with the off-diagonal part pinned to a fixed template."""
    d = 4
    phi = np.zeros(d, dtype=complex)
    phi[0] = phi[3] = 1.0 / np.sqrt(2.0)
    target = 2.0 * np.outer(phi, phi.conj()) + 0.4 * herm(d) * (idx + 1) / 5.0
    dims = [d]
    objective = [np.eye(d, dtype=complex)]
    constraints = []
    for i in range(d):
        for j in range(i + 1, d):
            re = np.zeros((d, d), dtype=complex)
            re[i, j] = re[j, i] = 1.0 / np.sqrt(2.0)
            constraints.append(([re], inner(re, target)))
            im = np.zeros((d, d), dtype=complex)
            im[i, j] = 1j / np.sqrt(2.0)
            im[j, i] = -1j / np.sqrt(2.0)
            constraints.append(([im], inner(im, target)))
    return dims, objective, constraints, None


def make_infeasible(idx):
    """Plants y with sum_j y_j A_j = -(PSD + delta I) and b.y = 1."""
    d = int(RNG.integers(2, 5))
    dims = [d]
    objective = [herm(d)]
    m = int(RNG.integers(3, 7))
    y = RNG.normal(size=m)
    y[m - 1] = 1.0 + abs(y[m - 1])  # keep the pivot weight away from zero
    a_list = [herm(d) for _ in range(m - 1)]
    neg = psd(d) + 0.3 * np.eye(d)
    a_last = (-neg - sum(y[j] * a_list[j] for j in range(m - 1))) / y[m - 1]
    a_list.append((a_last + a_last.conj().T) / 2.0)
    b = RNG.normal(size=m)
    by = float(y @ b)
    if abs(by) < 0.1:
        b[0] += 1.0
        by = float(y @ b)
    if by < 0:
        b = -b
        by = -by
    constraints = [([a_list[j]], float(b[j])) for j in range(m)]
    return dims, objective, constraints, list(y / by)


def make_unbounded(idx):
    """Feasible instance with a planted PSD descent direction in ker A."""
    d = int(RNG.integers(3, 6))
    dims = [d]
    v = RNG.normal(size=d) + 1j * RNG.normal(size=d)
    v /= np.linalg.norm(v)
    dmat = np.outer(v, v.conj())
    x0 = psd(d) + 0.5 * np.eye(d)
    m = int(RNG.integers(2, 5))
    constraints = []
    for _ in range(m):
        a = herm(d)
        a = a - inner(a, dmat) * dmat  # <A, D> = 0, stays Hermitian
        constraints.append(([a], inner(a, x0)))
    c = herm(d)
    c = c - (inner(c, dmat) + 1.0) * dmat  # <C, D> = -1
    objective = [(c + c.conj().T) / 2.0]
    return dims, objective, constraints, ([x0], [dmat])


def main():
    os.makedirs(OUT_DIR, exist_ok=True)
    instances = []
    results = []

    plan = ([("feasible", make_feasible)] * 25 +
            [("offdiag", make_offdiag)] * 5 +
            [("infeasible", make_infeasible)] * 10 +
            [("unbounded", make_unbounded)] * 10)
    counters = {}
    for kind, make in plan:
        idx = counters.get(kind, 0)
        counters[kind] = idx + 1
        name = f"{kind}_{idx:02d}"
        expected = {"feasible": "optimal", "offdiag": "optimal",
                    "infeasible": "primal_infeasible",
                    "unbounded": "dual_infeasible"}[kind]
        # Redraw until the reference stack solves the instance cleanly; the
        # frozen data must contain only unambiguous, well-conditioned cases.
        for attempt in range(20):
            try:
                dims, objective, constraints, extra = make(idx)
                status, obj, x_blocks = solve_reference(
                    dims, objective, constraints)
                if status != expected:
                    raise RuntimeError(
                        f"{name}: expected {expected}, got {status}")
                if status == "optimal":
                    verify_optimal(dims, objective, constraints, x_blocks,
                                   obj)
                elif status == "primal_infeasible":
                    verify_infeasible(constraints, extra)
                else:
                    verify_unbounded(dims, objective, constraints, *extra)
                break
            except (RuntimeError, AssertionError) as err:
                print(f"{name}: redraw ({err})")
        else:
            raise RuntimeError(f"{name}: no clean instance in 20 attempts")

        instances.append(instance_json(name, dims, objective, constraints))
        results.append({
            "name": name,
            "status": status,
            "objective": obj if obj is not None else None,
        })
        print(f"{name}: {status}"
              + (f" obj={obj:.12g}" if obj is not None else ""))

    with open(os.path.join(OUT_DIR, "sdp_suite.json"), "w") as f:
        json.dump({"instances": instances}, f, indent=1)
    with open(os.path.join(OUT_DIR, "sdp_oracle.json"), "w") as f:
        json.dump({"results": results}, f, indent=1)
    print(f"wrote {len(instances)} instances to {OUT_DIR}")


if __name__ == "__main__":
    main()
