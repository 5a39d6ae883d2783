"""Dense two-phase revised primal simplex.

Small, dense equality-form LPs only (the basis-pursuit instances in this
package). Dantzig pricing with a switch to Bland's rule after a degenerate
stall, so cycling cannot occur. No external solver dependency.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import SolverError

__all__ = ["LpResult", "solve_standard_lp"]

PIVOT_TOL = 1e-9
STALL_LIMIT = 50


@dataclass
class LpResult:
    x: np.ndarray
    objective: float
    status: str  # "optimal" or "infeasible"
    tie: bool  # a nonbasic column had (numerically) zero reduced cost


def _nonbasic_mask(ncols, basis):
    mask = np.ones(ncols, dtype=bool)
    mask[basis] = False
    return mask


def _drop_dependent_rows(a, b):
    """Keep a maximal independent row set; dependent rows must be consistent.

    Dependent equality rows (common after realifying conjugate-symmetric
    complex matrices) leave artificial variables stuck at zero and can drive
    the basis singular, so they are removed up front. Returns (a, b) reduced,
    or None when a dropped row contradicts the kept ones.
    """
    m, _ = a.shape
    keep: list[int] = []
    q: list[np.ndarray] = []
    dropped: list[int] = []
    for i in range(m):
        r = a[i].copy()
        for u in q:
            r -= (u @ a[i]) * u
        norm = np.linalg.norm(r)
        if norm > 1e-10 * max(np.linalg.norm(a[i]), 1.0):
            keep.append(i)
            q.append(r / norm)
        else:
            dropped.append(i)
    if not dropped:
        return a, b
    ak, bk = a[keep], b[keep]
    for i in dropped:
        coef, *_ = np.linalg.lstsq(ak.T, a[i], rcond=None)
        if abs(coef @ bk - b[i]) > 1e-7 * max(1.0, np.abs(b).max()):
            return None
    return ak, bk


def solve_standard_lp(a, b, c, max_iter: int | None = None) -> LpResult:
    """Minimize c@x subject to a@x = b, x >= 0."""
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float).copy()
    c = np.asarray(c, dtype=float)
    n_orig = a.shape[1]
    reduced = _drop_dependent_rows(a, b)
    if reduced is None:
        return LpResult(np.zeros(n_orig), np.inf, "infeasible", False)
    a, b = reduced
    m, n = a.shape
    if max_iter is None:
        max_iter = 2000 + 30 * m + n
    flip = b < 0
    a = a.copy()
    a[flip] *= -1.0
    b[flip] *= -1.0

    full_a = np.hstack([a, np.eye(m)])
    basis = list(range(n, n + m))

    # phase 1: drive artificial variables to zero; stop as soon as the
    # residual is below the feasibility tolerance (pivoting further only
    # churns on the degenerate optimal face)
    feas_tol = 1e-7 * max(1.0, np.abs(b).sum())
    c1 = np.concatenate([np.zeros(n), np.ones(m)])
    allowed = np.ones(n + m, dtype=bool)
    _, xb = _run_phase(full_a, c1, basis, allowed, max_iter, b, target=feas_tol)
    if float(c1[basis] @ xb) > feas_tol:
        return LpResult(np.zeros(n), np.inf, "infeasible", False)
    _purge_artificials(full_a, basis, n)

    # phase 2: original objective, artificials may not re-enter
    c2 = np.concatenate([c, np.zeros(m)])
    allowed = np.concatenate([np.ones(n, dtype=bool), np.zeros(m, dtype=bool)])
    tie, xb = _run_phase(full_a, c2, basis, allowed, max_iter, b)

    x = np.zeros(n + m)
    x[basis] = np.maximum(xb, 0.0)
    return LpResult(x[:n], float(c @ x[:n]), "optimal", tie)


def _purge_artificials(full_a, basis, n):
    """Swap basic artificial variables (all at ~0) for structural columns.

    The constraint rows are independent, so every basis row admits a
    structural pivot; degenerate pivots at value zero keep the solution
    unchanged while guaranteeing phase 2 cannot move an artificial off zero.
    """
    m = full_a.shape[0]
    for i in range(m):
        if basis[i] < n:
            continue
        b_mat = full_a[:, basis]
        e_i = np.zeros(m)
        e_i[i] = 1.0
        binv_row = np.linalg.solve(b_mat.T, e_i)
        vals = np.abs(binv_row @ full_a[:, :n])
        vals[[j for j in basis if j < n]] = 0.0
        j = int(np.argmax(vals))
        if vals[j] > PIVOT_TOL:
            basis[i] = j


def _has_alternative_optimum(full_a, b_mat, xb, flat):
    """True when some zero-reduced-cost nonbasic column admits a positive step.

    A flat column alone only signals an alternative optimal *basis*; the
    optimal *solution* differs exactly when the column can enter with a
    strictly positive step (degenerate zero-step pivots reproduce the same
    point).
    """
    cols = np.flatnonzero(flat)
    if cols.size == 0:
        return False
    directions = np.linalg.solve(b_mat, full_a[:, cols])
    for idx in range(cols.size):
        d = directions[:, idx]
        pos = np.flatnonzero(d > PIVOT_TOL)
        if pos.size == 0:
            return True  # ray of optima
        if np.min(np.maximum(xb[pos], 0.0) / d[pos]) > PIVOT_TOL:
            return True
    return False


def _run_phase(full_a, cvec, basis, allowed, max_iter, b, target=-np.inf):
    """Revised simplex iterations, refactoring the basis every step.

    Factorizing ``full_a[:, basis]`` each iteration costs O(m^3) but removes
    the numerical drift of maintained product-form inverses; the bases here
    are small enough that robustness wins. Returns (tie_flag, basic_solution).
    """
    m, ncols = full_a.shape
    stall = 0
    best_obj = np.inf
    for _ in range(max_iter):
        b_mat = full_a[:, basis]
        try:
            xb = np.linalg.solve(b_mat, b)
            y = np.linalg.solve(b_mat.T, cvec[basis])
        except np.linalg.LinAlgError as exc:
            raise SolverError("singular basis matrix") from exc
        if float(cvec[basis] @ xb) <= target:
            return False, xb
        reduced = cvec - y @ full_a
        reduced[basis] = 0.0
        eligible = allowed & (reduced < -PIVOT_TOL)
        eligible[basis] = False
        cand = np.flatnonzero(eligible)
        if cand.size == 0:
            nb = _nonbasic_mask(ncols, basis)
            flat = allowed & nb & (np.abs(reduced) <= PIVOT_TOL)
            return _has_alternative_optimum(full_a, b_mat, xb, flat), xb
        obj = float(cvec[basis] @ xb)
        if obj < best_obj - PIVOT_TOL:
            best_obj = obj
            stall = 0
        else:
            stall += 1
        if stall > STALL_LIMIT:
            entering = int(cand[0])  # Bland
        else:
            entering = int(cand[np.argmin(reduced[cand])])
        direction = np.linalg.solve(b_mat, full_a[:, entering])
        pos = np.flatnonzero(direction > PIVOT_TOL)
        if pos.size == 0:
            raise SolverError("LP unbounded (unexpected for basis pursuit)")
        ratios = np.maximum(xb[pos], 0.0) / direction[pos]
        rmin = ratios.min()
        ties = pos[ratios <= rmin + PIVOT_TOL]
        if stall > STALL_LIMIT:
            # Bland: smallest basis index, guarantees termination
            leave_row = int(ties[np.argmin(np.asarray(basis)[ties])])
        else:
            # largest pivot magnitude keeps the next basis well conditioned
            leave_row = int(ties[np.argmax(direction[ties])])
        basis[leave_row] = entering
    raise SolverError("simplex iteration limit reached")
