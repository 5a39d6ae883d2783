"""Equality-constrained l1 minimization (basis pursuit) and the Monte-Carlo
recovery harness used by all experiments.

The LP is the split-variable formulation min sum(u+v) s.t. A(u-v)=y, u,v>=0,
solved by the in-package simplex. Randomness comes from numpy's PCG64
generator; each trial draws from a stream seeded by SeedSequence((seed, trial))
so results are reproducible and trials are independent.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import InputError, SolverError
from .lp import solve_standard_lp

__all__ = [
    "RecoveryProblem",
    "TrialConfig",
    "basis_pursuit",
    "recovery_trial",
    "recovery_rate",
    "mrsl_naive",
    "random_sparse_signal",
    "realify",
]

DEFAULT_SUCCESS_TOL = 1e-6


@dataclass(frozen=True)
class RecoveryProblem:
    """Measurement matrix (float m x n array) and observed vector y."""

    measurement: np.ndarray
    observed: np.ndarray

    def __post_init__(self):
        a = np.asarray(self.measurement, dtype=float)
        y = np.asarray(self.observed, dtype=float)
        if a.ndim != 2 or y.ndim != 1 or a.shape[0] != y.shape[0]:
            raise InputError("inconsistent problem dimensions")
        if not (np.all(np.isfinite(a)) and np.all(np.isfinite(y))):
            raise InputError("non-finite problem data")
        object.__setattr__(self, "measurement", a)
        object.__setattr__(self, "observed", y)


@dataclass(frozen=True)
class TrialConfig:
    sparsity: int
    trials: int
    seed: int
    tol: float = DEFAULT_SUCCESS_TOL

    def __post_init__(self):
        if self.sparsity < 1 or self.trials < 1 or self.tol <= 0:
            raise InputError("invalid trial configuration")


def realify(complex_matrix: np.ndarray) -> np.ndarray:
    """Stack real and imaginary parts of the rows of a complex matrix.

    The unknown signal is real, so the feasible set is unchanged.
    """
    c = np.asarray(complex_matrix, dtype=complex)
    return np.vstack([c.real, c.imag])


def basis_pursuit(problem: RecoveryProblem):
    """Solve min ||x||_1 s.t. measurement @ x = observed.

    Returns (x_hat, status) where status is "optimal", or
    "optimal-possibly-nonunique" when a nonbasic column sat at zero reduced
    cost (a degenerate tie; the optimum may not be unique).
    """
    a = problem.measurement
    y = problem.observed
    m, n = a.shape
    split = np.hstack([a, -a])
    cost = np.ones(2 * n)
    res = solve_standard_lp(split, y, cost)
    if res.status == "infeasible":
        raise SolverError("observed vector is outside the range of the matrix")
    x = res.x[:n] - res.x[n:]
    return x, ("optimal-possibly-nonunique" if res.tie else "optimal")


def recovery_trial(a: np.ndarray, x_true: np.ndarray, tol: float = DEFAULT_SUCCESS_TOL) -> bool:
    """Single trial: does basis pursuit on (a, a @ x_true) return x_true?

    Recovery means x_true is the *unique* l1 minimizer, so a flagged tie
    (non-unique optimum) counts as failure even when the solver's
    tie-breaking happens to land on x_true.
    """
    x_true = np.asarray(x_true, dtype=float)
    if not np.all(np.isfinite(x_true)):
        raise InputError("signal must be finite")
    x_hat, status = basis_pursuit(RecoveryProblem(a, a @ x_true))
    if status != "optimal":
        return False
    return bool(np.linalg.norm(x_hat - x_true) <= tol)


def random_sparse_signal(n: int, s: int, entropy: tuple[int, ...]) -> np.ndarray:
    """Uniform random support, standard-normal values, l2-normalized.

    `entropy` is a tuple of non-negative ints (seed path) feeding PCG64.
    """
    rng = np.random.Generator(np.random.PCG64(np.random.SeedSequence(entropy)))
    support = rng.choice(n, size=s, replace=False)
    x = np.zeros(n)
    vals = rng.standard_normal(s)
    while np.linalg.norm(vals) == 0.0:
        vals = rng.standard_normal(s)
    x[support] = vals / np.linalg.norm(vals)
    return x


def recovery_rate(a: np.ndarray, cfg: TrialConfig) -> float:
    """Fraction of seeded random sparse signals recovered exactly."""
    a = np.asarray(a, dtype=float)
    n = a.shape[1]
    if cfg.sparsity > n:
        raise InputError("sparsity exceeds signal dimension")
    hits = 0
    for t in range(cfg.trials):
        x = random_sparse_signal(n, cfg.sparsity, (cfg.seed, t))
        hits += recovery_trial(a, x, cfg.tol)
    return hits / cfg.trials


def mrsl_naive(a: np.ndarray, k: int, seed: int = 0, tol: float = DEFAULT_SUCCESS_TOL) -> int:
    """Sampling upper bound on the largest uniformly recoverable sparsity.

    Starts at s = n and decrements until k random s-sparse signals are all
    recovered; an early failure at a level moves on immediately.
    """
    if k < 1:
        raise InputError("sampling size must be >= 1")
    a = np.asarray(a, dtype=float)
    n = a.shape[1]
    for s in range(n, 0, -1):
        ok = True
        for t in range(k):
            x = random_sparse_signal(n, s, (seed, s, t))
            if not recovery_trial(a, x, tol):
                ok = False
                break
        if ok:
            return s
    return 0
