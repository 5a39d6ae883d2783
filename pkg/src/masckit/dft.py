"""Partial DFT fast path for prime dimension and real signals.

Membership of a support in the always-recoverable family reduces to weight
comparisons over candidate supports one larger than the measured row set:
the weights are submatrix determinant magnitudes in general, and polynomial
evaluations at roots of unity when the row set is a contiguous symmetric band.
"""

from __future__ import annotations

import functools
import math
import random
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations

import numpy as np

from .errors import BudgetExceededError, InputError, NumericalBoundaryError
from .linalg import dft_matrix, dft_root_powers
from .masc import ExtremePoint, MembershipVerdict, SupportSet

__all__ = [
    "PartialDFTSpec",
    "GammaWeights",
    "symmetrize_omega",
    "nullspace_vector_nu",
    "f_gamma_eval",
    "f_gamma_poly_eval",
    "gamma_weights",
    "masc_contains_dft",
    "coherence_lower_bound",
    "s_max_gamma",
    "s_max_exact",
    "s_max_sampled",
]

DEFAULT_GAMMA_BUDGET = 10**6
TIE_BAND_REL = 1e-9


def _is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    f = 3
    while f * f <= n:
        if n % f == 0:
            return False
        f += 2
    return True


@dataclass(frozen=True)
class PartialDFTSpec:
    """Prime dimension n and conjugate-symmetric measured row set omega.

    `mbar` is set when omega is the contiguous band {0..mbar, n-mbar..n-1},
    which unlocks the polynomial weight methods. `raw_omega` records the
    caller's set before symmetrization.
    """

    n: int
    omega: SupportSet
    mbar: int | None = None
    raw_omega: SupportSet | None = None

    def __post_init__(self):
        if not _is_prime(self.n):
            raise InputError(f"{self.n} is not prime")
        for k in self.omega.indices:
            if k >= 1 and (self.n - k) not in self.omega:
                raise InputError("omega is not conjugate symmetric")
        if self.mbar is not None:
            expected = _band(self.n, self.mbar)
            if tuple(expected) != self.omega.indices or len(self.omega) > self.n - 2:
                raise InputError("mbar inconsistent with omega")

    @property
    def m(self) -> int:
        return len(self.omega)

    @property
    def gamma_size(self) -> int:
        return self.m + 1

    def partial_matrix(self) -> np.ndarray:
        """The |omega| x n complex measurement matrix."""
        full = dft_matrix(self.n).to_array()
        return full[list(self.omega.indices), :]


@dataclass(frozen=True)
class GammaWeights:
    """Comparison weights for one candidate support, up to a positive factor."""

    gamma: SupportSet
    weights: tuple[float, ...]

    def __post_init__(self):
        if len(self.weights) != len(self.gamma):
            raise InputError("one weight per gamma index required")
        if any(not (w > 0) or not math.isfinite(w) for w in self.weights):
            raise InputError("weights must be strictly positive and finite")


def _band(n: int, mbar: int) -> list[int]:
    return list(range(mbar + 1)) + list(range(n - mbar, n))


def symmetrize_omega(n: int, omega_raw) -> PartialDFTSpec:
    """Close a row set under conjugation k -> n-k and detect the band shape.

    The closure changes nothing for the l1 problem because the unknown
    signal is real.
    """
    if not _is_prime(n):
        raise InputError(f"{n} is not prime")
    raw = SupportSet.of(n, omega_raw)
    if len(raw) == 0:
        raise InputError("omega must be non-empty")
    closed = set(raw.indices)
    closed |= {n - k for k in raw.indices if k >= 1}
    omega = SupportSet.of(n, closed)
    mbar = None
    m = len(omega)
    if m % 2 == 1 and 0 in omega and m <= n - 2:
        cand = (m - 1) // 2
        if cand >= 1 and tuple(_band(n, cand)) == omega.indices:
            mbar = cand
    return PartialDFTSpec(n, omega, mbar, raw)


def _sin_log_table(n: int) -> np.ndarray:
    """log |xi^a - xi^b| depends only on (a-b) mod n; tabulate it."""
    d = np.arange(1, n)
    table = np.empty(n)
    table[0] = -np.inf  # unused: distinct indices only
    table[1:] = np.log(2.0 * np.abs(np.sin(np.pi * d / n)))
    return table


def _log_weights(spec: PartialDFTSpec, gamma: tuple[int, ...], method: str,
                 table: np.ndarray | None = None) -> np.ndarray:
    """Per-k log weights on gamma, for the chosen method, up to a common
    additive constant (which cancels in every comparison)."""
    n = spec.n
    g = np.array(gamma)
    if method == "determinant":
        sub = spec.partial_matrix()[:, list(gamma)]
        out = np.empty(len(gamma))
        for t in range(len(gamma)):
            cols = np.delete(np.arange(len(gamma)), t)
            det = np.linalg.det(sub[:, cols]) if cols.size else 1.0
            mag = abs(det)
            if mag <= 0.0:
                raise NumericalBoundaryError(
                    "numerically zero minor; prime-dimension minors are nonzero"
                )
            out[t] = math.log(mag)
        return out
    if spec.mbar is None:
        raise InputError(f"method {method!r} requires the contiguous band shape")
    if table is None:
        table = _sin_log_table(n)
    if method == "fprime":
        # w_k = 1/|f'_Gamma(xi^k)|
        diffs = (g[:, None] - g[None, :]) % n
        np.fill_diagonal(diffs, 0)
        mask = ~np.eye(len(gamma), dtype=bool)
        return -np.where(mask, table[diffs], 0.0).sum(axis=1)
    if method == "fcomplement":
        comp = np.array([j for j in range(n) if j not in set(gamma)], dtype=int)
        if comp.size == 0:
            return np.zeros(len(gamma))
        diffs = (g[:, None] - comp[None, :]) % n
        return table[diffs].sum(axis=1)
    raise InputError(f"unknown weight method {method!r}")


def gamma_weights(
    spec: PartialDFTSpec, gamma, method: str = "determinant"
) -> GammaWeights:
    """Strictly positive comparison weights for one candidate support.

    All three methods agree up to a common positive scale; returned weights
    are normalized to unit maximum.
    """
    gamma = SupportSet.of(spec.n, gamma)
    if len(gamma) != spec.gamma_size:
        raise InputError("gamma must have |omega|+1 indices")
    logs = _log_weights(spec, gamma.indices, method)
    w = np.exp(logs - logs.max())
    return GammaWeights(gamma, tuple(float(x) for x in w))


def f_gamma_poly_eval(spec: PartialDFTSpec, gamma, z: complex) -> complex:
    """Evaluate prod_{k in gamma} (z - xi^k) directly."""
    roots = dft_root_powers(spec.n)
    out = 1.0 + 0.0j
    for k in SupportSet.of(spec.n, gamma).indices:
        out *= z - roots[k]
    return complex(out)


def f_gamma_eval(spec: PartialDFTSpec, gamma, k: int) -> complex:
    """Evaluate the gamma root polynomial at the k-th root of unity."""
    if not 0 <= k < spec.n:
        raise InputError("evaluation index out of range")
    return f_gamma_poly_eval(spec, gamma, complex(dft_root_powers(spec.n)[k]))


def nullspace_vector_nu(spec: PartialDFTSpec, gamma) -> np.ndarray:
    """Real spanning vector of the nullspace restricted to gamma, embedded
    into R^n on gamma and l1-normalized.

    Built from alternating-sign minor determinants, then realified: divided
    by i when purely imaginary, otherwise added to its conjugate.
    """
    gamma = SupportSet.of(spec.n, gamma)
    if len(gamma) != spec.gamma_size:
        raise InputError("gamma must have |omega|+1 indices")
    sub = spec.partial_matrix()[:, list(gamma.indices)]
    k = len(gamma)
    nu = np.empty(k, dtype=complex)
    for t in range(k):
        cols = np.delete(np.arange(k), t)
        det = np.linalg.det(sub[:, cols]) if cols.size else 1.0
        nu[t] = ((-1) ** t) * det
    scale = np.max(np.abs(nu))
    if scale == 0.0:
        raise NumericalBoundaryError("all minors numerically zero")
    real_part = nu + np.conj(nu)
    imag_route = nu / 1j
    cand = real_part if np.max(np.abs(real_part)) > 1e-9 * scale else imag_route
    if np.max(np.abs(cand.imag)) > 1e-6 * np.max(np.abs(cand)):
        raise NumericalBoundaryError("degenerate realification")
    v = cand.real
    out = np.zeros(spec.n)
    out[list(gamma.indices)] = v / np.sum(np.abs(v))
    return out


def _nu_extreme_point(spec: PartialDFTSpec, gamma: SupportSet) -> ExtremePoint:
    v = nullspace_vector_nu(spec, gamma)
    signs = tuple(0 if x == 0 else (1 if x > 0 else -1) for x in v)
    return ExtremePoint(tuple(float(x) for x in v), gamma, signs, exact=False)


def _iter_gammas_exact(spec: PartialDFTSpec, budget: int):
    total = math.comb(spec.n, spec.gamma_size)
    if total > budget:
        raise BudgetExceededError(
            f"{total} candidate supports exceed the budget {budget}; "
            "use sampled mode"
        )
    return combinations(range(spec.n), spec.gamma_size)


def _sample_gammas(spec: PartialDFTSpec, sample_size: int, seed: int):
    """Distinct uniform size-(|omega|+1) subsets via Floyd's algorithm."""
    if sample_size < 1:
        raise InputError("sample_size must be >= 1")
    rng = random.Random(seed)
    n, k = spec.n, spec.gamma_size
    total = math.comb(n, k)
    sample_size = min(sample_size, total)
    seen = set()
    out = []
    while len(out) < sample_size:
        chosen = set()
        for j in range(n - k, n):
            t = rng.randrange(j + 1)
            chosen.add(j if t in chosen else t)
        key = frozenset(chosen)
        if key not in seen:
            seen.add(key)
            out.append(tuple(sorted(chosen)))
    return out


def _default_method(spec: PartialDFTSpec) -> str:
    return "fcomplement" if spec.mbar is not None else "determinant"


@functools.lru_cache(maxsize=4)
def _weight_table(spec: PartialDFTSpec, method: str):
    """All candidate supports with their weights normalized to unit row sum.

    Cached so repeated membership checks against the same spec pay the
    enumeration cost once. Returns (gammas, weights) as 2-d arrays.
    """
    n, k = spec.n, spec.gamma_size
    gammas = np.array(list(combinations(range(n), k)), dtype=int)
    if method == "determinant":
        f = spec.partial_matrix()
        # batched SVD: null vector magnitudes are proportional to the minors
        stacked = f[:, gammas].transpose(1, 0, 2)
        _, sv, vh = np.linalg.svd(stacked, full_matrices=True)
        w = np.abs(vh[:, -1, :])
        # prime n guarantees every minor is nonzero, hence nullity exactly 1
        if sv.size and np.any(sv[:, -1] <= 1e-10 * max(np.max(np.abs(f)), 1.0)):
            raise NumericalBoundaryError(
                "restricted nullspace not one-dimensional within tolerance"
            )
    else:
        if spec.mbar is None:
            raise InputError(f"method {method!r} requires the contiguous band shape")
        table = _sin_log_table(n)
        if method == "fprime":
            diffs = (gammas[:, :, None] - gammas[:, None, :]) % n
            mask = ~np.eye(k, dtype=bool)
            logs = -np.where(mask, table[diffs], 0.0).sum(axis=2)
        elif method == "fcomplement":
            full = np.arange(n)
            logs = np.empty_like(gammas, dtype=float)
            for i, g in enumerate(gammas):
                comp = np.setdiff1d(full, g, assume_unique=True)
                logs[i] = table[(g[:, None] - comp[None, :]) % n].sum(axis=1)
        else:
            raise InputError(f"unknown weight method {method!r}")
        w = np.exp(logs - logs.max(axis=1, keepdims=True))
    w /= w.sum(axis=1, keepdims=True)
    return gammas, w


def masc_contains_dft(
    spec: PartialDFTSpec,
    s,
    method: str | None = None,
    budget: int = DEFAULT_GAMMA_BUDGET,
    sampled: bool = False,
    sample_size: int = 1000,
    seed: int = 0,
) -> MembershipVerdict:
    """Decide whether support s is always recoverable from the partial DFT.

    Exhaustive mode (default) checks every candidate support and is a full
    certificate. Sampled mode is one-sided: a violation certifies
    non-membership, while a clean sweep only supports membership
    (verdict returned with decided=False).

    Comparisons inside a relative tie band return decided=False rather than
    fabricating a certificate.
    """
    s = SupportSet.of(spec.n, s)
    if method is None:
        method = _default_method(spec)
    if spec.gamma_size > spec.n:
        # full row set: trivial nullspace, every support recoverable
        return MembershipVerdict(True, True, 0.5, None)
    if sampled:
        table = _sin_log_table(spec.n) if method != "determinant" else None
        worst_mass = -1.0
        worst_gamma = None
        for gamma in _sample_gammas(spec, sample_size, seed):
            logs = _log_weights(spec, gamma, method, table)
            w = np.exp(logs - logs.max())
            mass = float(
                sum(w[t] for t, k in enumerate(gamma) if k in s) / w.sum()
            )
            if mass > worst_mass:
                worst_mass = mass
                worst_gamma = gamma
    else:
        _iter_gammas_exact(spec, budget)  # budget guard
        gammas, weights = _weight_table(spec, method)
        mask = np.zeros(spec.n)
        mask[list(s.indices)] = 1.0
        masses = (weights * mask[gammas]).sum(axis=1)
        worst_idx = int(np.argmax(masses))
        worst_mass = float(masses[worst_idx])
        worst_gamma = tuple(int(i) for i in gammas[worst_idx])
    boundary = abs(worst_mass - 0.5) <= TIE_BAND_REL
    margin = 0.5 - worst_mass
    in_masc = worst_mass < 0.5
    witness = None
    if not in_masc or boundary:
        witness = _nu_extreme_point(spec, SupportSet.of(spec.n, worst_gamma))
    if boundary:
        return MembershipVerdict(False, False, margin, witness)
    if sampled and in_masc:
        return MembershipVerdict(False, True, margin, None)
    return MembershipVerdict(True, in_masc, margin, witness)


def coherence_lower_bound(spec: PartialDFTSpec):
    """Closed-form sparsity guarantee n / (2(n - |omega|)) for band row sets.

    Returns (bound, s_guaranteed) with s_guaranteed the largest integer
    strictly below the bound.
    """
    if spec.mbar is None:
        raise InputError("coherence bound requires the contiguous band shape")
    bound = Fraction(spec.n, 2 * (spec.n - spec.m))
    s_guaranteed = math.ceil(bound) - 1
    return bound, s_guaranteed


def s_max_gamma(
    spec: PartialDFTSpec,
    gamma,
    method: str | None = None,
    _table: np.ndarray | None = None,
) -> int:
    """Largest t whose t heaviest weights still sum to strictly less than
    half of the total weight on gamma."""
    gamma = SupportSet.of(spec.n, gamma)
    if method is None:
        method = _default_method(spec)
    logs = _log_weights(spec, gamma.indices, method, _table)
    w = np.exp(logs - logs.max())
    return _s_max_from_weights(w)


def _s_max_from_weights(w: np.ndarray) -> int:
    order = np.sort(w)[::-1]
    half = w.sum() / 2.0
    acc = 0.0
    t = 0
    for x in order:
        if acc + x < half:
            acc += x
            t += 1
        else:
            break
    return t


def s_max_exact(
    spec: PartialDFTSpec,
    method: str | None = None,
    budget: int = DEFAULT_GAMMA_BUDGET,
) -> int:
    """Minimum of the per-gamma sparsity over every candidate support."""
    if method is None:
        method = _default_method(spec)
    if spec.gamma_size > spec.n:
        return spec.n
    _iter_gammas_exact(spec, budget)  # budget guard
    _gammas, weights = _weight_table(spec, method)
    ordered = np.sort(weights, axis=1)[:, ::-1]
    prefix = np.cumsum(ordered, axis=1)
    # rows are normalized to unit sum; count strict prefix sums below half
    per_gamma = (prefix < 0.5).sum(axis=1)
    return int(per_gamma.min())


def s_max_sampled(
    spec: PartialDFTSpec,
    sample_size: int,
    seed: int,
    method: str | None = None,
) -> int:
    """Upper bound on the exact value from a uniform sample of supports."""
    if method is None:
        method = _default_method(spec)
    if spec.gamma_size > spec.n:
        return spec.n
    table = _sin_log_table(spec.n) if method != "determinant" else None
    best = spec.n
    for gamma in _sample_gammas(spec, sample_size, seed):
        logs = _log_weights(spec, gamma, method, table)
        best = min(best, _s_max_from_weights(np.exp(logs - logs.max())))
    return best
