"""Matrix-agnostic certification machinery.

Extreme points of nullspace-and-l1-ball intersections found by minimal-support
scanning, membership checks for the family of always-recoverable supports,
the nullspace constant, full enumeration of the family, and the induced
recovery-probability lower bound.
"""

from __future__ import annotations

import json
import math
import random
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations

import numpy as np

from .errors import BudgetExceededError, InputError
from .linalg import NullspaceBasis, _rref

__all__ = [
    "SupportSet",
    "ExtremePoint",
    "SimplicialComplexSummary",
    "MembershipVerdict",
    "enumerate_extreme_points",
    "masc_contains",
    "nullspace_constant",
    "gnup_holds",
    "masc_enumerate",
    "recoverable_fraction",
]

DEFAULT_SCAN_CAP = 10**7
DEFAULT_ENUM_DIM_CAP = 24
FLOAT_TIE_BAND = 1e-9

HALF = Fraction(1, 2)


@dataclass(frozen=True, order=True)
class SupportSet:
    """A subset of coordinates {0, ..., n-1}, the unit of certification."""

    ambient_dim: int
    indices: tuple[int, ...]

    def __post_init__(self):
        if list(self.indices) != sorted(set(self.indices)):
            raise InputError("support indices must be strictly increasing")
        if self.indices and (self.indices[0] < 0 or self.indices[-1] >= self.ambient_dim):
            raise InputError("support index out of range")

    @classmethod
    def of(cls, ambient_dim, indices) -> "SupportSet":
        return cls(ambient_dim, tuple(sorted(set(int(i) for i in indices))))

    def __len__(self):
        return len(self.indices)

    def __contains__(self, i):
        return i in set(self.indices)

    def __iter__(self):
        return iter(self.indices)

    def complement(self) -> "SupportSet":
        present = set(self.indices)
        return SupportSet(
            self.ambient_dim,
            tuple(i for i in range(self.ambient_dim) if i not in present),
        )


@dataclass(frozen=True)
class ExtremePoint:
    """An l1-normalized minimal-support nullspace vector."""

    vector: tuple
    support: SupportSet
    sign_vector: tuple[int, ...]
    exact: bool = True

    def l1_mass_on(self, indices) -> Fraction | float:
        return sum(abs(self.vector[i]) for i in indices)

    def as_float(self) -> np.ndarray:
        return np.array([float(x) for x in self.vector])


@dataclass(frozen=True)
class SimplicialComplexSummary:
    """A downward-closed support family stored by its maximal faces."""

    ambient_dim: int
    maximal_faces: tuple[SupportSet, ...]
    contains_empty_only: bool

    def __post_init__(self):
        sets = [frozenset(f.indices) for f in self.maximal_faces]
        for i, a in enumerate(sets):
            for j, b in enumerate(sets):
                if i != j and a <= b:
                    raise InputError("maximal faces must be pairwise incomparable")

    def member(self, s: SupportSet) -> bool:
        need = set(s.indices)
        return not need or any(need <= set(f.indices) for f in self.maximal_faces)

    def all_faces(self):
        """Every face of the complex (exponential; small instances only)."""
        seen = {frozenset()}
        for f in self.maximal_faces:
            for k in range(1, len(f) + 1):
                for sub in combinations(f.indices, k):
                    seen.add(frozenset(sub))
        return sorted(tuple(sorted(s)) for s in seen)

    def to_json(self) -> str:
        return json.dumps(
            {
                "n": self.ambient_dim,
                "maximal_faces": [list(f.indices) for f in self.maximal_faces],
            }
        )

    @classmethod
    def from_json(cls, text: str) -> "SimplicialComplexSummary":
        d = json.loads(text)
        faces = tuple(SupportSet.of(d["n"], f) for f in d["maximal_faces"])
        empty_only = all(len(f) == 0 for f in faces)
        return cls(d["n"], faces, empty_only)


@dataclass(frozen=True)
class MembershipVerdict:
    """Outcome of a single support-set membership check."""

    decided: bool
    in_masc: bool
    margin: Fraction | float
    witness: ExtremePoint | None = None

    def to_json(self) -> str:
        wit = None
        if self.witness is not None:
            if self.witness.exact:
                wit = [str(x) for x in self.witness.vector]
            else:
                wit = [repr(float(x)) for x in self.witness.vector]
        return json.dumps(
            {
                "decided": self.decided,
                "in_masc": self.in_masc,
                "margin": str(self.margin) if self.decided else None,
                "witness": wit,
            }
        )


def _scan_budget(n: int, max_size: int) -> int:
    return sum(math.comb(n, t) for t in range(1, max_size + 1))


def _exact_restricted_nullspace(basis: NullspaceBasis, off_rows: list[int]):
    """Coefficient-space nullspace of the basis rows indexed by off_rows."""
    d = basis.dim
    if not off_rows:
        return [tuple(Fraction(int(i == j)) for j in range(d)) for i in range(d)]
    rows = [[basis.basis_vectors[j][i] for j in range(d)] for i in off_rows]
    rref, pivots = _rref(rows)
    free = [c for c in range(d) if c not in pivots]
    out = []
    for fc in free:
        v = [Fraction(0)] * d
        v[fc] = Fraction(1)
        for r, pc in enumerate(pivots):
            v[pc] = -rref[r][fc]
        out.append(tuple(v))
    return out


def _float_restricted_nullspace(arr: np.ndarray, off_rows: list[int], rtol: float):
    d = arr.shape[1]
    if not off_rows:
        return [tuple(row) for row in np.eye(d)]
    m = arr[off_rows, :]
    _, s, vt = np.linalg.svd(m, full_matrices=True)
    smax = s[0] if len(s) else 0.0
    rank = int(np.sum(s > rtol * max(smax, 1.0)))
    return [tuple(v) for v in vt[rank:]]


def enumerate_extreme_points(
    basis: NullspaceBasis,
    include_antipodes: bool = False,
    budget: int = DEFAULT_SCAN_CAP,
    rtol: float = 1e-9,
) -> list[ExtremePoint]:
    """All extreme points of nullspace-intersect-l1-ball, one per antipodal
    pair unless include_antipodes is set.

    Scans candidate supports of size at most codimension+1; a support is kept
    when the nullspace restricted to it is one-dimensional and its spanning
    vector is nonzero on every supported coordinate.
    """
    n = basis.ambient_dim
    if basis.dim == 0:
        return []
    max_size = min(basis.codimension + 1, n)
    if _scan_budget(n, max_size) > budget:
        raise BudgetExceededError(
            f"support scan needs {_scan_budget(n, max_size)} candidates, "
            f"cap is {budget}; too large for exact enumeration"
        )
    arr = None if basis.exact else basis.as_array()
    found: list[ExtremePoint] = []
    found_supports: list[set[int]] = []
    all_idx = set(range(n))
    for size in range(1, max_size + 1):
        for gamma in combinations(range(n), size):
            gset = set(gamma)
            if any(fs < gset for fs in found_supports):
                continue
            off = sorted(all_idx - gset)
            if basis.exact:
                coeffs = _exact_restricted_nullspace(basis, off)
                if len(coeffs) != 1:
                    continue
                c = coeffs[0]
                z = [
                    sum(basis.basis_vectors[j][i] * c[j] for j in range(basis.dim))
                    for i in range(n)
                ]
                if any(z[i] == 0 for i in gamma):
                    continue
                norm = sum(abs(x) for x in z)
                z = [x / norm for x in z]
                lead = next(x for x in z if x != 0)
                if lead < 0:
                    z = [-x for x in z]
                vec = tuple(z)
                exact = True
            else:
                coeffs = _float_restricted_nullspace(arr, off, rtol)
                if len(coeffs) != 1:
                    continue
                z = arr @ np.array(coeffs[0])
                scale = np.max(np.abs(z))
                if scale == 0 or np.min(np.abs(z[list(gamma)])) <= rtol * scale:
                    continue
                z = z / np.sum(np.abs(z))
                lead = z[np.flatnonzero(np.abs(z) > rtol)[0]]
                if lead < 0:
                    z = -z
                z[np.abs(z) <= rtol] = 0.0
                vec = tuple(float(x) for x in z)
                exact = False
            support = SupportSet(n, gamma)
            signs = tuple(0 if x == 0 else (1 if x > 0 else -1) for x in vec)
            found.append(ExtremePoint(vec, support, signs, exact=exact))
            found_supports.append(gset)
    if include_antipodes:
        mirrored = [
            ExtremePoint(
                tuple(-x for x in p.vector),
                p.support,
                tuple(-s for s in p.sign_vector),
                exact=p.exact,
            )
            for p in found
        ]
        found = found + mirrored
    return found


def masc_contains(
    basis: NullspaceBasis,
    s: SupportSet,
    pts: list[ExtremePoint] | None = None,
    budget: int = DEFAULT_SCAN_CAP,
) -> MembershipVerdict:
    """Decide whether every vector supported in s is always recovered.

    True exactly when every extreme point z keeps strictly less than half of
    its l1 mass on s; checking one antipode per pair suffices because the mass
    is invariant under negation.
    """
    if s.ambient_dim != basis.ambient_dim:
        raise InputError("support and basis ambient dimensions differ")
    if pts is None:
        pts = enumerate_extreme_points(basis, budget=budget)
    if not pts:
        return MembershipVerdict(True, True, HALF, None)
    exact = pts[0].exact
    worst = None
    worst_mass = None
    for p in pts:
        mass = p.l1_mass_on(s.indices)
        if worst_mass is None or mass > worst_mass:
            worst_mass = mass
            worst = p
    if exact:
        inside = worst_mass < HALF
        return MembershipVerdict(
            True, inside, HALF - worst_mass, None if inside else worst
        )
    if abs(worst_mass - 0.5) <= FLOAT_TIE_BAND:
        return MembershipVerdict(False, False, 0.5 - worst_mass, worst)
    inside = worst_mass < 0.5
    return MembershipVerdict(True, inside, 0.5 - worst_mass, None if inside else worst)


def nullspace_constant(
    s: int,
    basis: NullspaceBasis,
    pts: list[ExtremePoint] | None = None,
    budget: int = DEFAULT_SCAN_CAP,
) -> Fraction | float:
    """Largest l1 mass any extreme point can place on s coordinates.

    Zero for a trivial nullspace, by convention.
    """
    if not 1 <= s <= basis.ambient_dim:
        raise InputError("sparsity out of range")
    if pts is None:
        pts = enumerate_extreme_points(basis, budget=budget)
    if not pts:
        return Fraction(0) if basis.exact else 0.0
    best = None
    for p in pts:
        mags = sorted((abs(x) for x in p.vector), reverse=True)
        mass = sum(mags[:s])
        if best is None or mass > best:
            best = mass
    return best


def gnup_holds(
    basis: NullspaceBasis,
    family: list[SupportSet],
    budget: int = DEFAULT_SCAN_CAP,
):
    """Check membership for a whole family; returns (ok, worst (S, witness))."""
    if not family:
        raise InputError("family must be non-empty")
    pts = enumerate_extreme_points(basis, budget=budget)
    ok = True
    worst_pair = (None, None)
    worst_margin = None
    for s in family:
        v = masc_contains(basis, s, pts=pts)
        if not v.in_masc:
            ok = False
        if worst_margin is None or v.margin < worst_margin:
            worst_margin = v.margin
            worst_pair = (s, v.witness)
    return ok, worst_pair


def masc_enumerate(
    basis: NullspaceBasis,
    max_card: int | None = None,
    dim_cap: int = DEFAULT_ENUM_DIM_CAP,
    budget: int = DEFAULT_SCAN_CAP,
) -> SimplicialComplexSummary:
    """Enumerate the full family by breadth-first search over cardinality.

    A failing set prunes all its supersets, valid because the retained l1 mass
    is monotone in the support.
    """
    n = basis.ambient_dim
    if n > dim_cap:
        raise BudgetExceededError(
            f"full enumeration capped at n <= {dim_cap}; "
            "use the membership oracle for single supports"
        )
    if max_card is None:
        max_card = n
    if basis.dim == 0:
        full = SupportSet.of(n, range(n))
        return SimplicialComplexSummary(n, (full,), contains_empty_only=False)
    pts = enumerate_extreme_points(basis, budget=budget)
    levels: list[list[frozenset]] = [[frozenset()]]
    for k in range(1, max_card + 1):
        prev = set(levels[-1])
        if not prev:
            break
        candidates = set()
        for base in prev:
            for i in range(n):
                if i not in base:
                    cand = base | {i}
                    if all(cand - {j} in prev for j in cand):
                        candidates.add(cand)
        passing = []
        for cand in sorted(candidates, key=sorted):
            v = masc_contains(basis, SupportSet.of(n, cand), pts=pts)
            if v.in_masc:
                passing.append(cand)
        levels.append(passing)
    maximal = []
    for k in range(len(levels) - 1, -1, -1):
        above = levels[k + 1] if k + 1 < len(levels) else []
        for face in levels[k]:
            if not any(face < up for up in above):
                maximal.append(face)
    faces = tuple(SupportSet.of(n, f) for f in sorted(maximal, key=sorted))
    empty_only = all(len(f) == 0 for f in faces)
    return SimplicialComplexSummary(n, faces, empty_only)


def recoverable_fraction(
    basis: NullspaceBasis,
    s: int,
    mode: str = "exact",
    trials: int = 0,
    seed: int = 0,
    cap: int = DEFAULT_SCAN_CAP,
    budget: int = DEFAULT_SCAN_CAP,
) -> float:
    """Fraction of cardinality-s supports that are always recoverable."""
    n = basis.ambient_dim
    if not 1 <= s <= n:
        raise InputError("sparsity out of range")
    pts = enumerate_extreme_points(basis, budget=budget)
    if mode == "exact":
        total = math.comb(n, s)
        if total > cap:
            raise BudgetExceededError(
                f"{total} supports exceed the exact cap; use sampled mode"
            )
        hits = sum(
            masc_contains(basis, SupportSet(n, c), pts=pts).in_masc
            for c in combinations(range(n), s)
        )
        return hits / total
    if mode == "sampled":
        if trials < 1:
            raise InputError("sampled mode needs trials >= 1")
        rng = random.Random(seed)
        hits = 0
        for _ in range(trials):
            sup = SupportSet.of(n, rng.sample(range(n), s))
            hits += masc_contains(basis, sup, pts=pts).in_masc
        return hits / trials
    raise InputError(f"unknown mode {mode!r}")
