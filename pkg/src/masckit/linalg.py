"""Linear algebra substrate: exact rational matrices, nullspaces, complex
determinants and DFT matrix construction.

Rational arithmetic is the default for real matrices so that all downstream
certificates are exact; float mode exists for solver-facing matrices only.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

import numpy as np

from .errors import InputError

__all__ = [
    "RealMatrix",
    "ComplexMatrix",
    "NullspaceBasis",
    "nullspace_basis",
    "complex_minor_det",
    "dft_matrix",
    "parse_matrix_text",
    "format_matrix_text",
]

# Complex determinant magnitudes below this are reported as numerically zero.
DET_ZERO_TOL = 1e-10


@dataclass(frozen=True)
class RealMatrix:
    """Dense real matrix, either exact (Fraction entries) or float mode."""

    rows: int
    cols: int
    entries: tuple  # row-major, Fractions (exact) or floats
    exact: bool = True

    def __post_init__(self):
        if self.rows < 1 or self.cols < 1:
            raise InputError("matrix must have at least one row and column")
        if len(self.entries) != self.rows * self.cols:
            raise InputError("entry count does not match rows x cols")
        if not self.exact:
            if not all(math.isfinite(e) for e in self.entries):
                raise InputError("non-finite entry in float matrix")

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence], exact: bool = True) -> "RealMatrix":
        nrows = len(rows)
        ncols = len(rows[0]) if nrows else 0
        if any(len(r) != ncols for r in rows):
            raise InputError("ragged rows")
        conv = Fraction if exact else float
        entries = tuple(conv(x) for r in rows for x in r)
        return cls(nrows, ncols, entries, exact=exact)

    def __getitem__(self, idx):
        i, j = idx
        return self.entries[i * self.cols + j]

    def row(self, i: int) -> tuple:
        return self.entries[i * self.cols : (i + 1) * self.cols]

    def to_float_array(self) -> np.ndarray:
        return np.array(
            [[float(self[i, j]) for j in range(self.cols)] for i in range(self.rows)]
        )

    def to_exact(self) -> "RealMatrix":
        if self.exact:
            return self
        return RealMatrix(
            self.rows, self.cols, tuple(Fraction(e) for e in self.entries), exact=True
        )


@dataclass(frozen=True)
class ComplexMatrix:
    """Dense complex matrix in double precision."""

    rows: int
    cols: int
    entries: tuple  # row-major complex

    def __post_init__(self):
        if len(self.entries) != self.rows * self.cols:
            raise InputError("entry count does not match rows x cols")
        if not all(cmath.isfinite(e) for e in self.entries):
            raise InputError("non-finite complex entry")

    @classmethod
    def from_array(cls, a: np.ndarray) -> "ComplexMatrix":
        a = np.asarray(a, dtype=complex)
        return cls(a.shape[0], a.shape[1], tuple(complex(x) for x in a.ravel()))

    def row(self, i: int) -> tuple:
        return self.entries[i * self.cols : (i + 1) * self.cols]

    def to_array(self) -> np.ndarray:
        return np.array(self.entries, dtype=complex).reshape(self.rows, self.cols)


@dataclass(frozen=True)
class NullspaceBasis:
    """Basis of a matrix nullspace with codimension metadata.

    Exact bases hold tuples of Fractions; float bases (used for realified DFT
    matrices) hold tuples of floats obtained from an SVD with rank tolerance.
    """

    ambient_dim: int
    basis_vectors: tuple  # tuple of length-n tuples
    exact: bool = True
    source: RealMatrix | None = field(default=None, compare=False)

    @property
    def dim(self) -> int:
        return len(self.basis_vectors)

    @property
    def codimension(self) -> int:
        return self.ambient_dim - self.dim

    def as_array(self) -> np.ndarray:
        """Basis as an n x dim float array (columns are basis vectors)."""
        if self.dim == 0:
            return np.zeros((self.ambient_dim, 0))
        return np.array([[float(x) for x in v] for v in self.basis_vectors]).T


def _rref(rows: list[list[Fraction]]) -> tuple[list[list[Fraction]], list[int]]:
    """In-place reduced row echelon form; returns (matrix, pivot columns)."""
    nrows = len(rows)
    ncols = len(rows[0])
    pivots = []
    r = 0
    for c in range(ncols):
        pr = next((i for i in range(r, nrows) if rows[i][c] != 0), None)
        if pr is None:
            continue
        rows[r], rows[pr] = rows[pr], rows[r]
        inv = 1 / rows[r][c]
        rows[r] = [x * inv for x in rows[r]]
        for i in range(nrows):
            if i != r and rows[i][c] != 0:
                f = rows[i][c]
                rows[i] = [a - f * b for a, b in zip(rows[i], rows[r])]
        pivots.append(c)
        r += 1
        if r == nrows:
            break
    return rows, pivots


def nullspace_basis(phi: RealMatrix) -> NullspaceBasis:
    """Exact rational basis of {x : phi @ x = 0}, derived from the RREF.

    Float-mode input is promoted entrywise to exact rationals (each double is
    a dyadic rational, so the promotion is lossless).
    """
    phi = phi.to_exact()
    n = phi.cols
    rows = [list(phi.row(i)) for i in range(phi.rows)]
    rref, pivots = _rref(rows)
    free = [c for c in range(n) if c not in pivots]
    basis = []
    for fc in free:
        v = [Fraction(0)] * n
        v[fc] = Fraction(1)
        for r, pc in enumerate(pivots):
            v[pc] = -rref[r][fc]
        basis.append(tuple(v))
    return NullspaceBasis(n, tuple(basis), exact=True, source=phi)


def float_nullspace_basis(a: np.ndarray, rtol: float = 1e-9) -> NullspaceBasis:
    """Orthonormal float nullspace basis via SVD with relative rank tolerance.

    Used where the source matrix has irrational entries (realified DFT rows)
    and exact rational elimination is unavailable.
    """
    a = np.asarray(a, dtype=float)
    if a.size == 0:
        raise InputError("empty matrix")
    _, s, vt = np.linalg.svd(a, full_matrices=True)
    smax = s[0] if len(s) else 0.0
    rank = int(np.sum(s > rtol * max(smax, 1.0)))
    null = vt[rank:].conj()
    return NullspaceBasis(
        a.shape[1], tuple(tuple(float(x) for x in v) for v in null), exact=False
    )


def complex_minor_det(
    m: ComplexMatrix, row_idx: Sequence[int], col_idx: Sequence[int]
) -> complex:
    """Determinant of the square submatrix m[row_idx, col_idx].

    Computed by LU with partial pivoting (LAPACK via numpy). Magnitudes below
    DET_ZERO_TOL times the scale of the selected entries signal
    ill-conditioning for prime-dimension DFT minors, which are provably
    nonzero; callers may test with :func:`minor_is_numerically_zero`.
    """
    if len(row_idx) != len(col_idx):
        raise InputError("row and column selections differ in size")
    k = len(row_idx)
    if k == 0:
        return 1.0 + 0.0j
    if k > min(m.rows, m.cols):
        raise InputError("selection larger than matrix")
    a = m.to_array()[np.ix_(list(row_idx), list(col_idx))]
    return complex(np.linalg.det(a))


def minor_is_numerically_zero(det: complex, entry_scale: float, k: int) -> bool:
    """Flag a determinant whose magnitude is below the noise floor."""
    return abs(det) <= DET_ZERO_TOL * max(entry_scale, 1.0) ** k


def dft_matrix(n: int) -> ComplexMatrix:
    """Unitary n x n DFT matrix with entries xi**(k*l) / sqrt(n).

    Each power of xi = exp(-2*pi*i/n) is evaluated from scratch with
    cos/sin so phase error stays bounded for large n.
    """
    if n < 1:
        raise InputError("n must be positive")
    scale = 1.0 / math.sqrt(n)
    entries = []
    for k in range(n):
        for l in range(n):
            ang = -2.0 * math.pi * ((k * l) % n) / n
            entries.append(scale * complex(math.cos(ang), math.sin(ang)))
    return ComplexMatrix(n, n, tuple(entries))


def dft_root_powers(n: int) -> np.ndarray:
    """Array of xi**k for k in 0..n-1, each evaluated directly."""
    ks = np.arange(n)
    ang = -2.0 * np.pi * ks / n
    return np.cos(ang) + 1j * np.sin(ang)


# ---------------------------------------------------------------------------
# Matrix text format: first line "rows cols", then row-major entries.
# Rationals are written p/q, complex numbers a+bi.


def _parse_entry(tok: str):
    if "/" in tok:
        return Fraction(tok)
    if tok.endswith("i") or tok.endswith("j"):
        return complex(tok.replace("i", "j"))
    return Fraction(tok)


def parse_matrix_text(text: str):
    """Parse the CLI matrix format into a RealMatrix or ComplexMatrix."""
    toks = text.split()
    if len(toks) < 2:
        raise InputError("matrix text too short")
    rows, cols = int(toks[0]), int(toks[1])
    vals = [_parse_entry(t) for t in toks[2:]]
    if len(vals) != rows * cols:
        raise InputError("matrix text has wrong number of entries")
    if any(isinstance(v, complex) for v in vals):
        return ComplexMatrix(rows, cols, tuple(complex(v) for v in vals))
    return RealMatrix(rows, cols, tuple(vals), exact=True)


def _format_entry(x) -> str:
    if isinstance(x, complex):
        return f"{x.real:+.17g}{x.imag:+.17g}i"
    if isinstance(x, Fraction):
        return str(x)
    return repr(float(x))


def format_matrix_text(m) -> str:
    lines = [f"{m.rows} {m.cols}"]
    for i in range(m.rows):
        lines.append(" ".join(_format_entry(x) for x in m.row(i)))
    return "\n".join(lines) + "\n"
