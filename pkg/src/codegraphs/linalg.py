"""Exact linear algebra over prime fields GF(p).

Matrices are small and dense, so everything is plain Gaussian elimination on
``int64`` numpy arrays reduced mod p.  Pivoting is deterministic (leftmost
column, topmost row) so results are reproducible bit for bit.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

__all__ = [
    "PrimeField",
    "MatrixGF",
    "rref",
    "rank",
    "row_basis",
    "kernel_basis",
    "orthogonal_complement",
    "row_space_equal",
    "complete_basis",
    "inverse",
]


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
class PrimeField:
    """Arithmetic context for GF(p)."""

    p: int

    def __post_init__(self) -> None:
        if not isinstance(self.p, (int, np.integer)) or not _is_prime(int(self.p)):
            raise ValueError(f"field modulus must be prime, got {self.p!r}")
        # keep a plain int even if handed a numpy scalar
        object.__setattr__(self, "p", int(self.p))

    def add(self, a: int, b: int) -> int:
        return (a + b) % self.p

    def sub(self, a: int, b: int) -> int:
        return (a - b) % self.p

    def mul(self, a: int, b: int) -> int:
        return (a * b) % self.p

    def neg(self, a: int) -> int:
        return (-a) % self.p

    def inv(self, a: int) -> int:
        a %= self.p
        if a == 0:
            raise ZeroDivisionError("0 has no inverse")
        return pow(int(a), -1, self.p)

    def elements(self) -> range:
        return range(self.p)

    def __repr__(self) -> str:
        return f"GF({self.p})"


class MatrixGF:
    """Immutable dense matrix over a prime field."""

    __slots__ = ("field", "_a")

    def __init__(self, field: PrimeField, entries, cols: int | None = None):
        a = np.array(entries, dtype=np.int64)
        if a.size == 0:
            n_rows = a.shape[0] if a.ndim == 2 else 0
            if cols is None:
                cols = a.shape[1] if a.ndim == 2 else 0
            a = np.zeros((n_rows, cols), dtype=np.int64)
        elif a.ndim == 1:
            a = a.reshape(1, -1)
        if a.ndim != 2:
            raise ValueError("matrix entries must be two-dimensional")
        if cols is not None and a.shape[1] != cols:
            raise ValueError(f"expected {cols} columns, got {a.shape[1]}")
        a = np.mod(a, field.p)
        a.setflags(write=False)
        object.__setattr__(self, "field", field)
        object.__setattr__(self, "_a", a)

    def __setattr__(self, name, value):
        raise AttributeError("MatrixGF is immutable")

    @classmethod
    def zeros(cls, field: PrimeField, rows: int, cols: int) -> MatrixGF:
        return cls(field, np.zeros((rows, cols), dtype=np.int64))

    @classmethod
    def identity(cls, field: PrimeField, n: int) -> MatrixGF:
        return cls(field, np.eye(n, dtype=np.int64))

    @classmethod
    def stack(cls, field: PrimeField, parts: Sequence[MatrixGF], cols: int) -> MatrixGF:
        arrays = [m.array for m in parts if m.rows]
        if not arrays:
            return cls.zeros(field, 0, cols)
        return cls(field, np.vstack(arrays))

    @property
    def array(self) -> np.ndarray:
        return self._a

    @property
    def rows(self) -> int:
        return self._a.shape[0]

    @property
    def cols(self) -> int:
        return self._a.shape[1]

    @property
    def shape(self) -> tuple[int, int]:
        return self._a.shape

    @property
    def T(self) -> MatrixGF:
        return MatrixGF(self.field, self._a.T.copy())

    def tolist(self) -> list[list[int]]:
        return [[int(x) for x in row] for row in self._a]

    def columns(self, idx: Iterable[int]) -> MatrixGF:
        idx = list(idx)
        return MatrixGF(self.field, self._a[:, idx], cols=len(idx))

    def row(self, i: int) -> np.ndarray:
        return self._a[i]

    def is_zero(self) -> bool:
        return not self._a.any()

    def _check(self, other: MatrixGF) -> None:
        if other.field != self.field:
            raise ValueError(f"field mismatch: {self.field} vs {other.field}")

    def __matmul__(self, other: MatrixGF) -> MatrixGF:
        self._check(other)
        if self.cols != other.rows:
            raise ValueError(f"shape mismatch {self.shape} @ {other.shape}")
        out = (self._a @ other._a) % self.field.p
        return MatrixGF(self.field, out, cols=other.cols)

    def __add__(self, other: MatrixGF) -> MatrixGF:
        self._check(other)
        return MatrixGF(self.field, self._a + other._a, cols=self.cols)

    def __sub__(self, other: MatrixGF) -> MatrixGF:
        self._check(other)
        return MatrixGF(self.field, self._a - other._a, cols=self.cols)

    def __neg__(self) -> MatrixGF:
        return MatrixGF(self.field, -self._a, cols=self.cols)

    def scale(self, c: int) -> MatrixGF:
        return MatrixGF(self.field, self._a * c, cols=self.cols)

    def __eq__(self, other) -> bool:
        if not isinstance(other, MatrixGF):
            return NotImplemented
        return (
            self.field == other.field
            and self.shape == other.shape
            and bool(np.array_equal(self._a, other._a))
        )

    def __hash__(self) -> int:
        return hash((self.field.p, self.shape, self._a.tobytes()))

    def __repr__(self) -> str:
        return f"MatrixGF({self.field}, {self.tolist()})"


def rref(m: MatrixGF) -> tuple[MatrixGF, int, list[int]]:
    """Reduced row-echelon form, rank and pivot columns of ``m``."""
    p = m.field.p
    a = m.array.copy()
    n_rows, n_cols = a.shape
    r = 0
    pivots: list[int] = []
    for c in range(n_cols):
        if r == n_rows:
            break
        nz = np.flatnonzero(a[r:, c])
        if nz.size == 0:
            continue
        piv = r + int(nz[0])
        if piv != r:
            a[[r, piv]] = a[[piv, r]]
        a[r] = (a[r] * pow(int(a[r, c]), -1, p)) % p
        col = a[:, c].copy()
        col[r] = 0
        if col.any():
            a = (a - np.outer(col, a[r])) % p
        pivots.append(c)
        r += 1
    return MatrixGF(m.field, a, cols=n_cols), r, pivots


def rank(m: MatrixGF) -> int:
    return rref(m)[1]


def row_basis(m: MatrixGF) -> MatrixGF:
    """Nonzero rows of the RREF of ``m``: the canonical basis of its row space."""
    r, k, _ = rref(m)
    return MatrixGF(m.field, r.array[:k], cols=m.cols)


def kernel_basis(m: MatrixGF) -> MatrixGF:
    """Basis (in RREF) of the right null space ``{x : m x = 0}``."""
    p = m.field.p
    r, k, pivots = rref(m)
    free = [c for c in range(m.cols) if c not in set(pivots)]
    vecs = np.zeros((len(free), m.cols), dtype=np.int64)
    for t, f in enumerate(free):
        vecs[t, f] = 1
        for i, pc in enumerate(pivots):
            vecs[t, pc] = (-r.array[i, f]) % p
    return row_basis(MatrixGF(m.field, vecs, cols=m.cols))


def orthogonal_complement(basis: MatrixGF, ambient_dim: int) -> MatrixGF:
    """Rows spanning ``{y : y . x = 0 for every row x of basis}``."""
    if basis.cols != ambient_dim:
        raise ValueError(f"basis has {basis.cols} columns, ambient dimension is {ambient_dim}")
    if basis.rows == 0:
        return MatrixGF.identity(basis.field, ambient_dim)
    return kernel_basis(basis)


def row_space_equal(a: MatrixGF, b: MatrixGF) -> bool:
    if a.field != b.field or a.cols != b.cols:
        raise ValueError("row spaces live in different ambient spaces")
    return row_basis(a) == row_basis(b)


def complete_basis(sub: MatrixGF, ambient_dim: int) -> MatrixGF:
    """Extend independent rows ``sub`` to an invertible ``ambient_dim`` square matrix.

    The rows of ``sub`` are kept verbatim on top; unit vectors e0, e1, ... are
    appended in index order whenever they enlarge the span.
    """
    if sub.cols != ambient_dim:
        raise ValueError(f"sub has {sub.cols} columns, ambient dimension is {ambient_dim}")
    k = rank(sub)
    if k != sub.rows:
        raise ValueError("rows to complete are linearly dependent")
    rows = [sub.array[i] for i in range(sub.rows)]
    for e in range(ambient_dim):
        if k == ambient_dim:
            break
        unit = np.zeros(ambient_dim, dtype=np.int64)
        unit[e] = 1
        trial = MatrixGF(sub.field, rows + [unit], cols=ambient_dim)
        if rank(trial) > k:
            rows.append(unit)
            k += 1
    return MatrixGF(sub.field, rows, cols=ambient_dim) if rows else MatrixGF.zeros(sub.field, 0, 0)


def inverse(m: MatrixGF) -> MatrixGF:
    if m.rows != m.cols:
        raise ValueError("only square matrices are invertible")
    n = m.rows
    aug = MatrixGF(m.field, np.hstack([m.array, np.eye(n, dtype=np.int64)]), cols=2 * n)
    r, _, pivots = rref(aug)
    if pivots[:n] != list(range(n)):
        raise ValueError("matrix is singular")
    return MatrixGF(m.field, r.array[:, n:], cols=n)
