"""Exact dense linear algebra over prime fields F_p.

Matrices are numpy int64 arrays with entries kept in ``[0, p)``.  Since
``p < 2**16`` every product of two residues fits in 32 bits, so integer
matmul followed by a reduction is exact for the sizes used here.

Vectors are treated as columns: a matrix with ``r`` rows and ``c`` columns
maps ``F_p^c -> F_p^r``.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .errors import ContractViolation

__all__ = [
    "PrimeField",
    "PrimeMatrix",
    "Subspace",
    "Echelon",
    "rref",
    "solve_affine",
    "kernel_image",
    "subspace_sum",
    "member",
    "left_inverse",
    "right_inverse",
    "inverse",
]

_MAX_P = 1 << 16


def _is_prime(p: int) -> bool:
    if p < 2:
        return False
    d = 2
    while d * d <= p:
        if p % d == 0:
            return False
        d += 1
    return True


@dataclass(frozen=True)
class PrimeField:
    p: int

    def __post_init__(self):
        if not isinstance(self.p, (int, np.integer)) or isinstance(self.p, bool):
            raise ContractViolation(f"field modulus must be an integer, got {self.p!r}")
        if not 2 <= self.p < _MAX_P or not _is_prime(int(self.p)):
            raise ContractViolation(f"{self.p} is not a prime in [2, 2^16)")
        object.__setattr__(self, "p", int(self.p))

    def inv(self, a: int) -> int:
        a %= self.p
        if a == 0:
            raise ZeroDivisionError("0 has no inverse")
        return pow(a, -1, self.p)

    def __repr__(self):
        return f"F_{self.p}"


class PrimeMatrix:
    """Immutable dense matrix over a prime field."""

    __slots__ = ("field", "a", "_hash")

    def __init__(self, field: PrimeField, entries, shape: tuple[int, int] | None = None):
        arr = np.array(entries, dtype=np.int64)
        if shape is not None:
            arr = arr.reshape(shape)
        elif arr.ndim == 1 and arr.size == 0:
            arr = arr.reshape(0, 0)
        if arr.ndim != 2:
            raise ContractViolation(f"matrix entries must be 2-dimensional, got ndim={arr.ndim}")
        arr %= field.p
        arr.flags.writeable = False
        self.field = field
        self.a = arr
        self._hash = None

    @classmethod
    def _wrap(cls, field: PrimeField, arr: np.ndarray) -> "PrimeMatrix":
        # arr must already be reduced; no copy
        m = cls.__new__(cls)
        arr.flags.writeable = False
        m.field = field
        m.a = arr
        m._hash = None
        return m

    @classmethod
    def zeros(cls, field: PrimeField, rows: int, cols: int) -> "PrimeMatrix":
        return cls._wrap(field, np.zeros((rows, cols), dtype=np.int64))

    @classmethod
    def identity(cls, field: PrimeField, n: int) -> "PrimeMatrix":
        return cls._wrap(field, np.eye(n, dtype=np.int64))

    @classmethod
    def from_rows(cls, field: PrimeField, rows: Sequence[Sequence[int]], cols: int | None = None):
        if len(rows) == 0:
            return cls.zeros(field, 0, cols or 0)
        return cls(field, rows)

    @classmethod
    def from_columns(cls, field: PrimeField, columns: Sequence[Sequence[int]], rows: int):
        if len(columns) == 0:
            return cls.zeros(field, rows, 0)
        return cls(field, np.array(columns, dtype=np.int64).reshape(len(columns), rows).T)

    @classmethod
    def block_diag(cls, field: PrimeField, blocks: Iterable["PrimeMatrix"]) -> "PrimeMatrix":
        blocks = list(blocks)
        r = sum(b.rows for b in blocks)
        c = sum(b.cols for b in blocks)
        out = np.zeros((r, c), dtype=np.int64)
        i = j = 0
        for b in blocks:
            out[i:i + b.rows, j:j + b.cols] = b.a
            i += b.rows
            j += b.cols
        return cls._wrap(field, out)

    @property
    def p(self) -> int:
        return self.field.p

    @property
    def rows(self) -> int:
        return self.a.shape[0]

    @property
    def cols(self) -> int:
        return self.a.shape[1]

    @property
    def shape(self) -> tuple[int, int]:
        return self.a.shape

    def _check_field(self, other: "PrimeMatrix"):
        if other.field != self.field:
            raise ContractViolation(f"field mismatch: {self.field} vs {other.field}")

    def __matmul__(self, other: "PrimeMatrix") -> "PrimeMatrix":
        self._check_field(other)
        if self.cols != other.rows:
            raise ContractViolation(f"cannot multiply {self.shape} by {other.shape}")
        return PrimeMatrix._wrap(self.field, (self.a @ other.a) % self.p)

    def __add__(self, other: "PrimeMatrix") -> "PrimeMatrix":
        self._check_field(other)
        if self.shape != other.shape:
            raise ContractViolation(f"cannot add {self.shape} and {other.shape}")
        return PrimeMatrix._wrap(self.field, (self.a + other.a) % self.p)

    def __sub__(self, other: "PrimeMatrix") -> "PrimeMatrix":
        self._check_field(other)
        if self.shape != other.shape:
            raise ContractViolation(f"cannot subtract {self.shape} and {other.shape}")
        return PrimeMatrix._wrap(self.field, (self.a - other.a) % self.p)

    def __neg__(self) -> "PrimeMatrix":
        return PrimeMatrix._wrap(self.field, (-self.a) % self.p)

    def scale(self, c: int) -> "PrimeMatrix":
        return PrimeMatrix._wrap(self.field, (self.a * (c % self.p)) % self.p)

    def __pow__(self, k: int) -> "PrimeMatrix":
        if self.rows != self.cols:
            raise ContractViolation("power of a non-square matrix")
        out = PrimeMatrix.identity(self.field, self.rows)
        for _ in range(k):
            out = out @ self
        return out

    @property
    def T(self) -> "PrimeMatrix":
        return PrimeMatrix._wrap(self.field, self.a.T.copy())

    def column(self, j: int) -> np.ndarray:
        return self.a[:, j].copy()

    def is_zero(self) -> bool:
        return not self.a.any()

    def tolist(self) -> list[list[int]]:
        return self.a.tolist()

    def __eq__(self, other):
        if not isinstance(other, PrimeMatrix):
            return NotImplemented
        return self.field == other.field and self.shape == other.shape and np.array_equal(self.a, other.a)

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.field.p, self.shape, self.a.tobytes()))
        return self._hash

    def __repr__(self):
        return f"PrimeMatrix({self.field}, {self.tolist()})"


def rref(a: np.ndarray, p: int) -> tuple[np.ndarray, list[int]]:
    """Reduced row echelon form of ``a`` mod ``p``; returns (matrix, pivot columns)."""
    a = np.array(a, dtype=np.int64) % p
    rows, cols = a.shape
    pivots: list[int] = []
    r = 0
    for c in range(cols):
        if r == rows:
            break
        nz = np.flatnonzero(a[r:, c])
        if nz.size == 0:
            continue
        i = r + int(nz[0])
        if i != r:
            a[[r, i]] = a[[i, r]]
        piv = int(a[r, c])
        if piv != 1:
            a[r] = (a[r] * pow(piv, -1, p)) % p
        col = a[:, c].copy()
        col[r] = 0
        hit = np.flatnonzero(col)
        if hit.size:
            a[hit] = (a[hit] - np.outer(col[hit], a[r])) % p
        pivots.append(c)
        r += 1
    return a, pivots


class Subspace:
    """A subspace of F_p^d held as a canonical reduced-echelon basis.

    Two subspaces are equal iff their echelon bases are identical.
    """

    __slots__ = ("field", "ambient_dim", "_rows", "pivots")

    def __init__(self, field: PrimeField, ambient_dim: int, vectors=()):
        self.field = field
        self.ambient_dim = ambient_dim
        vecs = np.array(vectors, dtype=np.int64)
        if vecs.size == 0:
            vecs = np.zeros((0, ambient_dim), dtype=np.int64)
        else:
            vecs = vecs.reshape(-1, ambient_dim)
        red, piv = rref(vecs, field.p)
        self._rows = red[: len(piv)]
        self._rows.flags.writeable = False
        self.pivots = tuple(piv)

    @classmethod
    def zero(cls, field: PrimeField, ambient_dim: int) -> "Subspace":
        return cls(field, ambient_dim)

    @classmethod
    def full(cls, field: PrimeField, ambient_dim: int) -> "Subspace":
        return cls(field, ambient_dim, np.eye(ambient_dim, dtype=np.int64))

    @property
    def dim(self) -> int:
        return len(self.pivots)

    @property
    def basis(self) -> list[np.ndarray]:
        return [r.copy() for r in self._rows]

    def basis_matrix(self) -> PrimeMatrix:
        """Basis vectors as the columns of an ``ambient_dim x dim`` matrix."""
        return PrimeMatrix._wrap(self.field, self._rows.T.copy())

    def reduce(self, v) -> np.ndarray:
        """Canonical representative of ``v`` modulo this subspace (zero on pivot coordinates)."""
        v = np.array(v, dtype=np.int64).reshape(self.ambient_dim) % self.field.p
        if self.dim:
            coeff = v[list(self.pivots)]
            v = (v - coeff @ self._rows) % self.field.p
        return v

    def __contains__(self, v) -> bool:
        return not self.reduce(v).any()

    def __eq__(self, other):
        if not isinstance(other, Subspace):
            return NotImplemented
        return (self.field == other.field and self.ambient_dim == other.ambient_dim
                and np.array_equal(self._rows, other._rows))

    def __hash__(self):
        return hash((self.field.p, self.ambient_dim, self._rows.tobytes()))

    def __repr__(self):
        return f"Subspace(dim={self.dim}, ambient={self.ambient_dim}, basis={self._rows.tolist()})"


class Echelon:
    """Incrementally grown span, used for greedy basis extension."""

    def __init__(self, p: int, dim: int):
        self.p = p
        self.dim = dim
        self.rows: list[np.ndarray] = []
        self.pivots: list[int] = []

    def reduce(self, v: np.ndarray) -> np.ndarray:
        v = np.array(v, dtype=np.int64) % self.p
        for row, c in zip(self.rows, self.pivots):
            if v[c]:
                v = (v - v[c] * row) % self.p
        return v

    def add(self, v) -> bool:
        """Add ``v`` to the span; returns False if it was already there."""
        v = self.reduce(v)
        nz = np.flatnonzero(v)
        if nz.size == 0:
            return False
        c = int(nz[0])
        v = (v * pow(int(v[c]), -1, self.p)) % self.p
        for i, row in enumerate(self.rows):
            if row[c]:
                self.rows[i] = (row - row[c] * v) % self.p
        self.rows.append(v)
        self.pivots.append(c)
        return True

    def __len__(self):
        return len(self.rows)


def _as_column(b, field: PrimeField) -> np.ndarray:
    if isinstance(b, PrimeMatrix):
        if b.cols != 1:
            raise ContractViolation(f"expected a column vector, got shape {b.shape}")
        return b.a[:, 0].copy()
    return np.array(b, dtype=np.int64).reshape(-1) % field.p


def solve_affine(A: PrimeMatrix, b) -> tuple[np.ndarray, Subspace] | None:
    """Solve ``A x = b``.

    Returns ``None`` if the system is inconsistent, otherwise the particular
    solution with every free variable set to 0 together with the nullspace.
    """
    p = A.p
    bv = _as_column(b, A.field)
    if bv.shape[0] != A.rows:
        raise ContractViolation(f"right-hand side has length {bv.shape[0]}, matrix has {A.rows} rows")
    aug = np.concatenate([A.a, bv.reshape(-1, 1)], axis=1)
    red, piv = rref(aug, p)
    if piv and piv[-1] == A.cols:
        return None
    x = np.zeros(A.cols, dtype=np.int64)
    for i, c in enumerate(piv):
        x[c] = red[i, -1]
    return x, _nullspace_from_rref(A.field, red[:, :-1], piv, A.cols)


def _nullspace_from_rref(field: PrimeField, red: np.ndarray, piv: list[int], cols: int) -> Subspace:
    p = field.p
    free = [c for c in range(cols) if c not in set(piv)]
    vecs = np.zeros((len(free), cols), dtype=np.int64)
    for k, f in enumerate(free):
        vecs[k, f] = 1
        for i, c in enumerate(piv):
            vecs[k, c] = (-red[i, f]) % p
    return Subspace(field, cols, vecs)


def kernel_image(A: PrimeMatrix) -> tuple[Subspace, Subspace, int]:
    """Kernel (in the source) and image (in the target) of ``A``, plus its rank."""
    red, piv = rref(A.a, A.p)
    kernel = _nullspace_from_rref(A.field, red, piv, A.cols)
    image = Subspace(A.field, A.rows, A.a.T)
    return kernel, image, len(piv)


def rank(A: PrimeMatrix) -> int:
    return len(rref(A.a, A.p)[1])


def subspace_sum(U: Subspace, V: Subspace) -> Subspace:
    if U.ambient_dim != V.ambient_dim or U.field != V.field:
        raise ContractViolation(f"ambient mismatch: {U.ambient_dim} vs {V.ambient_dim}")
    return Subspace(U.field, U.ambient_dim, np.concatenate([U._rows, V._rows], axis=0))


def member(v, U: Subspace) -> bool:
    v = np.array(v, dtype=np.int64).reshape(-1)
    if v.shape[0] != U.ambient_dim:
        raise ContractViolation(f"vector of length {v.shape[0]} in ambient dimension {U.ambient_dim}")
    return v in U


def inverse(A: PrimeMatrix) -> PrimeMatrix:
    if A.rows != A.cols:
        raise ContractViolation(f"cannot invert a {A.shape} matrix")
    n = A.rows
    red, piv = rref(np.concatenate([A.a, np.eye(n, dtype=np.int64)], axis=1), A.p)
    if piv[:n] != list(range(n)):
        raise ContractViolation("matrix is singular")
    return PrimeMatrix._wrap(A.field, red[:, n:].copy())


def left_inverse(A: PrimeMatrix) -> PrimeMatrix:
    """Some ``L`` with ``L A = I`` for an injective ``A``."""
    _, rows = rref(A.a.T, A.p)
    if len(rows) != A.cols:
        raise ContractViolation("matrix is not injective")
    sub_inv = inverse(PrimeMatrix._wrap(A.field, A.a[rows].copy()))
    L = np.zeros((A.cols, A.rows), dtype=np.int64)
    L[:, rows] = sub_inv.a
    return PrimeMatrix._wrap(A.field, L)


def right_inverse(A: PrimeMatrix) -> PrimeMatrix:
    """Some ``S`` with ``A S = I`` for a surjective ``A`` (a linear section)."""
    try:
        return left_inverse(A.T).T
    except ContractViolation:
        raise ContractViolation("matrix is not surjective") from None
