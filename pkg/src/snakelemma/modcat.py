"""Finite-dimensional modules over R = F_p[x]/(x^n) and their stable category.

A module is a vector space with a nilpotent operator (the action of x);
a homomorphism is a matrix commuting with the two actions.  Every module
decomposes into Jordan blocks J_a (a single chain of length a); J_n = R is
projective and injective, and the stable category kills exactly the maps
factoring through sums of J_n.

Canonical models (``from_jordan``) list blocks in decreasing size; inside a
block of size a the basis is the chain ``g, xg, ..., x^(a-1) g``.  Hulls,
covers, (co)syzygies and hom-space coordinates all go through these models,
so iterating a construction gives literally equal modules.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property, lru_cache
from typing import NamedTuple, Sequence

import numpy as np

from .errors import ContractViolation, ValidationError
from .exactla import (
    Echelon,
    PrimeField,
    PrimeMatrix,
    Subspace,
    inverse,
    kernel_image,
    left_inverse,
    right_inverse,
    solve_affine,
)

JordanType = tuple  # block sizes in decreasing order


@dataclass(frozen=True)
class Algebra:
    field: PrimeField
    n: int

    def __post_init__(self):
        if not isinstance(self.n, int) or self.n < 1:
            raise ValidationError(f"nilpotency order must be >= 1, got {self.n!r}")

    @classmethod
    def of(cls, p: int, n: int) -> "Algebra":
        return cls(PrimeField(p), n)

    @property
    def p(self) -> int:
        return self.field.p

    def __repr__(self):
        return f"F_{self.p}[x]/(x^{self.n})"


@dataclass(frozen=True)
class RModule:
    algebra: Algebra
    action: PrimeMatrix

    def __post_init__(self):
        X = self.action
        if X.rows != X.cols:
            raise ValidationError(f"action must be square, got {X.shape}")
        if X.field != self.algebra.field:
            raise ValidationError("action matrix lives over the wrong field")
        if not (X ** self.algebra.n).is_zero():
            raise ValidationError(f"action is not killed by x^{self.algebra.n}")

    @property
    def dim(self) -> int:
        return self.action.rows

    @property
    def field(self) -> PrimeField:
        return self.algebra.field

    @cached_property
    def jordan(self) -> "JordanForm":
        return _jordan_decompose(self)

    @cached_property
    def _cosyzygy(self) -> "_Shift":
        return _build_cosyzygy(self)

    @cached_property
    def _syzygy(self) -> "_Shift":
        return _build_syzygy(self)

    def __repr__(self):
        return f"RModule(dim={self.dim}, action={self.action.tolist()})"


@dataclass(frozen=True)
class ModuleMap:
    src: RModule
    tgt: RModule
    matrix: PrimeMatrix

    def __post_init__(self):
        if self.src.algebra != self.tgt.algebra:
            raise ValidationError("source and target live over different algebras")
        if self.matrix.shape != (self.tgt.dim, self.src.dim):
            raise ValidationError(
                f"matrix shape {self.matrix.shape} does not match {self.tgt.dim} x {self.src.dim}")
        if self.matrix @ self.src.action != self.tgt.action @ self.matrix:
            raise ValidationError("matrix does not commute with the x-action")

    @classmethod
    def identity(cls, M: RModule) -> "ModuleMap":
        return cls(M, M, PrimeMatrix.identity(M.field, M.dim))

    @classmethod
    def zero(cls, M: RModule, N: RModule) -> "ModuleMap":
        return cls(M, N, PrimeMatrix.zeros(M.field, N.dim, M.dim))

    def __matmul__(self, other: "ModuleMap") -> "ModuleMap":
        """Composition ``self o other``."""
        if other.tgt != self.src:
            raise ContractViolation("maps are not composable")
        return ModuleMap(other.src, self.tgt, self.matrix @ other.matrix)

    def __add__(self, other: "ModuleMap") -> "ModuleMap":
        _same_endpoints(self, other)
        return ModuleMap(self.src, self.tgt, self.matrix + other.matrix)

    def __sub__(self, other: "ModuleMap") -> "ModuleMap":
        _same_endpoints(self, other)
        return ModuleMap(self.src, self.tgt, self.matrix - other.matrix)

    def __neg__(self) -> "ModuleMap":
        return ModuleMap(self.src, self.tgt, -self.matrix)

    def scale(self, c: int) -> "ModuleMap":
        return ModuleMap(self.src, self.tgt, self.matrix.scale(c))

    def is_zero(self) -> bool:
        return self.matrix.is_zero()

    def is_injective(self) -> bool:
        return kernel_image(self.matrix)[2] == self.src.dim

    def is_surjective(self) -> bool:
        return kernel_image(self.matrix)[2] == self.tgt.dim


def _same_endpoints(f: ModuleMap, g: ModuleMap):
    if f.src != g.src or f.tgt != g.tgt:
        raise ContractViolation("maps have different endpoints")


def _same_algebra(M: RModule, N: RModule):
    if M.algebra != N.algebra:
        raise ValidationError(f"modules over different algebras: {M.algebra} vs {N.algebra}")


def _map(src: RModule, tgt: RModule, arr: np.ndarray) -> ModuleMap:
    return ModuleMap(src, tgt, PrimeMatrix(src.field, arr))


# -- Jordan forms -------------------------------------------------------------

def canonical_action(field: PrimeField, sizes: Sequence[int]) -> PrimeMatrix:
    d = sum(sizes)
    X = np.zeros((d, d), dtype=np.int64)
    off = 0
    for a in sizes:
        for t in range(a - 1):
            X[off + t + 1, off + t] = 1
        off += a
    return PrimeMatrix(field, X)


@lru_cache(maxsize=4096)
def _canonical_module(alg: Algebra, sizes: tuple[int, ...]) -> RModule:
    return RModule(alg, canonical_action(alg.field, sizes))


def from_jordan(alg: Algebra, sizes: Sequence[int]) -> RModule:
    """Canonical module ``J_{a1} + J_{a2} + ...`` with blocks sorted by decreasing size."""
    sizes = tuple(sorted((int(a) for a in sizes), reverse=True))
    for a in sizes:
        if not 1 <= a <= alg.n:
            raise ValidationError(f"Jordan block size {a} outside [1, {alg.n}]")
    return _canonical_module(alg, sizes)


class JordanForm(NamedTuple):
    sizes: JordanType
    canonical: RModule
    to_canonical: PrimeMatrix    # M -> canonical
    from_canonical: PrimeMatrix  # canonical -> M; columns are the chain vectors

    def offsets(self) -> list[int]:
        return list(np.cumsum((0,) + self.sizes[:-1])) if self.sizes else []


def _jordan_decompose(M: RModule) -> JordanForm:
    alg, p, X = M.algebra, M.field.p, M.action
    d = M.dim
    powers = [PrimeMatrix.identity(M.field, d)]
    for _ in range(alg.n):
        powers.append(powers[-1] @ X)
    kernels = [kernel_image(P)[0] for P in powers]  # kernels[a] = ker x^a

    heads: list[tuple[int, np.ndarray]] = []
    for a in range(alg.n, 0, -1):
        span = Echelon(p, d)
        for v in kernels[a - 1].basis:
            span.add(v)
        for b, h in heads:
            span.add(powers[b - a].a @ h % p)
        for v in kernels[a].basis:
            if span.add(v):
                heads.append((a, v))

    sizes = tuple(a for a, _ in heads)
    canon = from_jordan(alg, sizes)
    if X == canon.action:
        eye = PrimeMatrix.identity(M.field, d)
        return JordanForm(sizes, canon, eye, eye)
    cols = []
    for a, h in heads:
        v = h
        for _ in range(a):
            cols.append(v)
            v = X.a @ v % p
    T = PrimeMatrix.from_columns(M.field, cols, d)
    return JordanForm(sizes, canon, inverse(T), T)


def jordan_type(M: RModule) -> JordanType:
    return M.jordan.sizes


def to_canonical(M: RModule) -> ModuleMap:
    """The isomorphism from ``M`` onto its canonical model."""
    jf = M.jordan
    return ModuleMap(M, jf.canonical, jf.to_canonical)


# -- hom spaces ---------------------------------------------------------------

@lru_cache(maxsize=4096)
def _phom_block(alg: Algebra, a: int, b: int) -> tuple[int, ...]:
    """Shifts k of the basis maps J_a -> J_b (g -> x^k g) that factor through a projective.

    Computed from the projective cover J_n -> J_b: the span of pi o chi for
    chi in Hom(J_a, J_n), written in the basis of Hom(J_a, J_b).
    """
    n = alg.n
    shifts = list(range(max(0, b - a), b))
    span = Echelon(alg.p, len(shifts))
    for j in range(max(0, n - a), n):      # chi: g_a -> x^j g_n
        k = j                              # pi sends x^j g_n to x^j g_b
        v = np.zeros(len(shifts), dtype=np.int64)
        if k < b:
            v[shifts.index(k)] = 1
        span.add(v)
    sub = Subspace(alg.field, len(shifts), span.rows)
    for row, c in zip(sub.basis, sub.pivots):
        if np.count_nonzero(row) != 1:
            raise AssertionError("block PHom is not a coordinate subspace")
    return tuple(shifts[c] for c in sub.pivots)


class HomSpace:
    """Coordinates on Hom(M, N).

    The basis is indexed by (block i of M, block j of N, shift k): in
    canonical coordinates the map sends the generator of block i to
    ``x^k`` times the generator of block j.  Maps factoring through a
    projective are exactly the coordinates with ``k >= n - a_i``.
    """

    def __init__(self, M: RModule, N: RModule):
        _same_algebra(M, N)
        self.M, self.N = M, N
        self.field = M.field
        jm, jn = M.jordan, N.jordan
        om, on = jm.offsets(), jn.offsets()
        index, phom = [], []
        rows, cols, ids = [], [], []
        for i, a in enumerate(jm.sizes):
            for j, b in enumerate(jn.sizes):
                pk = set(_phom_block(M.algebra, a, b))
                for k in range(max(0, b - a), b):
                    c = len(index)
                    index.append((i, j, k))
                    if k in pk:
                        phom.append(c)
                    for t in range(b - k):
                        rows.append(on[j] + k + t)
                        cols.append(om[i] + t)
                        ids.append(c)
        self.index = index
        self._rows = np.array(rows, dtype=np.int64)
        self._cols = np.array(cols, dtype=np.int64)
        self._ids = np.array(ids, dtype=np.int64)
        lead = [on[j] + k for (i, j, k) in index]
        head = [om[i] for (i, j, k) in index]
        self._lead = np.array(lead, dtype=np.int64)
        self._head = np.array(head, dtype=np.int64)
        self._phom_coords = phom

    @property
    def dim(self) -> int:
        return len(self.index)

    @cached_property
    def phom(self) -> Subspace:
        vecs = np.zeros((len(self._phom_coords), self.dim), dtype=np.int64)
        for r, c in enumerate(self._phom_coords):
            vecs[r, c] = 1
        return Subspace(self.field, self.dim, vecs)

    @property
    def stable_dim(self) -> int:
        return self.dim - len(self._phom_coords)

    def from_coords(self, c) -> PrimeMatrix:
        p = self.field.p
        c = np.asarray(c, dtype=np.int64) % p
        E = np.zeros((self.N.dim, self.M.dim), dtype=np.int64)
        if self.dim:
            np.add.at(E, (self._rows, self._cols), c[self._ids])
        jm, jn = self.M.jordan, self.N.jordan
        return jn.from_canonical @ PrimeMatrix(self.field, E) @ jm.to_canonical

    def coords(self, f) -> np.ndarray:
        mat = f.matrix if isinstance(f, ModuleMap) else f
        jm, jn = self.M.jordan, self.N.jordan
        canon = (jn.to_canonical @ mat @ jm.from_canonical).a
        return canon[self._lead, self._head].copy() if self.dim else np.zeros(0, dtype=np.int64)

    def element(self, c) -> ModuleMap:
        return ModuleMap(self.M, self.N, self.from_coords(c))

    def basis(self) -> list[ModuleMap]:
        eye = np.eye(self.dim, dtype=np.int64)
        return [self.element(eye[k]) for k in range(self.dim)]


def hom_basis(M: RModule, N: RModule) -> list[ModuleMap]:
    return HomSpace(M, N).basis()


def solve_combination(field: PrimeField, vectors: Sequence[np.ndarray], target: np.ndarray,
                      ambient: int):
    """Solve ``sum c_k vectors[k] = target``; same return contract as ``solve_affine``."""
    if vectors:
        A = PrimeMatrix(field, np.stack([np.asarray(v).reshape(-1) for v in vectors], axis=1))
    else:
        A = PrimeMatrix.zeros(field, ambient, 0)
    return solve_affine(A, np.asarray(target).reshape(-1))


def solve_hom(hs: HomSpace, op, target: PrimeMatrix) -> tuple[ModuleMap, list[ModuleMap]] | None:
    """Find ``phi`` in ``hs`` with ``op(phi) == target`` for a linear ``op`` on matrices.

    Returns the canonical solution (free coordinates zero) and a basis of the
    homogeneous solutions, or None.
    """
    vecs = [op(b.matrix).a.reshape(-1) for b in hs.basis()]
    sol = solve_combination(hs.field, vecs, target.a.reshape(-1), target.rows * target.cols)
    if sol is None:
        return None
    x, null = sol
    return hs.element(x), [hs.element(v) for v in null.basis]


# -- kernels, images, cokernels, sums ----------------------------------------

class KernelImageCokernel(NamedTuple):
    kernel: RModule
    kernel_incl: ModuleMap
    image: RModule
    image_incl: ModuleMap
    image_epi: ModuleMap
    cokernel: RModule
    coker_proj: ModuleMap


def submodule(M: RModule, basis: PrimeMatrix) -> tuple[RModule, ModuleMap]:
    """Module on the column span of ``basis`` (which must be x-stable), with its inclusion."""
    if basis.cols == 0:
        K = RModule(M.algebra, PrimeMatrix.zeros(M.field, 0, 0))
        return K, ModuleMap(K, M, PrimeMatrix.zeros(M.field, M.dim, 0))
    L = left_inverse(basis)
    K = RModule(M.algebra, L @ M.action @ basis)
    return K, ModuleMap(K, M, basis)


def quotient(M: RModule, sub: Subspace) -> tuple[RModule, ModuleMap, PrimeMatrix]:
    """Quotient by an x-stable subspace; returns (module, projection, linear section).

    Quotient coordinates are the non-pivot coordinates after reducing against
    the echelon basis of ``sub``.
    """
    p, d = M.field.p, M.dim
    piv = list(sub.pivots)
    free = [c for c in range(d) if c not in set(piv)]
    rows = sub.basis_matrix().a.T
    C = np.eye(d, dtype=np.int64)[free]
    if piv:
        C = (C - rows[:, free].T @ np.eye(d, dtype=np.int64)[piv]) % p
    S = np.eye(d, dtype=np.int64)[:, free]
    C, S = PrimeMatrix(M.field, C), PrimeMatrix(M.field, S)
    Q = RModule(M.algebra, C @ M.action @ S)
    return Q, ModuleMap(M, Q, C), S


def kernel_image_cokernel(f: ModuleMap) -> KernelImageCokernel:
    ker, img, _ = kernel_image(f.matrix)
    K, k = submodule(f.src, ker.basis_matrix())
    I, j = submodule(f.tgt, img.basis_matrix())
    if I.dim:
        e = ModuleMap(f.src, I, left_inverse(j.matrix) @ f.matrix)
    else:
        e = ModuleMap.zero(f.src, I)
    C, c, _ = quotient(f.tgt, img)
    return KernelImageCokernel(K, k, I, j, e, C, c)


class DirectSum(NamedTuple):
    module: RModule
    inj1: ModuleMap
    inj2: ModuleMap
    proj1: ModuleMap
    proj2: ModuleMap


def direct_sum(M: RModule, N: RModule) -> DirectSum:
    _same_algebra(M, N)
    F = M.field
    S = RModule(M.algebra, PrimeMatrix.block_diag(F, [M.action, N.action]))
    e1 = np.eye(M.dim + N.dim, dtype=np.int64)
    return DirectSum(
        S,
        _map(M, S, e1[:, :M.dim]),
        _map(N, S, e1[:, M.dim:]),
        _map(S, M, e1[:M.dim, :]),
        _map(S, N, e1[M.dim:, :]),
    )


# -- hulls, covers, (co)syzygies ---------------------------------------------

class _Shift(NamedTuple):
    module: RModule          # Omega^- M or Omega M (canonical)
    free: RModule            # I(M) or P(M), canonical R^s
    mono: ModuleMap          # M -> I(M)  or  Omega M -> P(M)
    epi: ModuleMap           # I(M) -> Omega^- M  or  P(M) -> M
    section: PrimeMatrix     # linear section of epi


def _shift_order(sizes, n):
    """Blocks of the (co)syzygy: (new size, old block index), sorted canonically."""
    pairs = [(n - a, i) for i, a in enumerate(sizes) if a < n]
    pairs.sort(key=lambda t: -t[0])
    return pairs


def _build_cosyzygy(M: RModule) -> _Shift:
    alg, n = M.algebra, M.algebra.n
    jf = M.jordan
    s = len(jf.sizes)
    I = from_jordan(alg, (n,) * s)
    offs = jf.offsets()
    E = np.zeros((n * s, M.dim), dtype=np.int64)
    for i, a in enumerate(jf.sizes):
        for t in range(a):
            E[i * n + n - a + t, offs[i] + t] = 1
    iota = ModuleMap(M, I, PrimeMatrix(M.field, E) @ jf.to_canonical)

    order = _shift_order(jf.sizes, n)
    Om = from_jordan(alg, [c for c, _ in order])
    Q = np.zeros((Om.dim, n * s), dtype=np.int64)
    off = 0
    for c, i in order:
        for t in range(c):
            Q[off + t, i * n + t] = 1
        off += c
    q = _map(I, Om, Q)
    return _Shift(Om, I, iota, q, PrimeMatrix(M.field, Q.T.copy()))


def _build_syzygy(M: RModule) -> _Shift:
    alg, n = M.algebra, M.algebra.n
    jf = M.jordan
    t_ = len(jf.sizes)
    P = from_jordan(alg, (n,) * t_)
    offs = jf.offsets()
    Pi = np.zeros((M.dim, n * t_), dtype=np.int64)
    for i, a in enumerate(jf.sizes):
        for t in range(a):
            Pi[offs[i] + t, i * n + t] = 1
    pi = ModuleMap(P, M, jf.from_canonical @ PrimeMatrix(M.field, Pi))

    order = _shift_order(jf.sizes, n)
    Om = from_jordan(alg, [c for c, _ in order])
    J = np.zeros((n * t_, Om.dim), dtype=np.int64)
    off = 0
    for c, i in order:
        a = jf.sizes[i]
        for t in range(c):
            J[i * n + a + t, off + t] = 1
        off += c
    incl = _map(Om, P, J)
    return _Shift(Om, P, incl, pi, right_inverse(pi.matrix))


def injective_hull(M: RModule) -> tuple[RModule, ModuleMap]:
    sh = M._cosyzygy
    return sh.free, sh.mono


def cosyzygy(M: RModule):
    """``(Omega^- M, 0 -> M -> I(M) -> Omega^- M -> 0)``."""
    from .seqlab import ExactSeq

    sh = M._cosyzygy
    return sh.module, ExactSeq([M, sh.free, sh.module], [sh.mono, sh.epi])


def projective_cover(M: RModule) -> tuple[RModule, ModuleMap]:
    sh = M._syzygy
    return sh.free, sh.epi


def syzygy(M: RModule):
    """``(Omega M, 0 -> Omega M -> P(M) -> M -> 0)``."""
    from .seqlab import ExactSeq

    sh = M._syzygy
    return sh.module, ExactSeq([sh.module, sh.free, M], [sh.mono, sh.epi])


def cosyzygy_power(M: RModule, k: int) -> RModule:
    for _ in range(k):
        M = M._cosyzygy.module
    return M


def syzygy_power(M: RModule, k: int) -> RModule:
    for _ in range(k):
        M = M._syzygy.module
    return M


def free_module_map(P: RModule, Y: RModule, images: Sequence[np.ndarray]) -> ModuleMap:
    """R-linear map from a canonical free module ``R^s`` sending generator i to ``images[i]``."""
    n, p = P.algebra.n, P.field.p
    F = np.zeros((Y.dim, P.dim), dtype=np.int64)
    for i, y in enumerate(images):
        v = np.asarray(y, dtype=np.int64) % p
        for t in range(n):
            F[:, i * n + t] = v
            v = Y.action.a @ v % p
    return _map(P, Y, F)


def omega_inv_map(f: ModuleMap) -> ModuleMap:
    """The induced map ``Omega^- M -> Omega^- N``.

    Extends ``iota_N o f`` over the hull ``I(M)`` generator by generator (the
    free coordinates of each extension problem are zero), then passes to
    cokernels.
    """
    M, N = f.src, f.tgt
    sm, sn = M._cosyzygy, N._cosyzygy
    n = M.algebra.n
    jf = M.jordan
    offs = jf.offsets()
    XI = sn.free.action
    target = (sn.mono.matrix @ f.matrix).a
    images = []
    for i, a in enumerate(jf.sizes):
        w = target @ jf.from_canonical.a[:, offs[i]] % M.field.p
        sol = solve_affine(XI ** (n - a), w)
        if sol is None:  # cannot happen: I(N) is injective
            raise AssertionError("hull extension problem is unsolvable")
        images.append(sol[0])
    F = free_module_map(sm.free, sn.free, images)
    return ModuleMap(sm.module, sn.module, sn.epi.matrix @ F.matrix @ sm.section)


def omega_inv_power(f: ModuleMap, k: int) -> ModuleMap:
    for _ in range(k):
        f = omega_inv_map(f)
    return f


def phom_subspace(M: RModule, N: RModule) -> Subspace:
    """Maps ``M -> N`` factoring through a projective, in ``HomSpace(M, N)`` coordinates.

    Spanned by ``pi o chi`` for ``chi`` running over a basis of Hom(M, P(N)),
    with ``pi: P(N) -> N`` the projective cover.
    """
    hs = HomSpace(M, N)
    P, pi = projective_cover(N)
    vecs = [hs.coords(pi @ chi) for chi in hom_basis(M, P)]
    return Subspace(M.field, hs.dim, vecs)


# -- stable maps --------------------------------------------------------------

class StableMap:
    """A homomorphism modulo maps factoring through projectives."""

    __slots__ = ("underlying", "canonical", "_hs")

    def __init__(self, underlying: ModuleMap, canonical: PrimeMatrix, hs: HomSpace | None = None):
        self.underlying = underlying
        self.canonical = canonical
        self._hs = hs

    @property
    def src(self) -> RModule:
        return self.underlying.src

    @property
    def tgt(self) -> RModule:
        return self.underlying.tgt

    @property
    def homspace(self) -> HomSpace:
        if self._hs is None:
            self._hs = HomSpace(self.src, self.tgt)
        return self._hs

    @property
    def canonical_map(self) -> ModuleMap:
        return ModuleMap(self.src, self.tgt, self.canonical)

    def is_zero(self) -> bool:
        return self.canonical.is_zero()

    def __matmul__(self, other: "StableMap") -> "StableMap":
        return stable_reduce(self.underlying @ other.underlying)

    def __eq__(self, other):
        if not isinstance(other, StableMap):
            return NotImplemented
        return self.src == other.src and self.tgt == other.tgt and self.canonical == other.canonical

    def __hash__(self):
        return hash(self.canonical)

    def __repr__(self):
        return f"StableMap({self.canonical.tolist()})"


def stable_reduce(f: ModuleMap, hs: HomSpace | None = None) -> StableMap:
    hs = hs or HomSpace(f.src, f.tgt)
    c = hs.phom.reduce(hs.coords(f))
    return StableMap(f, hs.from_coords(c), hs)


def stable_equal(f: ModuleMap, g: ModuleMap) -> bool:
    _same_endpoints(f, g)
    hs = HomSpace(f.src, f.tgt)
    return hs.coords(f - g) in hs.phom


def is_stably_zero(f: ModuleMap) -> bool:
    hs = HomSpace(f.src, f.tgt)
    return hs.coords(f) in hs.phom


def sthom_dim(M: RModule, N: RModule) -> int:
    return HomSpace(M, N).stable_dim
