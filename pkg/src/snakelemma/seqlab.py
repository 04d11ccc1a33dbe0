"""Exact sequences: verification, the snake lemma, splicing, Ext classes.

An extension class of degree i from X to Y is stored as a stable map
``X -> Omega^{-i} Y`` (Ext^i(X, Y) = stHom(X, Omega^{-i} Y) over a
self-injective algebra).  Yoneda products compose these after shifting.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from typing import NamedTuple, Sequence

import numpy as np

from .errors import ContractViolation, NotExactError, ValidationError
from .exactla import PrimeMatrix, Subspace, kernel_image, left_inverse, right_inverse
from .modcat import (
    Algebra,
    HomSpace,
    ModuleMap,
    RModule,
    StableMap,
    cosyzygy_power,
    from_jordan,
    kernel_image_cokernel,
    omega_inv_power,
    solve_hom,
    stable_reduce,
)


@dataclass(frozen=True)
class ExactSeq:
    """Modules ``A_1 .. A_m`` and maps ``A_i -> A_{i+1}``, with implicit zeros at both ends."""

    modules: tuple
    maps: tuple
    verified: bool = field(default=False, compare=False)

    def __init__(self, modules: Sequence[RModule], maps: Sequence[ModuleMap], verified: bool = False):
        object.__setattr__(self, "modules", tuple(modules))
        object.__setattr__(self, "maps", tuple(maps))
        object.__setattr__(self, "verified", verified)
        if len(self.modules) != len(self.maps) + 1:
            raise ContractViolation(f"{len(self.modules)} modules need {len(self.modules) - 1} maps")
        for i, f in enumerate(self.maps):
            if f.src != self.modules[i] or f.tgt != self.modules[i + 1]:
                raise ContractViolation(f"map {i} does not connect modules {i} and {i + 1}")

    @classmethod
    def from_maps(cls, maps: Sequence[ModuleMap]) -> "ExactSeq":
        if not maps:
            raise ContractViolation("need at least one map")
        return cls([maps[0].src] + [f.tgt for f in maps], maps)

    def __len__(self):
        return len(self.modules)

    @property
    def algebra(self) -> Algebra:
        return self.modules[0].algebra

    def verify(self) -> "ExactSeq":
        """Return a verified copy, or raise NotExactError."""
        report = verify_exact(self)
        if not report.exact:
            raise NotExactError(f"sequence is not exact: {report.failures()}")
        return replace(self, verified=True)

    def alternating_dim(self) -> int:
        return sum((-1) ** i * M.dim for i, M in enumerate(self.modules))


class PositionCheck(NamedTuple):
    position: int      # index of the module where exactness is checked
    image_dim: int     # image of the incoming map (0 at the left end)
    kernel_dim: int    # kernel of the outgoing map (whole module at the right end)
    ok: bool


class ExactnessReport(NamedTuple):
    positions: list
    alternating_sum: int
    exact: bool

    def failures(self) -> list[int]:
        return [c.position for c in self.positions if not c.ok]


def verify_exact(seq: ExactSeq) -> ExactnessReport:
    checks = []
    for i, M in enumerate(seq.modules):
        if i > 0:
            img = kernel_image(seq.maps[i - 1].matrix)[1]
        else:
            img = Subspace.zero(M.field, M.dim)
        if i < len(seq.maps):
            ker = kernel_image(seq.maps[i].matrix)[0]
        else:
            ker = Subspace.full(M.field, M.dim)
        checks.append(PositionCheck(i, img.dim, ker.dim, img == ker))
    alt = seq.alternating_dim()
    return ExactnessReport(checks, alt, all(c.ok for c in checks) and alt == 0)


def _require_exact(seq: ExactSeq, length: int | None = None):
    if length is not None and len(seq) != length:
        raise ContractViolation(f"expected a sequence of length {length}, got {len(seq)}")
    if not seq.verified and not verify_exact(seq).exact:
        raise NotExactError("sequence is not exact")


def short_exact(u: ModuleMap, v: ModuleMap) -> ExactSeq:
    return ExactSeq([u.src, u.tgt, v.tgt], [u, v]).verify()


# -- snake lemma --------------------------------------------------------------

@dataclass(frozen=True)
class SesMorphism:
    top: ExactSeq
    bottom: ExactSeq
    f1: ModuleMap
    f2: ModuleMap
    f3: ModuleMap

    def __post_init__(self):
        for s in (self.top, self.bottom):
            if len(s) != 3:
                raise ValidationError("rows must be short exact sequences")
        (a1, a2, a3), (b1, b2, b3) = self.top.modules, self.bottom.modules
        for f, s, t, name in ((self.f1, a1, b1, "f1"), (self.f2, a2, b2, "f2"), (self.f3, a3, b3, "f3")):
            if f.src != s or f.tgt != t:
                raise ValidationError(f"{name} has the wrong endpoints", name)
        u1, v1 = self.top.maps
        u2, v2 = self.bottom.maps
        if (self.f2 @ u1).matrix != (u2 @ self.f1).matrix:
            raise ValidationError("left square does not commute")
        if (self.f3 @ v1).matrix != (v2 @ self.f2).matrix:
            raise ValidationError("right square does not commute")


def connecting_map(m: SesMorphism, k3: ModuleMap, c1: ModuleMap,
                   section: PrimeMatrix | None = None) -> PrimeMatrix:
    """Matrix of ``ker f3 -> coker f1``.

    ``section`` is any linear right inverse of the top epimorphism; the
    result does not depend on it.
    """
    u1, v1 = m.top.maps
    u2, _ = m.bottom.maps
    sigma = section if section is not None else right_inverse(v1.matrix)
    pull = left_inverse(u2.matrix)
    return c1.matrix @ pull @ m.f2.matrix @ sigma @ k3.matrix


def _induced_on_kernels(k_src: ModuleMap, k_tgt: ModuleMap, g: ModuleMap) -> ModuleMap:
    # k_tgt o h = g o k_src
    if k_tgt.src.dim == 0:
        return ModuleMap.zero(k_src.src, k_tgt.src)
    return ModuleMap(k_src.src, k_tgt.src, left_inverse(k_tgt.matrix) @ g.matrix @ k_src.matrix)


def _induced_on_cokernels(c_src: ModuleMap, c_tgt: ModuleMap, g: ModuleMap) -> ModuleMap:
    # h o c_src = c_tgt o g
    if c_src.tgt.dim == 0:
        return ModuleMap.zero(c_src.tgt, c_tgt.tgt)
    return ModuleMap(c_src.tgt, c_tgt.tgt, c_tgt.matrix @ g.matrix @ right_inverse(c_src.matrix))


def snake(m: SesMorphism, section: PrimeMatrix | None = None) -> ExactSeq:
    """The six-term sequence ``ker f1 -> ker f2 -> ker f3 -> coker f1 -> coker f2 -> coker f3``."""
    u1, v1 = m.top.maps
    u2, v2 = m.bottom.maps
    d1, d2, d3 = (kernel_image_cokernel(f) for f in (m.f1, m.f2, m.f3))
    kk = [d.kernel_incl for d in (d1, d2, d3)]
    cc = [d.coker_proj for d in (d1, d2, d3)]
    conn = ModuleMap(d3.kernel, d1.cokernel, connecting_map(m, kk[2], cc[0], section))
    maps = [
        _induced_on_kernels(kk[0], kk[1], u1),
        _induced_on_kernels(kk[1], kk[2], v1),
        conn,
        _induced_on_cokernels(cc[0], cc[1], u2),
        _induced_on_cokernels(cc[1], cc[2], v2),
    ]
    return ExactSeq.from_maps(maps).verify()


# -- images, Ext classes, Yoneda products --------------------------------------

class ImagesKLM(NamedTuple):
    K: RModule
    L: RModule
    M: RModule
    delta_seq: ExactSeq   # 0 -> A -> B -> K -> 0
    gamma_seq: ExactSeq   # 0 -> K -> C -> L -> 0
    beta_seq: ExactSeq    # 0 -> L -> D -> M -> 0
    alpha_seq: ExactSeq   # 0 -> M -> E -> F -> 0


def factor_short_exact(seq: ExactSeq) -> list[ExactSeq]:
    """Split an exact sequence of length m >= 3 into m - 2 short exact pieces at the images."""
    _require_exact(seq)
    if len(seq) < 3:
        raise ContractViolation("need at least three modules")
    maps = seq.maps
    pieces = []
    incoming = maps[0]
    for f in maps[1:-1]:
        kic = kernel_image_cokernel(f)
        pieces.append(ExactSeq([incoming.src, f.src, kic.image], [incoming, kic.image_epi], True))
        incoming = kic.image_incl
    pieces.append(ExactSeq([incoming.src, maps[-1].src, maps[-1].tgt], [incoming, maps[-1]], True))
    return pieces


def images_KLM(six: ExactSeq) -> ImagesKLM:
    _require_exact(six, 6)
    d_, g_, b_, a_ = factor_short_exact(six)
    return ImagesKLM(d_.modules[2], g_.modules[2], b_.modules[2], d_, g_, b_, a_)


@dataclass(frozen=True, eq=False)
class ExtClass:
    """Element of Ext^degree(source, target), as a stable map ``source -> Omega^{-degree} target``."""

    degree: int
    source: RModule
    target: RModule
    rep: StableMap

    def __post_init__(self):
        if self.rep.src != self.source or self.rep.tgt != cosyzygy_power(self.target, self.degree):
            raise ValidationError("representative has the wrong endpoints")

    def is_zero(self) -> bool:
        return self.rep.is_zero()

    def __eq__(self, other):
        if not isinstance(other, ExtClass):
            return NotImplemented
        return (self.degree == other.degree and self.source == other.source
                and self.target == other.target and self.rep == other.rep)

    __hash__ = None

    @classmethod
    def identity(cls, X: RModule) -> "ExtClass":
        return cls(0, X, X, stable_reduce(ModuleMap.identity(X)))


def ext1_class(ses: ExactSeq) -> ExtClass:
    """Class of ``0 -> Y -> E -> X -> 0`` as a stable map ``X -> Omega^- Y``."""
    _require_exact(ses, 3)
    Y, E, X = ses.modules
    u, v = ses.maps
    sh = Y._cosyzygy
    sol = solve_hom(HomSpace(E, sh.free), lambda phi: phi @ u.matrix, sh.mono.matrix)
    if sol is None:  # cannot happen: I(Y) is injective
        raise AssertionError("hull embedding does not extend")
    phi = sol[0]
    theta = sh.epi.matrix @ phi.matrix @ right_inverse(v.matrix) if X.dim else (
        PrimeMatrix.zeros(X.field, sh.module.dim, 0))
    return ExtClass(1, X, Y, stable_reduce(ModuleMap(X, sh.module, theta)))


def has_retraction(ses: ExactSeq) -> bool:
    """Whether the monomorphism of a short exact sequence has an R-linear left inverse."""
    Y, E, _ = ses.modules
    u = ses.maps[0]
    return solve_hom(HomSpace(E, Y), lambda r: r @ u.matrix, PrimeMatrix.identity(Y.field, Y.dim)) is not None


def yoneda_compose(f: ExtClass, g: ExtClass) -> ExtClass:
    """Product of ``f`` in Ext^i(X, Y) and ``g`` in Ext^j(Y, Z), an element of Ext^(i+j)(X, Z)."""
    if f.target != g.source:
        raise ContractViolation("classes are not composable")
    shifted = omega_inv_power(g.rep.canonical_map, f.degree)
    return ExtClass(f.degree + g.degree, f.source, g.target,
                    stable_reduce(shifted @ f.rep.canonical_map))


def long_class(seq: ExactSeq) -> ExtClass:
    """Class in Ext^(m-2)(A_m, A_1) of an exact sequence of length m."""
    pieces = factor_short_exact(seq)
    cls = ext1_class(pieces[-1])
    for piece in reversed(pieces[:-1]):
        cls = yoneda_compose(cls, ext1_class(piece))
    return cls


def splice(s1: ExactSeq, s2: ExactSeq) -> ExactSeq:
    """Join ``... -> W`` (ending in an epi) and ``W -> ...`` (starting with a mono)."""
    if s1.modules[-1] != s2.modules[0]:
        raise ContractViolation("sequences do not meet at the same module")
    _require_exact(s1)
    _require_exact(s2)
    if len(s1) < 2 or len(s2) < 2:
        raise ContractViolation("each sequence needs at least one map")
    joint = s2.maps[0] @ s1.maps[-1]
    return ExactSeq.from_maps(list(s1.maps[:-1]) + [joint] + list(s2.maps[1:])).verify()


# -- morphisms of short exact sequences ----------------------------------------

class MorphismSpace(NamedTuple):
    space: Subspace                 # triples, in concatenated hom coordinates
    homs: tuple                     # the three HomSpaces
    top: ExactSeq
    bottom: ExactSeq

    def element(self, v) -> SesMorphism:
        v = np.asarray(v, dtype=np.int64)
        parts, off = [], 0
        for hs in self.homs:
            parts.append(hs.element(v[off:off + hs.dim]))
            off += hs.dim
        return SesMorphism(self.top, self.bottom, *parts)

    def basis(self) -> list[SesMorphism]:
        return [self.element(v) for v in self.space.basis]


def ses_morphism_space(top: ExactSeq, bottom: ExactSeq) -> MorphismSpace:
    _require_exact(top, 3)
    _require_exact(bottom, 3)
    homs = tuple(HomSpace(a, b) for a, b in zip(top.modules, bottom.modules))
    u1, v1 = top.maps
    u2, v2 = bottom.maps
    fld = top.algebra.field
    n_left = bottom.modules[1].dim * top.modules[0].dim
    n_right = bottom.modules[2].dim * top.modules[1].dim
    # unknowns (f1, f2, f3); equations f2 u1 - u2 f1 = 0 and f3 v1 - v2 f2 = 0
    zero_left = np.zeros(n_left, dtype=np.int64)
    zero_right = np.zeros(n_right, dtype=np.int64)
    cols = []
    for slot, hs in enumerate(homs):
        for b in hs.basis():
            B = b.matrix
            if slot == 0:
                left, right = (-(u2.matrix @ B)).a.reshape(-1), zero_right
            elif slot == 1:
                left, right = (B @ u1.matrix).a.reshape(-1), (-(v2.matrix @ B)).a.reshape(-1)
            else:
                left, right = zero_left, (B @ v1.matrix).a.reshape(-1)
            cols.append(np.concatenate([left, right]))
    total = sum(hs.dim for hs in homs)
    if total == 0:
        return MorphismSpace(Subspace.zero(fld, 0), homs, top, bottom)
    if cols and n_left + n_right:
        A = PrimeMatrix(fld, np.stack(cols, axis=1))
        space = kernel_image(A)[0]
    else:
        space = Subspace.full(fld, total)
    return MorphismSpace(space, homs, top, bottom)


# -- seeded random generation -------------------------------------------------

class RandomSuite:
    """Deterministic generator of random modules, short exact sequences and morphisms.

    All randomness flows from the numpy Generator built from ``seed``.
    """

    def __init__(self, seed, n: int = 3, p: int = 2, max_blocks: int = 4, max_dim: int = 10):
        self.rng = np.random.default_rng(seed)
        self.alg = Algebra.of(p, n)
        self.max_blocks = max_blocks
        self.max_dim = max_dim

    def sizes(self) -> tuple[int, ...]:
        n = self.alg.n
        count = int(self.rng.integers(0, self.max_blocks + 1))
        sizes = []
        for _ in range(count):
            a = int(self.rng.integers(1, n + 1))
            if sum(sizes) + a <= self.max_dim:
                sizes.append(a)
        return tuple(sizes)

    def module(self) -> RModule:
        return from_jordan(self.alg, self.sizes())

    def vector(self, dim: int) -> np.ndarray:
        return self.rng.integers(0, self.alg.p, size=dim)

    def hom(self, M: RModule, N: RModule) -> ModuleMap:
        hs = HomSpace(M, N)
        return hs.element(self.vector(hs.dim))

    def invertible(self, dim: int) -> PrimeMatrix:
        fld = self.alg.field
        while True:
            T = PrimeMatrix(fld, self.rng.integers(0, fld.p, size=(dim, dim)).reshape(dim, dim))
            if kernel_image(T)[2] == dim:
                return T

    def conjugate(self, M: RModule) -> tuple[RModule, ModuleMap]:
        """A random isomorphic copy ``M'`` of M together with an isomorphism ``M -> M'``."""
        from .exactla import inverse

        T = self.invertible(M.dim)
        Mp = RModule(M.algebra, T @ M.action @ inverse(T))
        return Mp, ModuleMap(M, Mp, T)

    def ses(self) -> ExactSeq:
        """``0 -> ker g -> P -> im g -> 0`` for a random map ``g: P -> Q``."""
        P, Q = self.module(), self.module()
        g = self.hom(P, Q)
        kic = kernel_image_cokernel(g)
        return ExactSeq([kic.kernel, P, kic.image], [kic.kernel_incl, kic.image_epi]).verify()

    def ses_morphism(self, top: ExactSeq | None = None, bottom: ExactSeq | None = None) -> SesMorphism:
        top = top or self.ses()
        bottom = bottom or self.ses()
        space = ses_morphism_space(top, bottom)
        coeffs = self.vector(space.space.dim)
        v = np.zeros(space.space.ambient_dim, dtype=np.int64)
        for c, b in zip(coeffs, space.space.basis):
            v = (v + c * b) % self.alg.p
        return space.element(v)
