"""Cones and Toda brackets in the stable module category.

The shift is the cosyzygy ``Omega^-``.  For a stable map ``y: Y -> Z`` the
cone is the cokernel ``V`` of ``(iota_Y, y): Y -> I(Y) + Z``, which fits into
the triangle ``Y -> Z -> V -> Omega^- Y``.

For composable ``x: X -> Y``, ``y: Y -> Z``, ``z: Z -> W`` the bracket
``<z, y, x>`` collects the composites ``f o g`` with ``g: Omega^- X -> V``
lifting ``Omega^- x`` and ``f: V -> W`` extending ``z``.  It is empty or a
coset of ``z Hom(Omega^- X, Z) + Hom(Omega^- Y, W) Omega^- x``, so deciding
whether it contains zero takes one representative and one membership test.
"""

from __future__ import annotations

from typing import NamedTuple

import numpy as np

from .errors import ContractViolation
from .exactla import PrimeMatrix, Subspace, member, right_inverse, subspace_sum
from .modcat import (
    HomSpace,
    ModuleMap,
    RModule,
    StableMap,
    direct_sum,
    kernel_image_cokernel,
    omega_inv_map,
    solve_combination,
    stable_reduce,
    to_canonical,
)


class StableCone(NamedTuple):
    of: StableMap
    V: RModule
    ins: ModuleMap    # Z -> V
    proj: ModuleMap   # V -> Omega^- Y


def cone(y: StableMap) -> StableCone:
    Y, Z = y.src, y.tgt
    sh = Y._cosyzygy
    ds = direct_sum(sh.free, Z)
    mono = ModuleMap(Y, ds.module, (ds.inj1 @ sh.mono).matrix + ds.inj2.matrix @ y.canonical)
    kic = kernel_image_cokernel(mono)
    c = kic.coker_proj
    iso = to_canonical(kic.cokernel)
    V = iso.tgt
    ins = iso @ c @ ds.inj2
    # q_Y o pr_1 kills the image of Y, so it factors through the cokernel
    down = sh.epi.matrix @ ds.proj1.matrix @ right_inverse(c.matrix) if V.dim else (
        PrimeMatrix.zeros(Y.field, sh.module.dim, 0))
    proj = ModuleMap(V, sh.module, down @ kic.cokernel.jordan.from_canonical)
    return StableCone(y, V, ins, proj)


class BracketVerdict(NamedTuple):
    defined: bool
    representative: StableMap | None
    indeterminacy: Subspace | None   # in HomSpace(Omega^- X, W) coordinates, contains PHom
    contains_zero: bool
    homspace: HomSpace | None = None


class _LiftProblem(NamedTuple):
    particular: ModuleMap
    homogeneous: list  # ModuleMaps whose addition keeps the constraint


def _stable_solve(hs: HomSpace, target_hs: HomSpace, op, target: ModuleMap) -> _LiftProblem | None:
    """Find ``u`` in ``hs`` with ``op(u) - target`` factoring through a projective."""
    basis = hs.basis()
    vecs = [target_hs.coords(op(b)) for b in basis]
    vecs += target_hs.phom.basis
    sol = solve_combination(hs.field, vecs, target_hs.coords(target), target_hs.dim)
    if sol is None:
        return None
    x, null = sol
    k = hs.dim
    homog = [hs.element(v[:k]) for v in null.basis]
    return _LiftProblem(hs.element(x[:k]), homog)


class _BracketSetup(NamedTuple):
    cone: StableCone
    x1: ModuleMap          # Omega^- x
    g: _LiftProblem
    f: _LiftProblem
    out: HomSpace          # Hom(Omega^- X, W)


def _check_composable(x: StableMap, y: StableMap, z: StableMap):
    if x.tgt != y.src or y.tgt != z.src:
        raise ContractViolation("bracket maps are not composable")


def _setup(x: StableMap, y: StableMap, z: StableMap) -> _BracketSetup:
    C = cone(y)
    x1 = omega_inv_map(x.canonical_map)
    OX, OY = x1.src, x1.tgt
    g = _stable_solve(HomSpace(OX, C.V), HomSpace(OX, OY), lambda u: C.proj @ u, x1)
    f = _stable_solve(HomSpace(C.V, z.tgt), HomSpace(y.tgt, z.tgt), lambda u: u @ C.ins, z.canonical_map)
    if g is None or f is None:  # only reachable when the bracket is undefined
        raise AssertionError("lifting problem unsolvable although compositions vanish")
    return _BracketSetup(C, x1, g, f, HomSpace(OX, z.tgt))


def indeterminacy(x1: ModuleMap, z: ModuleMap, out: HomSpace) -> Subspace:
    """``z Hom(Omega^- X, Z) + Hom(Omega^- Y, W) Omega^- x + PHom(Omega^- X, W)``."""
    OX, OY = x1.src, x1.tgt
    Z, W = z.src, z.tgt
    left = [out.coords(z @ h) for h in HomSpace(OX, Z).basis()]
    right = [out.coords(h @ x1) for h in HomSpace(OY, W).basis()]
    span = Subspace(out.field, out.dim, left + right) if left or right else Subspace.zero(out.field, out.dim)
    return subspace_sum(span, out.phom)


def toda_bracket(x: StableMap, y: StableMap, z: StableMap) -> BracketVerdict:
    _check_composable(x, y, z)
    defined = (y @ x).is_zero() and (z @ y).is_zero()
    if not defined:
        return BracketVerdict(False, None, None, False)
    s = _setup(x, y, z)
    rep = stable_reduce(s.f.particular @ s.g.particular, s.out)
    ind = indeterminacy(s.x1, z.canonical_map, s.out)
    return BracketVerdict(True, rep, ind, member(s.out.coords(rep.underlying), ind), s.out)


def bracket_element(x: StableMap, y: StableMap, z: StableMap, rng: np.random.Generator) -> ModuleMap:
    """A randomly chosen element ``f o g`` of ``<z, y, x>`` (which must be defined)."""
    _check_composable(x, y, z)
    s = _setup(x, y, z)
    p = x.src.field.p

    def sample(prob: _LiftProblem) -> ModuleMap:
        u = prob.particular
        for h in prob.homogeneous:
            u = u + h.scale(int(rng.integers(0, p)))
        return u

    return sample(s.f) @ sample(s.g)
