"""Deciding whether a six-term exact sequence comes from the snake lemma.

For ``0 -> A -> B -> C -> D -> E -> F -> 0`` with images ``K, L, M`` of
``B -> C``, ``C -> D``, ``D -> E``, the four short exact pieces give classes

    alpha: F -> M[1],  beta: M[1] -> L[2],  gamma: L[2] -> K[3],  delta: K[3] -> A[4]

and the sequence is realizable iff ``0`` lies in the Toda bracket
``<delta, gamma beta, alpha>``.  A nonempty bracket requires the two Ext^3
classes ``delta gamma beta`` and ``gamma beta alpha`` to vanish.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from typing import NamedTuple

import numpy as np

from .exactla import PrimeMatrix
from .modcat import Algebra, ModuleMap, RModule, from_jordan, omega_inv_map, omega_inv_power, stable_reduce, syzygy
from .seqlab import (
    ExactSeq,
    ExtClass,
    ImagesKLM,
    RandomSuite,
    ext1_class,
    images_KLM,
    long_class,
    snake,
    splice,
    verify_exact,
    yoneda_compose,
)
from .toda import BracketVerdict, toda_bracket


class Obstruction(str, Enum):
    NONE = "none"
    NOT_EXACT = "not-exact"
    NEEMAN_MA = "neeman-MA"
    NEEMAN_FK = "neeman-FK"
    TODA = "toda"


@dataclass(frozen=True)
class BitClasses:
    alpha: ExtClass
    beta: ExtClass
    gamma: ExtClass
    delta: ExtClass
    gamma_beta: ExtClass
    images: ImagesKLM


@dataclass(frozen=True)
class RealizabilityVerdict:
    exact: bool
    ext3_MA_zero: bool
    ext3_FK_zero: bool
    toda_defined: bool
    toda_contains_zero: bool
    realizable: bool
    obstruction: Obstruction
    classes: BitClasses | None = field(default=None, compare=False)
    bracket: BracketVerdict | None = field(default=None, compare=False)

    def flags(self) -> dict:
        return {
            "exact": self.exact,
            "ext3_MA_zero": self.ext3_MA_zero,
            "ext3_FK_zero": self.ext3_FK_zero,
            "toda_defined": self.toda_defined,
            "toda_contains_zero": self.toda_contains_zero,
            "realizable": self.realizable,
            "obstruction": self.obstruction.value,
        }


def bit_classes(six: ExactSeq) -> BitClasses:
    imgs = images_KLM(six)
    alpha = ext1_class(imgs.alpha_seq)
    beta = ext1_class(imgs.beta_seq)
    gamma = ext1_class(imgs.gamma_seq)
    delta = ext1_class(imgs.delta_seq)
    return BitClasses(alpha, beta, gamma, delta, yoneda_compose(beta, gamma), imgs)


def _neeman_flags(bits: BitClasses) -> tuple[bool, bool]:
    dgb = yoneda_compose(bits.gamma_beta, bits.delta)   # stHom(M, Omega^-3 A)
    gba = yoneda_compose(bits.alpha, bits.gamma_beta)   # stHom(F, Omega^-3 K)
    return dgb.is_zero(), gba.is_zero()


def neeman_check(six: ExactSeq) -> tuple[bool, bool]:
    """``(delta gamma beta == 0, gamma beta alpha == 0)`` for an exact six-term sequence."""
    return _neeman_flags(bit_classes(six))


def snake_realizable(six: ExactSeq) -> RealizabilityVerdict:
    if len(six) != 6 or not verify_exact(six).exact:
        return RealizabilityVerdict(False, False, False, False, False, False, Obstruction.NOT_EXACT)
    six = ExactSeq(six.modules, six.maps, verified=True)
    bits = bit_classes(six)
    ma_zero, fk_zero = _neeman_flags(bits)

    x = bits.alpha.rep                                          # F -> Omega^- M
    y = stable_reduce(omega_inv_map(bits.gamma_beta.rep.canonical_map))   # Omega^- M -> Omega^-3 K
    z = stable_reduce(omega_inv_power(bits.delta.rep.canonical_map, 3))   # Omega^-3 K -> Omega^-4 A
    bracket = toda_bracket(x, y, z)

    if not ma_zero:
        obstruction = Obstruction.NEEMAN_MA
    elif not fk_zero:
        obstruction = Obstruction.NEEMAN_FK
    elif not bracket.contains_zero:
        obstruction = Obstruction.TODA
    else:
        obstruction = Obstruction.NONE
    realizable = ma_zero and fk_zero and bracket.contains_zero
    return RealizabilityVerdict(True, ma_zero, fk_zero, bracket.defined, bracket.contains_zero,
                                realizable, obstruction, bits, bracket)


def neeman5(five: ExactSeq) -> bool:
    """Realizability of a five-term exact sequence: its Ext^3 class vanishes."""
    if len(five) != 5:
        raise ValueError(f"expected a five-term sequence, got {len(five)}")
    return long_class(five).is_zero()


# -- built-in examples ---------------------------------------------------------

def _m(src: RModule, tgt: RModule, rows) -> ModuleMap:
    return ModuleMap(src, tgt, PrimeMatrix.from_rows(src.field, rows, src.dim))


def paper_pieces(p: int = 2) -> tuple[ExactSeq, ExactSeq, ExactSeq]:
    """The sequences ``0->N->S+R->N->0``, ``0->N->R->N->S->0`` and ``0->S->N->S->0`` over F_p[x]/(x^3).

    ``S + R`` is the pullback of ``0 -> N -> R -> S -> 0`` along ``N -> S``;
    in its canonical basis (R block first) the generator is ``(1, n)`` and the
    socle of S is ``(0, xn)``.
    """
    alg = Algebra.of(p, 3)
    S, N, R = (from_jordan(alg, (a,)) for a in (1, 2, 3))
    SR = from_jordan(alg, (1, 3))
    m1 = p - 1
    delta = ExactSeq.from_maps([
        _m(N, SR, [[0, 0], [1, 0], [0, 1], [m1, 0]]),
        _m(SR, N, [[1, 0, 0, 0], [0, 1, 0, 1]]),
    ]).verify()
    eta = ExactSeq.from_maps([
        _m(N, R, [[0, 0], [1, 0], [0, 1]]),
        _m(R, N, [[0, 0, 0], [1, 0, 0]]),
        _m(N, S, [[1, 0]]),
    ]).verify()
    alpha = ExactSeq.from_maps([
        _m(S, N, [[0], [1]]),
        _m(N, S, [[1, 0]]),
    ]).verify()
    return delta, eta, alpha


EXAMPLE_EXPECTED = {
    "exact": True,
    "ext3_MA_zero": True,
    "ext3_FK_zero": True,
    "toda_defined": True,
    "toda_contains_zero": False,
    "realizable": False,
    "obstruction": "toda",
}


def paper_example(p: int = 2) -> tuple[ExactSeq, dict]:
    """``0 -> N -> S+R -> R -> N -> N -> S -> 0``, spliced from three pieces."""
    delta, eta, alpha = paper_pieces(p)
    return splice(splice(delta, eta), alpha), dict(EXAMPLE_EXPECTED)


def resolution_sequence(M: RModule, steps: int) -> ExactSeq:
    """``0 -> Omega^steps M -> P_{steps-1} -> ... -> P_0 -> M -> 0`` from the minimal resolution."""
    pieces = []
    cur = M
    for _ in range(steps):
        _, ses = syzygy(cur)
        pieces.append(ses)
        cur = ses.modules[0]
    seq = pieces[-1]
    for ses in reversed(pieces[:-1]):
        seq = splice(seq, ses)
    return seq


def resolution_example(p: int = 2, n: int = 3) -> ExactSeq:
    """``0 -> Omega^4 S -> P_3 -> P_2 -> P_1 -> P_0 -> S -> 0``; for n = 3 this is ``0->S->R->R->R->R->S->0``."""
    return resolution_sequence(from_jordan(Algebra.of(p, n), (1,)), 4)


# -- soundness fuzzing -----------------------------------------------------------

class TrialResult(NamedTuple):
    index: int
    p: int
    n: int
    dims: tuple
    exact: bool
    realizable: bool
    obstruction: str


def soundness_trial(index: int, seed: np.random.SeedSequence, max_dim: int = 10,
                    n: int | None = None, p: int | None = None) -> TrialResult:
    """Run the decider on the snake sequence of one random morphism of short exact sequences."""
    pick = np.random.default_rng([*seed.generate_state(4), 1])
    p = p if p is not None else int(pick.choice([2, 3]))
    n = n if n is not None else int(pick.choice([2, 3, 4]))
    suite = RandomSuite(seed, n=n, p=p, max_blocks=5, max_dim=max_dim)
    six = snake(suite.ses_morphism())
    v = snake_realizable(six)
    return TrialResult(index, p, n, tuple(M.dim for M in six.modules), v.exact, v.realizable,
                       v.obstruction.value)


def _trial_star(args):
    return soundness_trial(*args)


def soundness_fuzz(trials: int, seed: int, max_dim: int = 10, n: int | None = None,
                   p: int | None = None, jobs: int = 1) -> list[TrialResult]:
    """Independent trials with child seeds of ``seed``; results come back in trial order."""
    children = np.random.SeedSequence(seed).spawn(trials)
    work = [(i, s, max_dim, n, p) for i, s in enumerate(children)]
    if jobs <= 1:
        return [_trial_star(w) for w in work]
    from concurrent.futures import ProcessPoolExecutor

    with ProcessPoolExecutor(max_workers=jobs) as pool:
        return list(pool.map(_trial_star, work, chunksize=max(1, trials // (4 * jobs))))
