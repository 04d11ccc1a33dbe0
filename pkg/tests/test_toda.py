import numpy as np
import pytest

from snakelemma import (
    HomSpace,
    ModuleMap,
    RandomSuite,
    cone,
    direct_sum,
    ext1_class,
    from_jordan,
    jordan_type,
    long_class,
    omega_inv_map,
    stable_equal,
    stable_reduce,
    toda_bracket,
)
from snakelemma.decider import paper_pieces
from snakelemma.errors import ContractViolation
from snakelemma.exactla import PrimeMatrix, Subspace
from snakelemma.modcat import cosyzygy, is_stably_zero, omega_inv_power
from snakelemma.toda import bracket_element

from generators import add_phom, defined_triple, stable_kernel_element, triangle_triple


def strip(sizes, n):
    return tuple(a for a in sizes if a < n)


# -- cones -------------------------------------------------------------------------

def test_cone_of_zero():
    suite = RandomSuite(1, n=3, p=2)
    for _ in range(20):
        Y, Z = suite.module(), suite.module()
        C = cone(stable_reduce(ModuleMap.zero(Y, Z)))
        expected = jordan_type(direct_sum(cosyzygy(Y)[0], Z).module)
        assert strip(jordan_type(C.V), 3) == strip(expected, 3)


def test_cone_of_identity():
    suite = RandomSuite(2, n=4, p=3)
    for _ in range(20):
        Y = suite.module()
        C = cone(stable_reduce(ModuleMap.identity(Y)))
        assert strip(jordan_type(C.V), 4) == ()


def test_cone_of_epi_N_S(SNR):
    S, N, _ = SNR
    C = cone(stable_reduce(ModuleMap(N, S, PrimeMatrix.from_rows(S.field, [[1, 0]]))))
    assert strip(jordan_type(C.V), 3) == (2,)


def test_cone_invariants():
    for p, n in [(2, 3), (3, 4), (2, 2)]:
        suite = RandomSuite(3 + p + n, n=n, p=p)
        for _ in range(25):
            Y, Z = suite.module(), suite.module()
            y = stable_reduce(suite.hom(Y, Z))
            C = cone(y)
            I = cosyzygy(Y)[1].modules[1]
            assert C.V.dim == I.dim + Z.dim - Y.dim
            assert is_stably_zero(C.proj @ C.ins)
            assert is_stably_zero(C.ins @ y.underlying)
            assert C.proj.tgt == cosyzygy(Y)[0]


# -- brackets ------------------------------------------------------------------------

def test_identity_triple_undefined(SNR):
    s = stable_reduce(ModuleMap.identity(SNR[0]))
    v = toda_bracket(s, s, s)
    assert not v.defined and v.representative is None and not v.contains_zero


def test_zero_x_contains_zero():
    suite = RandomSuite(5, n=3, p=2)
    for _ in range(30):
        X, Y, Z, W = (suite.module() for _ in range(4))
        y = suite.hom(Y, Z)
        z = stable_kernel_element(suite, HomSpace(Z, W), lambda u: u @ y, HomSpace(Y, W))
        v = toda_bracket(stable_reduce(ModuleMap.zero(X, Y)), stable_reduce(y), stable_reduce(z))
        assert v.defined and v.contains_zero


def test_zero_z_contains_zero():
    suite = RandomSuite(6, n=4, p=3)
    for _ in range(30):
        X, Y, Z, W = (suite.module() for _ in range(4))
        y = suite.hom(Y, Z)
        x = stable_kernel_element(suite, HomSpace(X, Y), lambda u: y @ u, HomSpace(X, Z))
        v = toda_bracket(stable_reduce(x), stable_reduce(y), stable_reduce(ModuleMap.zero(Z, W)))
        assert v.defined and v.contains_zero


def headline_triple(p):
    delta_seq, eta, alpha_seq = paper_pieces(p)
    alpha = ext1_class(alpha_seq).rep                                  # S -> Omega^- S
    eta1 = stable_reduce(omega_inv_map(long_class(eta).rep.canonical_map))   # Omega^- S -> Omega^-3 N
    delta1 = stable_reduce(omega_inv_power(ext1_class(delta_seq).rep.canonical_map, 3))
    return alpha, eta1, delta1


@pytest.mark.parametrize("p", [2, 3, 5])
def test_headline_triple(p):
    x, y, z = headline_triple(p)
    S = from_jordan(x.src.algebra, (1,))
    N = from_jordan(x.src.algebra, (2,))
    assert (x.src, x.tgt, y.tgt, z.tgt) == (S, N, S, N)
    v = toda_bracket(x, y, z)
    assert v.defined and not v.contains_zero
    assert v.indeterminacy.dim < v.homspace.dim


def test_not_composable(SNR):
    S, N, _ = SNR
    s = stable_reduce(ModuleMap.identity(S))
    n = stable_reduce(ModuleMap.identity(N))
    with pytest.raises(ContractViolation):
        toda_bracket(s, n, s)


def test_defined_iff_compositions_vanish():
    seen = {True: 0, False: 0}
    for p, n in [(2, 3), (3, 3), (2, 4)]:
        suite = RandomSuite(7 + p * n, n=n, p=p, max_blocks=3)
        for k in range(60):
            if k % 2:
                x, y, z = defined_triple(suite)
            else:
                X, Y, Z, W = (suite.module() for _ in range(4))
                x, y, z = (stable_reduce(suite.hom(A, B)) for A, B in ((X, Y), (Y, Z), (Z, W)))
            expect = (is_stably_zero(y.underlying @ x.underlying)
                      and is_stably_zero(z.underlying @ y.underlying))
            v = toda_bracket(x, y, z)
            assert v.defined == expect
            seen[expect] += 1
            if v.defined:
                coords = v.homspace.coords(v.representative.canonical)
                assert (coords in v.indeterminacy) == v.contains_zero
                assert v.homspace.phom.dim <= v.indeterminacy.dim
                assert all(b in v.indeterminacy for b in v.homspace.phom.basis)
    assert seen[True] and seen[False]


def test_coset_property():
    rng = np.random.default_rng(8)
    suite = RandomSuite(8, n=3, p=3)
    proper = 0
    for k in range(60):
        x, y, z = defined_triple(suite) if k % 2 else triangle_triple(suite)
        v = toda_bracket(x, y, z)
        proper += v.indeterminacy.dim < v.homspace.dim
        e1, e2 = (bracket_element(x, y, z, rng) for _ in range(2))
        assert v.homspace.coords(e1 - e2) in v.indeterminacy
        assert v.homspace.coords(e1 - v.representative.underlying) in v.indeterminacy
    assert proper > 10


def test_representative_invariance():
    suite = RandomSuite(9, n=4, p=2)
    for k in range(40):
        x, y, z = defined_triple(suite) if k % 2 else triangle_triple(suite)
        x2, y2, z2 = (stable_reduce(add_phom(suite, f.underlying)) for f in (x, y, z))
        assert all(stable_equal(a.underlying, b.underlying) for a, b in ((x, x2), (y, y2), (z, z2)))
        assert toda_bracket(x, y, z).contains_zero == toda_bracket(x2, y2, z2).contains_zero


def test_triangle_bracket_contains_minus_identity():
    # for 0 -> A -> B -> C -> 0 with class h, <h, g, f> contains -id of Omega^- A
    nontrivial = 0
    for p, n in [(2, 3), (3, 3), (3, 4), (5, 2)]:
        suite = RandomSuite(10 + p + n, n=n, p=p)
        for _ in range(30):
            ses = suite.ses()
            f, g = ses.maps
            h = ext1_class(ses).rep
            v = toda_bracket(stable_reduce(f), stable_reduce(g), h)
            assert v.defined
            OA = h.tgt
            minus_id = ModuleMap.identity(OA).scale(p - 1)
            diff = v.representative.underlying - minus_id
            assert v.homspace.coords(diff) in v.indeterminacy
            nontrivial += not v.contains_zero
    assert nontrivial > 0


def test_empty_indeterminacy_is_phom(SNR):
    S, N, R = SNR
    zero = from_jordan(S.algebra, ())
    x = stable_reduce(ModuleMap.zero(zero, S))
    y = stable_reduce(ModuleMap.zero(S, zero))
    z = stable_reduce(ModuleMap.zero(zero, R))
    v = toda_bracket(x, y, z)
    assert v.defined and v.contains_zero
    assert isinstance(v.indeterminacy, Subspace) and v.indeterminacy == v.homspace.phom
