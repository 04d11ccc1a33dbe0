import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from snakelemma.errors import ContractViolation
from snakelemma.exactla import (
    PrimeField,
    PrimeMatrix,
    Subspace,
    inverse,
    kernel_image,
    left_inverse,
    member,
    rank,
    right_inverse,
    solve_affine,
    subspace_sum,
)

from oracles import naive_rank, naive_solvable

F2, F3, F5 = PrimeField(2), PrimeField(3), PrimeField(5)


# -- fixed examples --------------------------------------------------------------

def test_solve_identity():
    x, null = solve_affine(PrimeMatrix.identity(F2, 2), [1, 0])
    assert x.tolist() == [1, 0]
    assert null.dim == 0


def test_solve_rank_one():
    x, null = solve_affine(PrimeMatrix.from_rows(F2, [[1, 1], [1, 1]]), [1, 1])
    assert x.tolist() == [1, 0]
    assert null == Subspace(F2, 2, [[1, 1]])


def test_solve_inconsistent():
    assert solve_affine(PrimeMatrix.from_rows(F3, [[1], [0]]), [0, 1]) is None


def test_solve_dimension_mismatch():
    with pytest.raises(ContractViolation):
        solve_affine(PrimeMatrix.identity(F2, 2), [1, 0, 0])


def test_kernel_image_zero():
    k, im, r = kernel_image(PrimeMatrix.zeros(F2, 2, 2))
    assert (k.dim, im.dim, r) == (2, 0, 0)


def test_kernel_image_nilpotent():
    k, im, r = kernel_image(PrimeMatrix.from_rows(F2, [[0, 0], [1, 0]]))
    e2 = Subspace(F2, 2, [[0, 1]])
    assert k == e2 and im == e2 and r == 1


def test_kernel_image_identity():
    k, im, r = kernel_image(PrimeMatrix.identity(F5, 3))
    assert (k.dim, im.dim, r) == (0, 3, 3)


def test_sum_of_axes():
    U, V = Subspace(F2, 2, [[1, 0]]), Subspace(F2, 2, [[0, 1]])
    W = subspace_sum(U, V)
    assert W == Subspace.full(F2, 2)
    assert member([1, 1], W)


def test_sum_idempotent():
    U = Subspace(F3, 3, [[1, 2, 0], [0, 1, 1]])
    assert subspace_sum(U, U) == U


def test_sum_generic_f3():
    assert subspace_sum(Subspace(F3, 2, [[1, 1]]), Subspace(F3, 2, [[1, 2]])).dim == 2


def test_sum_ambient_mismatch():
    with pytest.raises(ContractViolation):
        subspace_sum(Subspace.zero(F2, 2), Subspace.zero(F2, 3))


def test_member_length_mismatch():
    with pytest.raises(ContractViolation):
        member([1, 0, 0], Subspace.full(F2, 2))


def test_field_rejects_composites():
    for bad in (0, 1, 4, 9, 1 << 16):
        with pytest.raises(ValueError):
            PrimeField(bad)
    assert PrimeField(65521).p == 65521


def test_zero_dimensional_matrices():
    A = PrimeMatrix.zeros(F3, 0, 2)
    B = PrimeMatrix.zeros(F3, 2, 0)
    assert (B @ A).shape == (2, 2) and (B @ A).is_zero()
    assert (A @ B) == PrimeMatrix.identity(F3, 0)
    k, im, r = kernel_image(A)
    assert (k.dim, im.dim, r) == (2, 0, 0)
    x, null = solve_affine(B, [0, 0])
    assert x.shape == (0,) and null.dim == 0


def test_entries_reduced():
    A = PrimeMatrix.from_rows(F5, [[7, -1], [10, 3]])
    assert A.tolist() == [[2, 4], [0, 3]]


def test_inverses():
    A = PrimeMatrix.from_rows(F3, [[1, 2], [0, 1]])
    assert A @ inverse(A) == PrimeMatrix.identity(F3, 2)
    inj = PrimeMatrix.from_rows(F3, [[1, 0], [2, 1], [1, 1]])
    assert left_inverse(inj) @ inj == PrimeMatrix.identity(F3, 2)
    surj = inj.T
    assert surj @ right_inverse(surj) == PrimeMatrix.identity(F3, 2)
    with pytest.raises(ContractViolation):
        inverse(PrimeMatrix.from_rows(F3, [[1, 1], [1, 1]]))


# -- properties -----------------------------------------------------------------

primes = st.sampled_from([2, 3, 5, 7])


@st.composite
def matrices(draw, max_side=6):
    p = draw(primes)
    r = draw(st.integers(0, max_side))
    c = draw(st.integers(0, max_side))
    entries = draw(st.lists(st.integers(0, p - 1), min_size=r * c, max_size=r * c))
    return PrimeMatrix(PrimeField(p), np.array(entries, dtype=np.int64).reshape(r, c))


@settings(max_examples=150, deadline=None)
@given(matrices(), st.data())
def test_solution_and_nullspace(A, data):
    p = A.p
    x0 = np.array(data.draw(st.lists(st.integers(0, p - 1), min_size=A.cols, max_size=A.cols)),
                  dtype=np.int64)
    b = (A.a @ x0) % p
    x, null = solve_affine(A, b)
    assert np.array_equal((A.a @ x) % p, b)
    for v in null.basis:
        assert not ((A.a @ v) % p).any()
    # x0 - x is a homogeneous solution
    assert member((x0 - x) % p, null)


@settings(max_examples=150, deadline=None)
@given(matrices())
def test_rank_nullity(A):
    k, im, r = kernel_image(A)
    assert r + k.dim == A.cols
    assert im.dim == r == rank(A)
    assert r == naive_rank(A.tolist(), A.p)


@settings(max_examples=100, deadline=None)
@given(matrices(), st.randoms(use_true_random=False))
def test_canonical_form(A, rnd):
    # span of the rows, from two shuffled and rescaled spanning sets
    rows = [list(r) for r in A.tolist()]
    other = rows[:]
    rnd.shuffle(other)
    other = [[(x * c) % A.p for x in r] for r, c in ((r, rnd.randrange(1, A.p)) for r in other)]
    if len(other) >= 2:
        other.append([(x + y) % A.p for x, y in zip(other[0], other[1])])
    U, V = Subspace(A.field, A.cols, rows), Subspace(A.field, A.cols, other)
    assert U == V and hash(U) == hash(V)
    assert all(np.array_equal(a, b) for a, b in zip(U.basis, V.basis))


@settings(max_examples=150, deadline=None)
@given(matrices(), st.data())
def test_member_matches_solvability(A, data):
    U = Subspace(A.field, A.cols, A.a)
    v = data.draw(st.lists(st.integers(0, A.p - 1), min_size=A.cols, max_size=A.cols))
    # U.basis c = v  <=>  columns are the rows of A
    system = [[int(A.a[i, j]) for i in range(A.rows)] for j in range(A.cols)]
    expected = naive_solvable(system, v, A.p) if A.rows else not any(v)
    assert member(v, U) == expected
