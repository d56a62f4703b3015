from fractions import Fraction

import gmpy2
import pytest
from hypothesis import given, strategies as st

from cyclicez.exactfield import (
    GF,
    QQ,
    FieldSpec,
    Infeasible,
    Matrix,
    Subspace,
    column_space,
    extend_basis,
    is_prime,
    kernel_and_pivots,
    kernel_basis,
    quotient_structure,
    rank,
    solve,
    solve_matrix,
)
from oracles import dense_nullity, dense_rank, det, matmul

FIELDS = [QQ, GF(2), GF(5), GF(1009)]


def dense(m: Matrix):
    return [[Fraction(int(x.numerator), int(x.denominator)) if m.field.kind == "Q" else int(x) for x in r]
            for r in m.to_rows()]


def small_matrices(max_side=5, lo=-3, hi=3):
    return st.integers(1, max_side).flatmap(
        lambda r: st.integers(1, max_side).flatmap(
            lambda c: st.lists(st.lists(st.integers(lo, hi), min_size=c, max_size=c), min_size=r, max_size=r)))


# --- scalars ----------------------------------------------------------------


def test_primality():
    assert [n for n in range(30) if is_prime(n)] == [2, 3, 5, 7, 11, 13, 17, 19, 23, 29]
    assert is_prime(1009) and not is_prime(1011)


def test_field_rejects_composite():
    with pytest.raises(ValueError):
        FieldSpec("Fp", 6)


def test_rational_coercion_is_exact():
    assert QQ("3/4") == gmpy2.mpq(3, 4)
    assert QQ(Fraction(-2, 6)) == gmpy2.mpq(-1, 3)
    assert QQ.fmt(QQ("10/4")) == "5/2"
    assert QQ.fmt(QQ("-8/4")) == "-2"


def test_residue_coercion():
    F5 = GF(5)
    assert F5("1/2") == 3
    assert F5(-1) == 4
    with pytest.raises(ZeroDivisionError):
        F5("1/5")


# --- matrix algebra ---------------------------------------------------------


def test_hand_computed_rank_and_kernel():
    m = Matrix.from_rows(QQ, [[1, 2, 3], [2, 4, 6], [1, 0, 1]])
    assert rank(m) == 2
    k = kernel_basis(m)
    assert k.dim == 1
    v = k.basis[0]
    assert m.apply(v) == {}
    # kernel is spanned by (1, 1, -1)
    assert {i: x / v[2] * -1 for i, x in v.items()} == {0: 1, 1: 1, 2: -1}


def test_rank_differs_by_characteristic():
    m = Matrix.from_rows(QQ, [[1, 1], [1, -1]])
    assert rank(m) == 2
    assert rank(Matrix.from_rows(GF(2), [[1, 1], [1, -1]])) == 1


def test_solve_and_infeasible():
    m = Matrix.from_rows(QQ, [[1, 0], [0, 0]])
    sol = solve(m, [{0: QQ(5)}])
    assert m.apply(sol[0]) == {0: QQ(5)}
    bad = solve(m, [{0: QQ(1)}, {1: QQ(1)}])
    assert isinstance(bad, Infeasible) and bad.index == 1
    # an empty target list is a (vacuous) success, not a failure
    assert solve(m, []) == []
    assert not isinstance(solve_matrix(m, Matrix.zeros(QQ, 2, 0)), Infeasible)


def test_deterministic_pivots():
    m = Matrix.from_rows(QQ, [[0, 1, 1, 0], [0, 0, 1, 1]])
    k, piv = kernel_and_pivots(m)
    assert piv == [1, 2]
    assert k.dim == 2
    assert kernel_and_pivots(m) == (k, piv)


def test_extend_basis_is_greedy():
    base = Matrix.from_rows(QQ, [[1], [0], [0]])
    cand = Matrix.from_rows(QQ, [[2, 0, 1, 0], [0, 1, 1, 0], [0, 0, 0, 1]])
    assert extend_basis(base, cand) == [1, 3]


def test_quotient_projection_and_section():
    sub = column_space(Matrix.from_rows(QQ, [[1], [1], [0]]))
    proj, sec = quotient_structure(3, sub)
    assert proj.shape == (2, 3)
    assert proj @ sec == Matrix.identity(QQ, 2)
    assert (proj @ sub.matrix()).is_zero()


def test_kron_shapes_and_mixed_product():
    a = Matrix.from_rows(QQ, [[1, 2], [0, 1]])
    b = Matrix.from_rows(QQ, [[0, 1], [1, 0]])
    assert a.kron(b).shape == (4, 4)
    assert a.kron(b) @ b.kron(a) == (a @ b).kron(b @ a)


def test_first_difference_names_an_entry():
    a = Matrix.from_rows(QQ, [[1, 0], [0, 1]])
    b = Matrix.from_rows(QQ, [[1, 0], [3, 1]])
    assert a.first_difference(b)[:2] == (1, 0)
    assert a.first_difference(a) is None


# --- properties against the dense oracle -------------------------------------


@given(rows=small_matrices(), fidx=st.integers(0, len(FIELDS) - 1))
def test_rank_matches_dense_oracle(rows, fidx):
    f = FIELDS[fidx]
    m = Matrix.from_rows(f, rows)
    p = None if f.kind == "Q" else f.characteristic
    assert rank(m) == dense_rank(rows, p)
    assert kernel_basis(m).dim == dense_nullity(rows, len(rows[0]), p)


@given(rows=small_matrices(), fidx=st.integers(0, len(FIELDS) - 1))
def test_kernel_vectors_are_killed_and_independent(rows, fidx):
    f = FIELDS[fidx]
    m = Matrix.from_rows(f, rows)
    k = kernel_basis(m)
    assert (m @ k.matrix()).is_zero()
    assert rank(k.matrix()) == k.dim
    assert rank(m) + k.dim == m.ncols


@given(rows=small_matrices(4), x=st.lists(st.integers(-4, 4), min_size=4, max_size=4))
def test_solve_round_trip(rows, x):
    m = Matrix.from_rows(QQ, rows)
    v = {i: QQ(c) for i, c in enumerate(x[: m.ncols]) if c}
    t = m.apply(v)
    sol = solve(m, [t])
    assert not isinstance(sol, Infeasible)
    assert m.apply(sol[0]) == t


@given(rows=small_matrices(3))
def test_square_invertibility_matches_determinant(rows):
    n = min(len(rows), len(rows[0]))
    sq = [r[:n] for r in rows[:n]]
    m = Matrix.from_rows(QQ, sq)
    assert (rank(m) == n) == (det(sq) != 0)


@given(a=small_matrices(3), b=small_matrices(3))
def test_product_matches_dense(a, b):
    k = len(a[0])
    b = (b * k)[:k] if len(b) < k else b[:k]
    ma, mb = Matrix.from_rows(QQ, a), Matrix.from_rows(QQ, b)
    assert dense(ma @ mb) == matmul(a, b)


@given(rows=small_matrices(4), fidx=st.integers(0, len(FIELDS) - 1))
def test_quotient_is_a_retraction(rows, fidx):
    f = FIELDS[fidx]
    m = Matrix.from_rows(f, rows)
    sub = column_space(m)
    proj, sec = quotient_structure(m.nrows, sub)
    assert proj.nrows == m.nrows - sub.dim
    assert proj @ sec == Matrix.identity(f, proj.nrows)
    assert (proj @ m).is_zero()


def test_subspace_helpers():
    assert Subspace.zero(QQ, 3).dim == 0
    assert Subspace.whole(QQ, 3).matrix() == Matrix.identity(QQ, 3)
