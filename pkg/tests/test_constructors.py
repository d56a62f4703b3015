from itertools import product

import pytest
from hypothesis import given, settings, strategies as st

from cyclicez import catalog
from cyclicez.constructors import (
    AlgebraSpec,
    AutomorphismSpec,
    GroupActionSpec,
    ResourceCapError,
    SpecError,
    a_natural,
    group_action_cylindrical,
    tensor_cylindrical,
)
from cyclicez.cylindrical import check_cylindrical, diagonal_cyclic
from cyclicez.exactfield import GF, QQ, Matrix
from cyclicez.simplicial import check_paracyclic


def sign_g(field):
    return AutomorphismSpec(Matrix.from_rows(field, [[1, 0], [0, -1]]))


def test_ground_field_module_is_all_identities():
    m = a_natural(catalog.ground_field(QQ), None, 3)
    one = Matrix.identity(QQ, 1)
    assert m.dims == (1, 1, 1, 1)
    assert all(x == one for n in range(1, 4) for x in m.face[n])
    assert all(x == one for n in range(3) for x in m.degeneracy[n])
    assert all(t == one for t in m.tau)
    assert m.is_cyclic()


def test_group_algebra_face_is_multiplication():
    a = catalog.group_algebra(QQ, catalog.cyclic_group(2))
    m = a_natural(a, None, 2)
    assert m.tau[0] == Matrix.identity(QQ, 2)
    d0 = m.face[1][0]
    assert d0.shape == (2, 4)
    # column (i, j) is e_i e_j = e_{i+j mod 2}, rows of the tensor basis are row-major
    expected = Matrix.from_rows(QQ, [[1, 0, 0, 1], [0, 1, 1, 0]])
    assert d0 == expected


def test_character_twist_is_paracyclic_not_cyclic():
    a = catalog.group_algebra(QQ, catalog.cyclic_group(2))
    g = sign_g(QQ)
    m = a_natural(a, g, 3)
    assert m.tau[0] == g.matrix
    # tau_n^{n+1} applies g to every factor
    for n in range(4):
        assert m.tau[n].power(n + 1) == _kron_power(g.matrix, n + 1)
    assert check_paracyclic(m).passed and not m.is_cyclic()


def _kron_power(g, k):
    out = g
    for _ in range(k - 1):
        out = out.kron(g)
    return out


def test_group_action_dimensions_and_trivial_columns():
    a = catalog.ground_field(QQ)
    x = group_action_cylindrical(a, catalog.trivial_action(a, catalog.cyclic_group(2)), 3)
    for p, q in x.bidegrees():
        assert x.dims[(p, q)] == 2 ** (p + 1)
    for (p, q), t in x.vtau.items():
        assert t == Matrix.identity(QQ, x.dims[(p, q)])
    assert check_cylindrical(x).passed


def test_trivial_group_on_ground_field():
    a = catalog.ground_field(QQ)
    x = group_action_cylindrical(a, catalog.trivial_action(a, catalog.cyclic_group(1)), 3)
    one = Matrix.identity(QQ, 1)
    for bd in x.bidegrees():
        assert x.dims[bd] == 1
        assert x.ht[bd] in (one, -one) and x.vtau[bd] in (one, -one)
    assert check_cylindrical(x).passed


def test_sign_action_cylindrical_relation_at_1_1():
    a, act = catalog.sign_action(QQ)
    x = group_action_cylindrical(a, act, 2)
    bd = (1, 1)
    assert x.dims[bd] == 16
    lhs = x.vtau[bd].power(2) @ x.ht[bd].power(2)
    assert lhs == Matrix.identity(QQ, 16)
    assert check_cylindrical(x).passed


def test_diagonal_degree_zero_dimension():
    a, act = catalog.sign_action(QQ)
    d = diagonal_cyclic(group_action_cylindrical(a, act, 2))
    assert d.dims[0] == act.order * a.dim
    assert check_paracyclic(d, cyclic=True).passed


@pytest.mark.parametrize("alg", ["ground", "group", "dual"])
def test_trivial_group_diagonal_matches_a_natural(alg):
    a = {"ground": catalog.ground_field(QQ), "group": catalog.group_algebra(QQ, catalog.cyclic_group(2)),
         "dual": catalog.dual_numbers(QQ)}[alg]
    d = diagonal_cyclic(group_action_cylindrical(a, catalog.trivial_action(a, catalog.cyclic_group(1)), 3))
    m = a_natural(a, None, 3)
    assert d.dims == m.dims
    # kG^{(n+1)} is one-dimensional, so the relabeling intertwiner is the identity
    # on the row-major basis; it must commute with every operator
    phi = [Matrix.identity(QQ, k) for k in m.dims]
    for n in range(1, 4):
        for i in range(n + 1):
            assert phi[n - 1] @ d.face[n][i] == m.face[n][i] @ phi[n]
    for n in range(3):
        for i in range(n + 1):
            assert phi[n + 1] @ d.degeneracy[n][i] == m.degeneracy[n][i] @ phi[n]
    for n in range(4):
        assert phi[n] @ d.tau[n] == m.tau[n] @ phi[n]


def test_tensor_dimensions():
    q = a_natural(catalog.ground_field(QQ), None, 3)
    k2 = a_natural(catalog.group_algebra(QQ, catalog.cyclic_group(2)), None, 3)
    x = tensor_cylindrical(q, q)
    assert set(x.dims.values()) == {1}
    y = tensor_cylindrical(k2, q)
    for p, q_ in y.bidegrees():
        assert y.dims[(p, q_)] == 2 ** (p + 1)
    assert check_cylindrical(y).passed


def test_tensor_rejects_mismatch():
    q3 = a_natural(catalog.ground_field(QQ), None, 3)
    q2 = a_natural(catalog.ground_field(QQ), None, 2)
    f5 = a_natural(catalog.ground_field(GF(5)), None, 3)
    with pytest.raises(SpecError) as e:
        tensor_cylindrical(q3, q2)
    assert e.value.code == "TRUNCATION_MISMATCH"
    with pytest.raises(SpecError) as e:
        tensor_cylindrical(q3, f5)
    assert e.value.code == "FIELD_MISMATCH"


# --- validation -------------------------------------------------------------


def nonassociative_table():
    # e0 is the unit; e1 e1 = e0 + e1 would be fine, so break associativity
    # through a non-unital second generator: e1 e1 = e1 but with e0 e1 = 0
    return [[[1, 0], [0, 0]], [[0, 0], [1, 1]]]


def test_non_associative_algebra_reports_triple():
    with pytest.raises(SpecError) as e:
        AlgebraSpec.from_table(QQ, nonassociative_table(), [1, 0])
    assert e.value.code == "ALGEBRA_NOT_ASSOCIATIVE"
    i, j, k = e.value.witness
    a = nonassociative_table()
    # recompute the failing triple by hand from the table
    def mul(u, v):
        out = [0, 0]
        for r, x in enumerate(u):
            for s, y in enumerate(v):
                for t in range(2):
                    out[t] += x * y * a[r][s][t]
        return out
    e_ = [[1, 0], [0, 1]]
    assert mul(mul(e_[i], e_[j]), e_[k]) != mul(e_[i], mul(e_[j], e_[k]))


def test_non_unital_algebra():
    with pytest.raises(SpecError) as e:
        AlgebraSpec.from_table(QQ, [[[1, 0], [0, 1]], [[0, 1], [1, 0]]], [0, 1])
    assert e.value.code == "ALGEBRA_NOT_UNITAL"


def test_bad_automorphisms():
    a = catalog.dual_numbers(QQ)
    cases = {
        "AUTOMORPHISM_NOT_INVERTIBLE": [[1, 0], [0, 0]],
        "AUTOMORPHISM_NOT_MULTIPLICATIVE": [[1, 1], [0, 1]],
    }
    # an invertible multiplicative map always fixes 1, so AUTOMORPHISM_NOT_UNITAL
    # is a defensive check that valid input cannot reach
    for code, rows in cases.items():
        with pytest.raises(SpecError) as e:
            AutomorphismSpec(Matrix.from_rows(QQ, rows)).validate(a)
        assert e.value.code == code, rows


def test_group_table_errors():
    a = catalog.ground_field(QQ)
    one = AutomorphismSpec(Matrix.identity(QQ, 1))
    with pytest.raises(SpecError) as e:
        GroupActionSpec(2, ((0, 1), (1, 1)), 0, (one, one)).validate(a)
    assert e.value.code == "GROUP_NOT_INVERTIBLE"
    with pytest.raises(SpecError) as e:
        GroupActionSpec(2, ((1, 0), (0, 1)), 0, (one, one)).validate(a)
    assert e.value.code == "GROUP_NO_IDENTITY"


def test_action_must_be_homomorphism():
    a = catalog.group_algebra(QQ, catalog.cyclic_group(2))
    one = AutomorphismSpec(Matrix.identity(QQ, 2))
    with pytest.raises(SpecError) as e:
        GroupActionSpec(2, catalog.cyclic_group(2), 0, (sign_g(QQ), one)).validate(a)
    assert e.value.code == "ACTION_NOT_HOMOMORPHISM"


def test_dimension_cap():
    a = catalog.group_algebra(QQ, catalog.cyclic_group(2))
    with pytest.raises(ResourceCapError):
        a_natural(a, None, 5, cap=32)
    assert a_natural(a, None, 4, cap=32).dims[-1] == 32


# --- property: random small groups ------------------------------------------


def _actions(field):
    out = []
    for name, table in (("Z/2", catalog.cyclic_group(2)), ("Z/3", catalog.cyclic_group(3)),
                        ("Z/2xZ/2", catalog.klein_group())):
        m = len(table)
        # regular permutation action on k^G
        perms = [tuple(table[g][x] for x in range(m)) for g in range(m)]
        out.append((name + " regular", *catalog.permutation_action(field, table, perms)))
        a = catalog.dual_numbers(field)
        out.append((name + " trivial", a, catalog.trivial_action(a, table)))
    a, act = catalog.sign_action(field)
    out.append(("Z/2 sign", a, act))
    return out


@settings(max_examples=14)
@given(idx=st.integers(0, 6), fp=st.booleans())
def test_group_actions_are_cylindrical(idx, fp):
    field = GF(7) if fp else QQ
    name, a, act = _actions(field)[idx]
    x = group_action_cylindrical(a, act, 2)
    rep = check_cylindrical(x)
    assert rep.passed, (name, rep.failures()[:1])
    assert diagonal_cyclic(x).dims[0] == act.order * a.dim
