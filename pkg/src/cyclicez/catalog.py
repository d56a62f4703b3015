"""Small algebras, groups and actions used by the bundled examples and tests."""
from __future__ import annotations

from itertools import product

from .constructors import AlgebraSpec, AutomorphismSpec, GroupActionSpec
from .exactfield import FieldSpec, Matrix


def _unit_vec(d, i):
    return [1 if k == i else 0 for k in range(d)]


def ground_field(field: FieldSpec) -> AlgebraSpec:
    return AlgebraSpec.from_table(field, [[[1]]], [1], "k")


def group_algebra(field: FieldSpec, table, identity=0, name=None) -> AlgebraSpec:
    m = len(table)
    prods = [[_unit_vec(m, table[a][b]) for b in range(m)] for a in range(m)]
    return AlgebraSpec.from_table(field, prods, _unit_vec(m, identity), name or f"k[G{m}]")


def dual_numbers(field: FieldSpec) -> AlgebraSpec:
    """k[x]/(x^2) on the basis (1, x)."""
    return truncated_polynomials(field, 2)


def truncated_polynomials(field: FieldSpec, k: int) -> AlgebraSpec:
    """k[x]/(x^k) on the monomial basis."""
    prods = [[_unit_vec(k, i + j) if i + j < k else [0] * k for j in range(k)] for i in range(k)]
    return AlgebraSpec.from_table(field, prods, _unit_vec(k, 0), f"k[x]/(x^{k})")


def function_algebra(field: FieldSpec, n: int) -> AlgebraSpec:
    """k^n with pointwise product; its unit (1, ..., 1) is not a basis vector."""
    prods = [[_unit_vec(n, i) if i == j else [0] * n for j in range(n)] for i in range(n)]
    return AlgebraSpec.from_table(field, prods, [1] * n, f"k^{n}")


def change_basis(a: AlgebraSpec, P: Matrix, name=None) -> AlgebraSpec:
    """Same algebra on the basis f_j = sum_i P[i][j] e_i (P invertible)."""
    from .exactfield import Infeasible, solve_matrix

    d = a.dim
    f = a.field
    Pinv = solve_matrix(P, Matrix.identity(f, d))
    if isinstance(Pinv, Infeasible):
        raise ValueError("change of basis matrix is singular")
    table = []
    for i in range(d):
        row = []
        for j in range(d):
            prod_e = a.mul(P.cols[i], P.cols[j])
            coords = Pinv.apply(prod_e)
            row.append([coords.get(k, 0) for k in range(d)])
        table.append(row)
    unit = Pinv.apply(a.unit_vector())
    return AlgebraSpec.from_table(f, table, [unit.get(k, 0) for k in range(d)], name or a.name + "'")


def transport(g: Matrix, P: Matrix) -> Matrix:
    """Matrix of the same linear map in the basis given by the columns of P."""
    from .exactfield import solve_matrix

    return solve_matrix(P, g @ P)


# ---------------------------------------------------------------------------
# groups


def cyclic_group(n: int):
    return tuple(tuple((a + b) % n for b in range(n)) for a in range(n))


def klein_group():
    elems = list(product(range(2), repeat=2))
    idx = {e: k for k, e in enumerate(elems)}
    return tuple(tuple(idx[((a[0] + b[0]) % 2, (a[1] + b[1]) % 2)] for b in elems) for a in elems)


def trivial_action(a: AlgebraSpec, table, name=None) -> GroupActionSpec:
    ident = AutomorphismSpec(Matrix.identity(a.field, a.dim))
    return GroupActionSpec(len(table), tuple(table), 0, tuple(ident for _ in table), name or f"trivial G{len(table)}")


def character_twist(field: FieldSpec, table, chars, name=None):
    """G acting on k[H] (H abelian with table ``table``) by e_h -> chi_g(h) e_h.

    ``chars[g][h]`` are the scalars; they must be multiplicative in both g and h.
    """
    a = group_algebra(field, table)
    mats = [AutomorphismSpec(Matrix.from_rows(field, [[chars[g][h] if h == k else 0 for k in range(len(table))]
                                                     for h in range(len(table))])) for g in range(len(chars))]
    return a, mats


def sign_action(field: FieldSpec):
    """Z/2 acting on k[Z/2] = k[x]/(x^2 - 1) by x -> -x."""
    z2 = cyclic_group(2)
    a, mats = character_twist(field, z2, [[1, 1], [1, -1]])
    a = AlgebraSpec.from_table(field, [[a.structure_constants[i][j] for j in range(2)] for i in range(2)], a.unit,
                               "k[x]/(x^2-1)")
    return a, GroupActionSpec(2, z2, 0, tuple(mats), "Z/2 sign")


def permutation_action(field: FieldSpec, table, perms, name=None):
    """G acting on the function algebra k^X through permutations of X.

    ``perms[g]`` is a tuple with ``perms[g][x]`` the image of x; (g.f)(x) = f(g^{-1} x)
    so the basis function at x goes to the basis function at g x.
    """
    n = len(perms[0])
    a = function_algebra(field, n)
    mats = []
    for pg in perms:
        mats.append(AutomorphismSpec(Matrix.from_columns(field, n, [{pg[x]: 1} for x in range(n)])))
    return a, GroupActionSpec(len(table), tuple(table), 0, tuple(mats), name or f"G{len(table)} on {n} points")
