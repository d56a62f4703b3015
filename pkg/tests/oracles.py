"""Independent reference implementations used only by the tests.

Dense row-reduction over Fractions or residues mod p, written without
reference to the package's sparse column reducer.
"""
from fractions import Fraction
from itertools import permutations


def _norm(x, p):
    return Fraction(x) if p is None else int(x) % p


def _inv(x, p):
    return 1 / x if p is None else pow(x, -1, p)


def rref(rows, p=None):
    """Reduced row echelon form and pivot columns of a dense matrix."""
    a = [[_norm(x, p) for x in r] for r in rows]
    if not a:
        return a, []
    m, n = len(a), len(a[0])
    pivots, r = [], 0
    for c in range(n):
        k = next((i for i in range(r, m) if a[i][c] != 0), None)
        if k is None:
            continue
        a[r], a[k] = a[k], a[r]
        iv = _inv(a[r][c], p)
        a[r] = [_norm(x * iv, p) for x in a[r]]
        for i in range(m):
            if i != r and a[i][c] != 0:
                f = a[i][c]
                a[i] = [_norm(x - f * y, p) for x, y in zip(a[i], a[r])]
        pivots.append(c)
        r += 1
        if r == m:
            break
    return a, pivots


def dense_rank(rows, p=None):
    return len(rref(rows, p)[1])


def dense_nullity(rows, ncols, p=None):
    return ncols - (dense_rank(rows, p) if rows else 0)


def matmul(a, b, p=None):
    return [[_norm(sum(a[i][k] * b[k][j] for k in range(len(b))), p) for j in range(len(b[0]))] for i in range(len(a))]


def det(rows, p=None):
    """Leibniz formula; only for tiny matrices."""
    n = len(rows)
    total = 0
    for perm in permutations(range(n)):
        inv = sum(1 for i in range(n) for j in range(i + 1, n) if perm[i] > perm[j])
        term = -1 if inv % 2 else 1
        for i in range(n):
            term *= Fraction(rows[i][perm[i]])
        total += term
    return _norm(total, p)


def connes_hc_of_ground_field(n):
    """HC_n(k) for a field of characteristic 0: k in even degrees, 0 in odd ones."""
    return 1 if n % 2 == 0 else 0
