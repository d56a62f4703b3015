"""Concrete modules built from finite algebraic data.

Tensor bases are ordered row-major with the leftmost factor varying slowest.
All input validity checks (associativity, unit, automorphism, group axioms,
homomorphism) run at construction time.
"""
from __future__ import annotations

from dataclasses import dataclass
from itertools import product
from typing import Sequence

from .cylindrical import CylindricalModule
from .exactfield import FieldSpec, Matrix, rank
from .simplicial import ParacyclicModule

DEFAULT_DIM_CAP = 20000


class SpecError(ValueError):
    """Invalid construction data; ``code`` is a stable machine-readable tag."""

    def __init__(self, code: str, message: str, path: str = "", witness=None):
        super().__init__(f"{code}: {message}" + (f" at {path}" if path else ""))
        self.code = code
        self.message = message
        self.path = path
        self.witness = witness


class ResourceCapError(RuntimeError):
    code = "DIMENSION_CAP_EXCEEDED"


def _add_into(field, acc: dict, scale, vec: dict):
    for k, v in vec.items():
        w = acc.get(k, field.zero) + scale * v
        if field.kind == "Fp":
            w %= field.characteristic
        if w:
            acc[k] = w
        else:
            acc.pop(k, None)


@dataclass(frozen=True)
class AlgebraSpec:
    """Finite-dimensional unital algebra: e_i e_j = sum_k c[i][j][k] e_k."""

    field: FieldSpec
    dim: int
    structure_constants: tuple
    unit: tuple
    name: str = ""

    def __post_init__(self):
        d = self.dim
        c = self.structure_constants
        if len(c) != d or any(len(r) != d for r in c) or any(len(v) != d for r in c for v in r):
            raise SpecError("MALFORMED_DOCUMENT", f"structure constants must be {d}x{d}x{d}", "algebra.structure_constants")
        if len(self.unit) != d:
            raise SpecError("MALFORMED_DOCUMENT", f"unit must have {d} coordinates", "algebra.unit")
        f = self.field
        object.__setattr__(self, "structure_constants", tuple(tuple(tuple(f(x) for x in v) for v in r) for r in c))
        object.__setattr__(self, "unit", tuple(f(x) for x in self.unit))
        table = [[{k: x for k, x in enumerate(self.structure_constants[i][j]) if x} for j in range(d)] for i in range(d)]
        object.__setattr__(self, "_table", table)
        self.validate()

    @classmethod
    def from_table(cls, field, table, unit, name=""):
        """Build from ``table[i][j]`` = coefficient list of e_i e_j."""
        return cls(field, len(table), tuple(tuple(tuple(v) for v in r) for r in table), tuple(unit), name)

    def basis_product(self, i: int, j: int) -> dict:
        return self._table[i][j]

    def mul(self, u: dict, v: dict) -> dict:
        f = self.field
        out: dict = {}
        for i, a in u.items():
            for j, b in v.items():
                _add_into(f, out, a * b, self._table[i][j])
        return out

    def unit_vector(self) -> dict:
        return {k: x for k, x in enumerate(self.unit) if x}

    def validate(self):
        d = self.dim
        e = [{i: self.field.one} for i in range(d)]
        for i, j, k in product(range(d), repeat=3):
            lhs = self.mul(self.mul(e[i], e[j]), e[k])
            rhs = self.mul(e[i], self.mul(e[j], e[k]))
            if lhs != rhs:
                raise SpecError("ALGEBRA_NOT_ASSOCIATIVE", f"(e{i} e{j}) e{k} != e{i} (e{j} e{k})",
                                "algebra.structure_constants", [i, j, k])
        one = self.unit_vector()
        for i in range(d):
            if self.mul(one, e[i]) != e[i] or self.mul(e[i], one) != e[i]:
                raise SpecError("ALGEBRA_NOT_UNITAL", f"unit fails on e{i}", "algebra.unit", [i])


@dataclass(frozen=True)
class AutomorphismSpec:
    """Matrix of an algebra automorphism; column j is the image of e_j."""

    matrix: Matrix

    def image(self, j: int) -> dict:
        return self.matrix.cols[j]

    def validate(self, a: AlgebraSpec, path="automorphism"):
        g = self.matrix
        if g.shape != (a.dim, a.dim):
            raise SpecError("MALFORMED_DOCUMENT", f"automorphism must be {a.dim}x{a.dim}", path)
        if rank(g) != a.dim:
            raise SpecError("AUTOMORPHISM_NOT_INVERTIBLE", "matrix is singular", path)
        for i, j in product(range(a.dim), repeat=2):
            lhs = g.apply(a.basis_product(i, j))
            rhs = a.mul(g.cols[i], g.cols[j])
            if lhs != rhs:
                raise SpecError("AUTOMORPHISM_NOT_MULTIPLICATIVE", f"g(e{i} e{j}) != g(e{i}) g(e{j})", path, [i, j])
        if g.apply(a.unit_vector()) != a.unit_vector():
            raise SpecError("AUTOMORPHISM_NOT_UNITAL", "g(1) != 1", path)
        return self


@dataclass(frozen=True)
class GroupActionSpec:
    order: int
    table: tuple
    identity: int
    action: tuple  # AutomorphismSpec per element
    name: str = ""

    def mul(self, a: int, b: int) -> int:
        return self.table[a][b]

    def inverse(self, a: int) -> int:
        return self._inv[a]

    def validate(self, alg: AlgebraSpec):
        m = self.order
        t = self.table
        if len(t) != m or any(len(r) != m for r in t):
            raise SpecError("MALFORMED_DOCUMENT", f"table must be {m}x{m}", "group.table")
        if any(not (isinstance(x, int) and 0 <= x < m) for r in t for x in r):
            raise SpecError("MALFORMED_DOCUMENT", "table entries must be element indices", "group.table")
        if not 0 <= self.identity < m:
            raise SpecError("MALFORMED_DOCUMENT", "identity index out of range", "group.identity")
        e = self.identity
        for a in range(m):
            if t[e][a] != a or t[a][e] != a:
                raise SpecError("GROUP_NO_IDENTITY", f"identity fails on element {a}", "group.table", [a])
        for a in range(m):
            if sorted(t[a]) != list(range(m)) or sorted(t[b][a] for b in range(m)) != list(range(m)):
                raise SpecError("GROUP_NOT_INVERTIBLE", f"row or column {a} is not a permutation", "group.table", [a])
        for a, b, c in product(range(m), repeat=3):
            if t[t[a][b]][c] != t[a][t[b][c]]:
                raise SpecError("GROUP_NOT_ASSOCIATIVE", f"({a}{b}){c} != {a}({b}{c})", "group.table", [a, b, c])
        object.__setattr__(self, "_inv", tuple(next(b for b in range(m) if t[a][b] == e) for a in range(m)))
        if len(self.action) != m:
            raise SpecError("MALFORMED_DOCUMENT", f"need one action matrix per element ({m})", "action")
        for a, g in enumerate(self.action):
            g.validate(alg, f"action[{a}]")
        for a, b in product(range(m), repeat=2):
            if self.action[t[a][b]].matrix != self.action[a].matrix @ self.action[b].matrix:
                raise SpecError("ACTION_NOT_HOMOMORPHISM", f"action({a}*{b}) != action({a}) action({b})", "action", [a, b])
        return self


# ---------------------------------------------------------------------------
# tensor-basis helpers


def _expand(field, factors: Sequence[dict], d: int) -> dict:
    """Coordinates of a pure tensor (sparse factors in a d-dim space), leftmost slowest."""
    acc = {0: field.one}
    for vec in factors:
        nxt = {}
        for idx, a in acc.items():
            base = idx * d
            for k, b in vec.items():
                v = a * b
                if field.kind == "Fp":
                    v %= field.characteristic
                if v:
                    nxt[base + k] = nxt.get(base + k, field.zero) + v
        if field.kind == "Fp":
            acc = {k: v % field.characteristic for k, v in nxt.items() if v % field.characteristic}
        else:
            acc = {k: v for k, v in nxt.items() if v}
    return acc


def _tensor_map(field, d_src: int, n_src: int, d_tgt: int, n_tgt: int, image) -> Matrix:
    """Matrix sending each basis tuple (length n_src) to ``_expand(image(tuple))``."""
    cols = []
    for tup in product(range(d_src), repeat=n_src):
        cols.append(_expand(field, image(tup), d_tgt))
    return Matrix(field, d_tgt ** n_tgt, d_src ** n_src, cols)


def _cap(dim, cap):
    if cap is not None and dim > cap:
        raise ResourceCapError(f"a space of dimension {dim} exceeds the cap {cap}")


# ---------------------------------------------------------------------------
# A natural_g


def a_natural(a: AlgebraSpec, g: AutomorphismSpec | None = None, N: int = 3, cap: int | None = DEFAULT_DIM_CAP,
              name: str | None = None) -> ParacyclicModule:
    """The paracyclic module A^natural_g truncated at degree N (cyclic iff g = id)."""
    f, d = a.field, a.dim
    if g is None:
        g = AutomorphismSpec(Matrix.identity(f, d))
    g.validate(a)
    _cap(d ** (N + 1), cap)
    e = [{i: f.one} for i in range(d)]
    one = a.unit_vector()
    gimg = [g.image(j) for j in range(d)]

    faces = [()]
    for n in range(1, N + 1):
        fs = []
        for i in range(n):
            fs.append(_tensor_map(f, d, n + 1, d, n,
                                  lambda t, i=i: [e[x] for x in t[:i]] + [a.basis_product(t[i], t[i + 1])] + [e[x] for x in t[i + 2:]]))
        fs.append(_tensor_map(f, d, n + 1, d, n,
                              lambda t: [a.mul(gimg[t[-1]], e[t[0]])] + [e[x] for x in t[1:-1]]))
        faces.append(tuple(fs))
    degs = []
    for n in range(N):
        degs.append(tuple(_tensor_map(f, d, n + 1, d, n + 2,
                                      lambda t, i=i: [e[x] for x in t[:i + 1]] + [one] + [e[x] for x in t[i + 1:]])
                          for i in range(n + 1)))
    taus = tuple(_tensor_map(f, d, n + 1, d, n + 1, lambda t: [gimg[t[-1]]] + [e[x] for x in t[:-1]])
                 for n in range(N + 1))
    label = name or f"A♮({a.name or f'dim {d}'})"
    return ParacyclicModule(f, N, tuple(d ** (n + 1) for n in range(N + 1)), tuple(faces), tuple(degs), taus, label)


# ---------------------------------------------------------------------------
# group action cylindrical module


def group_action_cylindrical(a: AlgebraSpec, act: GroupActionSpec, N: int = 3,
                             cap: int | None = DEFAULT_DIM_CAP, name: str | None = None) -> CylindricalModule:
    """X_{m,n} = kG^{(m+1)} (x) A^{(n+1)} with the transported cylindrical structure."""
    act.validate(a)
    f, d, G = a.field, a.dim, act.order
    _cap(G ** (N + 1) * d ** (N + 1), cap)
    e = [{i: f.one} for i in range(d)]
    one = a.unit_vector()
    mats = [g.matrix for g in act.action]
    inv = [act.inverse(x) for x in range(G)]

    def prod_all(gs):
        out = act.identity
        for x in gs:
            out = act.mul(out, x)
        return out

    def op(m_src, n_src, m_tgt, n_tgt, fn):
        """fn(gs, as_) -> (new group tuple, list of algebra factor vectors)."""
        cols = []
        width = d ** n_tgt
        for gs in product(range(G), repeat=m_src):
            for as_ in product(range(d), repeat=n_src):
                new_g, factors = fn(gs, as_)
                gi = 0
                for x in new_g:
                    gi = gi * G + x
                vec = _expand(f, factors, d)
                cols.append({gi * width + k: v for k, v in vec.items()})
        return Matrix(f, G ** m_tgt * width, G ** m_src * d ** n_src, cols)

    def act_on(x, vec):
        return mats[x].apply(vec)

    dims, hf, hd, ht, vf, vd, vt = {}, {}, {}, {}, {}, {}, {}
    for m, n in product(range(N + 1), repeat=2):
        M, Nn = m + 1, n + 1
        dims[(m, n)] = G ** M * d ** Nn
        # vertical
        vt[(m, n)] = op(M, Nn, M, Nn, lambda gs, as_: (gs, [act_on(inv[prod_all(gs)], e[as_[-1]])] + [e[x] for x in as_[:-1]]))
        if n >= 1:
            fs = [op(M, Nn, M, n, lambda gs, as_, i=i: (gs, [e[x] for x in as_[:i]] + [a.basis_product(as_[i], as_[i + 1])] + [e[x] for x in as_[i + 2:]]))
                  for i in range(n)]
            fs.append(op(M, Nn, M, n, lambda gs, as_: (gs, [a.mul(act_on(inv[prod_all(gs)], e[as_[-1]]), e[as_[0]])] + [e[x] for x in as_[1:-1]])))
            vf[(m, n)] = tuple(fs)
        else:
            vf[(m, n)] = ()
        vd[(m, n)] = tuple(op(M, Nn, M, Nn + 1, lambda gs, as_, i=i: (gs, [e[x] for x in as_[:i + 1]] + [one] + [e[x] for x in as_[i + 1:]]))
                           for i in range(n + 1)) if n < N else ()
        # horizontal
        ht[(m, n)] = op(M, Nn, M, Nn, lambda gs, as_: ((gs[-1],) + gs[:-1], [act_on(gs[-1], e[x]) for x in as_]))
        if m >= 1:
            fs = [op(M, Nn, m, Nn, lambda gs, as_, i=i: (gs[:i] + (act.mul(gs[i], gs[i + 1]),) + gs[i + 2:], [e[x] for x in as_]))
                  for i in range(m)]
            fs.append(op(M, Nn, m, Nn, lambda gs, as_: ((act.mul(gs[-1], gs[0]),) + gs[1:-1], [act_on(gs[-1], e[x]) for x in as_])))
            hf[(m, n)] = tuple(fs)
        else:
            hf[(m, n)] = ()
        hd[(m, n)] = tuple(op(M, Nn, M + 1, Nn, lambda gs, as_, i=i: (gs[:i + 1] + (act.identity,) + gs[i + 1:], [e[x] for x in as_]))
                           for i in range(m + 1)) if m < N else ()
    label = name or f"{act.name or f'G(order {G})'} on {a.name or f'dim {d}'}"
    return CylindricalModule(f, N, dims, hf, hd, ht, vf, vd, vt, label)


# ---------------------------------------------------------------------------
# tensor product of two cyclic modules


def tensor_cylindrical(m1: ParacyclicModule, m2: ParacyclicModule, name: str | None = None,
                       cap: int | None = DEFAULT_DIM_CAP) -> CylindricalModule:
    """X_{p,q} = (m1)_p (x) (m2)_q: horizontal = m1's operators, vertical = m2's."""
    if m1.field != m2.field:
        raise SpecError("FIELD_MISMATCH", "tensor factors live over different fields")
    if m1.N != m2.N:
        raise SpecError("TRUNCATION_MISMATCH", "tensor factors have different truncations")
    f, N = m1.field, m1.N
    _cap(m1.dims[N] * m2.dims[N], cap)
    I1 = [Matrix.identity(f, x) for x in m1.dims]
    I2 = [Matrix.identity(f, x) for x in m2.dims]
    dims, hf, hd, ht, vf, vd, vt = {}, {}, {}, {}, {}, {}, {}
    for p, q in product(range(N + 1), repeat=2):
        dims[(p, q)] = m1.dims[p] * m2.dims[q]
        hf[(p, q)] = tuple(x.kron(I2[q]) for x in m1.face[p])
        hd[(p, q)] = tuple(x.kron(I2[q]) for x in m1.degeneracy[p]) if p < N else ()
        ht[(p, q)] = m1.tau[p].kron(I2[q])
        vf[(p, q)] = tuple(I1[p].kron(x) for x in m2.face[q])
        vd[(p, q)] = tuple(I1[p].kron(x) for x in m2.degeneracy[q]) if q < N else ()
        vt[(p, q)] = I1[p].kron(m2.tau[q])
    return CylindricalModule(f, N, dims, hf, hd, ht, vf, vd, vt, name or f"{m1.name} ⊗ {m2.name}")
