"""Random small instances and single-operator mutations.

Instances are built from a few base algebras with automorphisms or group
actions, moved to a random basis so that no structure constant is in a
canonical form.  A mutation multiplies one operator matrix by a scalar
c not in {0, 1}; this always breaks some identity (d_i s_i = 1, or a
relation involving tau), so every mutant must produce a witnessed failure.
"""
from __future__ import annotations

import random
from dataclasses import dataclass

from . import catalog as C
from .constructors import (
    AutomorphismSpec,
    GroupActionSpec,
    a_natural,
    group_action_cylindrical,
    tensor_cylindrical,
)
from .cylindrical import CylindricalModule
from .exactfield import FieldSpec, Matrix, rank, solve_matrix
from .simplicial import ParacyclicModule

CLASSES = ("cyclic", "paracyclic", "cylindrical")


@dataclass(frozen=True)
class Instance:
    cls: str
    module: object
    cyclic: bool
    description: str


def _scalar(field: FieldSpec, rng: random.Random, nonzero=False):
    while True:
        if field.kind == "Q":
            num, den = rng.randint(-3, 3), rng.randint(1, 3)
            v = field(f"{num}/{den}")
        else:
            v = field(rng.randrange(field.characteristic))
        if v or not nonzero:
            return v


def random_invertible(field: FieldSpec, n: int, rng: random.Random) -> Matrix:
    while True:
        m = Matrix.from_rows(field, [[rng.randint(-2, 2) for _ in range(n)] for _ in range(n)])
        if rank(m) == n:
            return m


def _conjugate(g: Matrix, P: Matrix) -> Matrix:
    """Matrix of g in the basis given by the columns of P."""
    return solve_matrix(P, g @ P)


def _base_with_automorphism(field, rng):
    """(algebra, automorphism matrix, label) with a random parameter."""
    choice = rng.randrange(4)
    if choice == 0:
        c = _scalar(field, rng, nonzero=True)
        return C.dual_numbers(field), Matrix.from_rows(field, [[1, 0], [0, c]]), f"x -> {field.fmt(c)} x"
    if choice == 1:
        a = C.truncated_polynomials(field, 3)
        c, d = _scalar(field, rng, nonzero=True), _scalar(field, rng)
        # x -> c x + d x^2, so x^2 -> c^2 x^2
        g = Matrix.from_rows(field, [[1, 0, 0], [0, c, 0], [0, d, c * c]])
        return a, g, f"x -> {field.fmt(c)} x + {field.fmt(d)} x^2"
    if choice == 2:
        a = C.group_algebra(field, C.cyclic_group(2))
        return a, Matrix.from_rows(field, [[1, 0], [0, -1]]), "sign character"
    a = C.function_algebra(field, 2)
    return a, Matrix.from_rows(field, [[0, 1], [1, 0]]), "swap"


def _small_base(field, rng):
    while True:
        a, g, _ = _base_with_automorphism(field, rng)
        if a.dim <= 2:
            return a, g


def _rebase(field, a, g, rng):
    P = random_invertible(field, a.dim, rng)
    return C.change_basis(a, P), _conjugate(g, P)


def random_instance(cls: str, field: FieldSpec, N: int, rng: random.Random) -> Instance:
    if cls == "cyclic":
        a, g, label = _base_with_automorphism(field, rng)
        a2, _ = _rebase(field, a, g, rng)
        return Instance(cls, a_natural(a2, None, N, name=f"A({a.name}) rebased"), True, f"A({a.name}) in a random basis")
    if cls == "paracyclic":
        a, g, label = _base_with_automorphism(field, rng)
        a2, g2 = _rebase(field, a, g, rng)
        m = a_natural(a2, AutomorphismSpec(g2), N, name=f"A_g({a.name}), {label}")
        return Instance(cls, m, m.is_cyclic(), f"A_g({a.name}) with g: {label}, random basis")
    if cls == "cylindrical":
        if rng.random() < 0.3:
            a1, g1 = _small_base(field, rng)
            a2, g2 = _small_base(field, rng)
            m1 = a_natural(_rebase(field, a1, g1, rng)[0], None, N)
            m2 = a_natural(_rebase(field, a2, g2, rng)[0], None, N)
            return Instance(cls, tensor_cylindrical(m1, m2), False, f"A({a1.name}) x A({a2.name})")
        # Z/2 acting through an involution (or trivially)
        while True:
            a, g, label = _base_with_automorphism(field, rng)
            if a.dim <= 2 and (g @ g) == Matrix.identity(field, a.dim):
                break
        if rng.random() < 0.25:
            g, label = Matrix.identity(field, a.dim), "trivial"
        a2, g2 = _rebase(field, a, g, rng)
        one = AutomorphismSpec(Matrix.identity(field, a2.dim))
        act = GroupActionSpec(2, C.cyclic_group(2), 0, (one, AutomorphismSpec(g2)), f"Z/2 via {label}")
        return Instance(cls, group_action_cylindrical(a2, act, N), False, f"Z/2 on {a.name} via {label}, random basis")
    raise ValueError(cls)


def random_instances(cls: str, count: int, field: FieldSpec, N: int, seed: int = 0) -> list[Instance]:
    rng = random.Random(f"{cls}:{seed}")
    return [random_instance(cls, field, N, rng) for _ in range(count)]


# ---------------------------------------------------------------------------
# mutations


def _pick_scalar(field, rng):
    while True:
        c = _scalar(field, rng, nonzero=True)
        if c != field.one:
            return c


def mutate(module, rng: random.Random):
    """Copy of ``module`` with one operator matrix scaled; returns (mutant, description)."""
    if isinstance(module, ParacyclicModule):
        return _mutate_paracyclic(module, rng)
    if isinstance(module, CylindricalModule):
        return _mutate_cylindrical(module, rng)
    raise TypeError(type(module))


def _mutate_paracyclic(m: ParacyclicModule, rng):
    c = _pick_scalar(m.field, rng)
    options = []
    for n in range(m.N + 1):
        if not m.dims[n]:
            continue
        options.append(("tau", n, None))
        options += [("face", n, i) for i in range(len(m.face[n]))]
        if n < m.N:
            options += [("degeneracy", n, i) for i in range(len(m.degeneracy[n]))]
    kind, n, i = rng.choice(options)
    if kind == "tau":
        tau = list(m.tau)
        tau[n] = tau[n].scale(c)
        new = m.replace(tau=tuple(tau))
    else:
        fam = list(getattr(m, kind))
        ops = list(fam[n])
        ops[i] = ops[i].scale(c)
        fam[n] = tuple(ops)
        new = m.replace(**{kind: tuple(fam)})
    return new, {"operator": kind, "degree": n, "index": i, "scale": m.field.fmt(c)}


def _mutate_cylindrical(x: CylindricalModule, rng):
    c = _pick_scalar(x.field, rng)
    options = []
    for (p, q) in x.bidegrees():
        if not x.dims[(p, q)]:
            continue
        options += [("ht", (p, q), None), ("vtau", (p, q), None)]
        options += [("hface", (p, q), i) for i in range(len(x.hface[(p, q)]))]
        options += [("vface", (p, q), i) for i in range(len(x.vface[(p, q)]))]
        options += [("hdeg", (p, q), i) for i in range(len(x.hdeg[(p, q)]))]
        options += [("vdeg", (p, q), i) for i in range(len(x.vdeg[(p, q)]))]
    kind, bd, i = rng.choice(options)
    fam = dict(getattr(x, kind))
    if i is None:
        fam[bd] = fam[bd].scale(c)
    else:
        ops = list(fam[bd])
        ops[i] = ops[i].scale(c)
        fam[bd] = tuple(ops)
    return x.replace(**{kind: fam}), {"operator": kind, "bidegree": list(bd), "index": i, "scale": x.field.fmt(c)}
