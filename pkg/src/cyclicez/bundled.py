"""The bundled example catalog.

Every entry builds a module over a given field and truncation.  The
default desk scales are N = 3 over Q and N = 4 over F_1009.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

from . import catalog as C
from .constructors import (
    AutomorphismSpec,
    GroupActionSpec,
    a_natural,
    group_action_cylindrical,
    tensor_cylindrical,
)
from .exactfield import GF, QQ, FieldSpec, Matrix

DESK_SCALES = ((QQ, 3), (GF(1009), 4))


@dataclass(frozen=True)
class Example:
    name: str
    kind: str          # "paracyclic" or "cylindrical"
    cyclic: bool       # only meaningful for paracyclic entries
    build: Callable


def _algebras(field: FieldSpec):
    return {
        "Q": C.ground_field(field),
        "Q[Z/2]": C.group_algebra(field, C.cyclic_group(2), name="k[Z/2]"),
        "Q[x]/(x^2)": C.dual_numbers(field),
    }


def _involution(field: FieldSpec, alg_name: str) -> AutomorphismSpec:
    """The generator of the bundled Z/2 action on each algebra."""
    if alg_name == "Q":
        return AutomorphismSpec(Matrix.identity(field, 1))
    # both 2-dimensional algebras: e_1 -> -e_1 (the sign character, resp. x -> -x)
    return AutomorphismSpec(Matrix.from_rows(field, [[1, 0], [0, -1]]))


def _action(field: FieldSpec, alg_name: str, group: str) -> GroupActionSpec:
    a = _algebras(field)[alg_name]
    if group == "1":
        return C.trivial_action(a, C.cyclic_group(1), "G=1")
    if group == "Z/3":
        # Q has no primitive cube roots of unity, so Z/3 acts trivially on these algebras
        return C.trivial_action(a, C.cyclic_group(3), "Z/3 trivial")
    one = AutomorphismSpec(Matrix.identity(field, a.dim))
    gen = _involution(field, alg_name)
    name = "Z/2 trivial" if alg_name == "Q" else "Z/2 sign"
    return GroupActionSpec(2, C.cyclic_group(2), 0, (one, gen), name)


def _a_natural(alg_name, twisted=False):
    def build(field, N):
        a = _algebras(field)[alg_name]
        g = _involution(field, alg_name) if twisted else None
        suffix = "_g" if twisted else ""
        return a_natural(a, g, N, name=f"A{suffix}({alg_name})")
    return build


def _group(alg_name, group):
    def build(field, N):
        a = _algebras(field)[alg_name]
        act = _action(field, alg_name, group)
        return group_action_cylindrical(a, act, N, name=f"{group} on {alg_name} ({act.name})")
    return build


def _tensor(left, right):
    def build(field, N):
        algs = _algebras(field)
        m1 = a_natural(algs[left], None, N, name=f"A({left})")
        m2 = a_natural(algs[right], None, N, name=f"A({right})")
        return tensor_cylindrical(m1, m2, name=f"A({left}) x A({right})")
    return build


def examples() -> list[Example]:
    out = []
    for alg in ("Q", "Q[Z/2]", "Q[x]/(x^2)"):
        out.append(Example(f"A({alg})", "paracyclic", True, _a_natural(alg)))
    for alg in ("Q[Z/2]", "Q[x]/(x^2)"):
        out.append(Example(f"A_g({alg})", "paracyclic", False, _a_natural(alg, True)))
    for group in ("1", "Z/2", "Z/3"):
        for alg in ("Q", "Q[Z/2]", "Q[x]/(x^2)"):
            out.append(Example(f"{group} on {alg}", "cylindrical", False, _group(alg, group)))
    for left, right in (("Q", "Q"), ("Q[Z/2]", "Q[Z/2]"), ("Q[x]/(x^2)", "Q[x]/(x^2)"), ("Q[Z/2]", "Q[x]/(x^2)")):
        out.append(Example(f"A({left}) x A({right})", "cylindrical", False, _tensor(left, right)))
    return out


def get(name: str) -> Example:
    for ex in examples():
        if ex.name == name:
            return ex
    raise KeyError(name)


def cylindrical_examples() -> list[Example]:
    return [e for e in examples() if e.kind == "cylindrical"]


def paracyclic_examples() -> list[Example]:
    return [e for e in examples() if e.kind == "paracyclic"]
