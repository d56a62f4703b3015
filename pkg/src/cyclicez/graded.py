"""Degree-indexed operator families with truncation-aware algebra.

A :class:`GradedMap` of shift ``k`` holds one matrix per source degree ``n``
(mapping degree ``n`` to degree ``n + k``).  A degree that is absent from
``blocks`` is *clipped*: the operator is not available there because some
factor would leave the truncation window.  Composition and sums propagate
clipping, so an identity is only ever compared where every summand exists.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Mapping

from .exactfield import FieldSpec, Matrix
from .report import FAIL, PASS, SKIP, Check


@dataclass(frozen=True)
class GradedMap:
    field: FieldSpec
    shift: int
    blocks: Mapping[int, Matrix]

    @classmethod
    def identity(cls, field, dims: Mapping[int, int]):
        return cls(field, 0, {n: Matrix.identity(field, d) for n, d in dims.items()})

    @classmethod
    def zero(cls, field, shift, dims: Mapping[int, int]):
        blocks = {n: Matrix.zeros(field, dims[n + shift], d) for n, d in dims.items() if n + shift in dims}
        return cls(field, shift, blocks)

    @property
    def degrees(self) -> list[int]:
        return sorted(self.blocks)

    def __getitem__(self, n) -> Matrix:
        return self.blocks[n]

    def __contains__(self, n) -> bool:
        return n in self.blocks

    def __matmul__(self, other: "GradedMap") -> "GradedMap":
        out = {}
        for n, m in other.blocks.items():
            k = n + other.shift
            if k in self.blocks:
                out[n] = self.blocks[k] @ m
        return GradedMap(self.field, self.shift + other.shift, out)

    def _combine(self, other, op):
        if self.shift != other.shift:
            raise ValueError(f"cannot add maps of shift {self.shift} and {other.shift}")
        common = set(self.blocks) & set(other.blocks)
        return GradedMap(self.field, self.shift, {n: op(self.blocks[n], other.blocks[n]) for n in common})

    def __add__(self, other):
        return self._combine(other, lambda a, b: a + b)

    def __sub__(self, other):
        return self._combine(other, lambda a, b: a - b)

    def __neg__(self):
        return GradedMap(self.field, self.shift, {n: -m for n, m in self.blocks.items()})

    def scale(self, c):
        return GradedMap(self.field, self.shift, {n: m.scale(c) for n, m in self.blocks.items()})

    def restrict(self, degrees) -> "GradedMap":
        keep = set(degrees)
        return GradedMap(self.field, self.shift, {n: m for n, m in self.blocks.items() if n in keep})

    def map_blocks(self, fn: Callable[[int, Matrix], Matrix]) -> "GradedMap":
        return GradedMap(self.field, self.shift, {n: fn(n, m) for n, m in self.blocks.items()})

    def is_zero(self) -> bool:
        return all(m.is_zero() for m in self.blocks.values())


def pad_below(gm: GradedMap, tgt_dims: Mapping[int, int]) -> GradedMap:
    """Add the (empty) block out of degree -1 so that ``gm @ b`` is defined in degree 0."""
    if -1 in gm.blocks:
        return gm
    rows = tgt_dims.get(gm.shift - 1, 0)
    return GradedMap(gm.field, gm.shift, {-1: Matrix.zeros(gm.field, rows, 0), **gm.blocks})


def gsum(maps) -> GradedMap:
    maps = list(maps)
    out = maps[0]
    for m in maps[1:]:
        out = out + m
    return out


def compare(name: str, ref: str, lhs: GradedMap, rhs: GradedMap, window=None, label="degree") -> Check:
    """Exact equality of two operator families on their common, optionally windowed, domain."""
    common = sorted(set(lhs.blocks) & set(rhs.blocks))
    if window is not None:
        common = [n for n in common if n in set(window)]
    if not common:
        return Check(name, ref, [], SKIP)
    for n in common:
        a, b = lhs.blocks[n], rhs.blocks[n]
        if a.shape != b.shape:
            return Check(name, ref, common, FAIL, {label: n, "reason": f"shape {a.shape} vs {b.shape}"})
        diff = a.first_difference(b)
        if diff is not None:
            return Check(name, ref, common, FAIL, {label: n, "row": diff[0], "col": diff[1]})
    return Check(name, ref, common, PASS)


def vanishes(name: str, ref: str, op: GradedMap, window=None, label="degree") -> Check:
    common = sorted(op.blocks)
    if window is not None:
        common = [n for n in common if n in set(window)]
    if not common:
        return Check(name, ref, [], SKIP)
    for n in common:
        hit = op.blocks[n].first_nonzero()
        if hit is not None:
            return Check(name, ref, common, FAIL, {label: n, "row": hit[0], "col": hit[1]})
    return Check(name, ref, common, PASS)


def merge_checks(name: str, ref: str, checks: list[Check]) -> Check:
    """Fold sub-checks into one; first failure wins and carries its witness."""
    window = []
    for c in checks:
        if c.status == FAIL:
            return Check(name, ref, c.window, FAIL, c.witness, c.detail)
        if c.window:
            window.extend(c.window if isinstance(c.window, list) else [c.window])
    if not window:
        return Check(name, ref, [], SKIP)
    try:
        window = sorted(set(window))
    except TypeError:
        pass
    return Check(name, ref, window, PASS)
