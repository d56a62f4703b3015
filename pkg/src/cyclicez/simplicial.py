"""Paracyclic and cyclic modules, mixed complexes and their homology.

A paracyclic module truncated at degree ``N`` is stored as explicit matrices:
faces ``face[n][i]: M_n -> M_{n-1}`` (``1 <= n <= N``), degeneracies
``degeneracy[n][i]: M_n -> M_{n+1}`` (``n < N``) and the cyclic automorphisms
``tau[n]``.  Every identity is checked only where all of its composites stay
inside degrees ``0..N``.
"""
from __future__ import annotations

from dataclasses import dataclass, field as dc_field
from typing import Mapping, Sequence

from . import conventions
from .exactfield import (
    FieldSpec,
    Matrix,
    Subspace,
    column_space,
    kernel_basis,
    quotient_structure,
    rank,
)
from .graded import GradedMap, compare, gsum, merge_checks, pad_below, vanishes
from .report import FAIL, INFO, PASS, SKIP, Check, Report


class TruncationError(ValueError):
    """Requested degree lies outside the truncation or the safe window."""


class OracleError(ValueError):
    code = "ORACLE_REQUIRES_CHAR_ZERO"


class NotMixedError(ValueError):
    """The complex has bB + Bb != 0, so its B-bicomplex is not a complex."""

    code = "NOT_MIXED"


class NormalizationError(RuntimeError):
    """An operator fails to preserve the degenerate subcomplex."""


@dataclass(frozen=True)
class ParacyclicModule:
    field: FieldSpec
    N: int
    dims: tuple
    face: tuple          # face[n][i], n = 0..N (face[0] is empty)
    degeneracy: tuple    # degeneracy[n][i], n = 0..N-1
    tau: tuple           # tau[n], n = 0..N
    name: str = ""

    def __post_init__(self):
        if len(self.dims) != self.N + 1:
            raise ValueError("dims must list degrees 0..N")
        for n in range(self.N + 1):
            if len(self.face[n]) != (n + 1 if n > 0 else 0):
                raise ValueError(f"degree {n} needs {n + 1} faces")
            for i, m in enumerate(self.face[n]):
                if m.shape != (self.dims[n - 1], self.dims[n]):
                    raise ValueError(f"face[{n}][{i}] has shape {m.shape}")
            if self.tau[n].shape != (self.dims[n], self.dims[n]):
                raise ValueError(f"tau[{n}] has shape {self.tau[n].shape}")
        for n in range(self.N):
            if len(self.degeneracy[n]) != n + 1:
                raise ValueError(f"degree {n} needs {n + 1} degeneracies")
            for i, m in enumerate(self.degeneracy[n]):
                if m.shape != (self.dims[n + 1], self.dims[n]):
                    raise ValueError(f"degeneracy[{n}][{i}] has shape {m.shape}")

    @property
    def dim_map(self) -> dict:
        return dict(enumerate(self.dims))

    def is_cyclic(self) -> bool:
        return all(
            self.tau[n].power(n + 1) == Matrix.identity(self.field, self.dims[n]) for n in range(self.N + 1)
        )

    def replace(self, **kw) -> "ParacyclicModule":
        data = dict(field=self.field, N=self.N, dims=self.dims, face=self.face,
                    degeneracy=self.degeneracy, tau=self.tau, name=self.name)
        data.update(kw)
        return ParacyclicModule(**data)


# A cyclic module is a paracyclic module whose tau has order n + 1 in degree n;
# the distinction is a checked property, not a separate storage layout.
CyclicModule = ParacyclicModule


def zero_module(field: FieldSpec, N: int, name="zero") -> ParacyclicModule:
    z = lambda r, c: Matrix.zeros(field, r, c)
    return ParacyclicModule(
        field, N, (0,) * (N + 1),
        tuple(tuple(z(0, 0) for _ in range(n + 1)) if n else () for n in range(N + 1)),
        tuple(tuple(z(0, 0) for _ in range(n + 1)) for n in range(N)),
        tuple(z(0, 0) for _ in range(N + 1)),
        name,
    )


# ---------------------------------------------------------------------------
# structural identities


def _eq(a: Matrix, b: Matrix):
    if a.shape != b.shape:
        return {"reason": f"shape {a.shape} vs {b.shape}"}
    d = a.first_difference(b)
    return None if d is None else {"row": d[0], "col": d[1]}


def _family(name, ref, cases, report, prefix=""):
    """Evaluate ``cases`` -> iterable of (witness_dict, lhs, rhs); record first failure."""
    window = []
    for wit, lhs, rhs in cases:
        window.append(wit.get("n"))
        diff = _eq(lhs, rhs)
        if diff is not None:
            report.add(Check(prefix + name, ref, sorted(set(w for w in window if w is not None)), FAIL, {**wit, **diff}))
            return
    status = PASS if window else SKIP
    report.add(Check(prefix + name, ref, sorted(set(w for w in window if w is not None)), status))


def simplicial_checks(face, degeneracy, N, report: Report, prefix="", extra_wit=None):
    """Face/degeneracy identities of a truncated simplicial object."""
    ew = extra_wit or {}

    def dd():
        for n in range(2, N + 1):
            for j in range(1, n + 1):
                for i in range(j):
                    yield {**ew, "n": n, "i": i, "j": j}, face[n - 1][i] @ face[n][j], face[n - 1][j - 1] @ face[n][i]

    def ds():
        for n in range(N):  # sigma_j : M_n -> M_{n+1}, delta_i : M_{n+1} -> M_n
            for j in range(n + 1):
                for i in range(n + 2):
                    lhs = face[n + 1][i] @ degeneracy[n][j]
                    if i < j:
                        if n == 0:
                            continue
                        rhs = degeneracy[n - 1][j - 1] @ face[n][i]
                    elif i in (j, j + 1):
                        rhs = Matrix.identity(lhs.field, lhs.nrows)
                    else:
                        rhs = degeneracy[n - 1][j] @ face[n][i - 1]
                    yield {**ew, "n": n, "i": i, "j": j}, lhs, rhs

    def ss():
        for n in range(N - 1):
            for j in range(n + 1):
                for i in range(j + 1):
                    yield {**ew, "n": n, "i": i, "j": j}, degeneracy[n + 1][i] @ degeneracy[n][j], degeneracy[n + 1][j + 1] @ degeneracy[n][i]

    _family("faces.dd", "d_i d_j = d_{j-1} d_i (i<j)", dd(), report, prefix)
    _family("faces.ds", "d_i s_j = s_{j-1} d_i | id | s_j d_{i-1}", ds(), report, prefix)
    _family("faces.ss", "s_i s_j = s_{j+1} s_i (i<=j)", ss(), report, prefix)


def cyclic_relation_checks(face, degeneracy, tau, N, report: Report, prefix="", extra_wit=None):
    """The four relations tying tau to faces and degeneracies."""
    ew = extra_wit or {}

    def dt():
        for n in range(1, N + 1):
            for i in range(1, n + 1):
                yield {**ew, "n": n, "i": i}, face[n][i] @ tau[n], tau[n - 1] @ face[n][i - 1]

    def d0t():
        for n in range(1, N + 1):
            yield {**ew, "n": n}, face[n][0] @ tau[n], face[n][n]

    def st():
        for n in range(1, N):
            for i in range(1, n + 1):
                yield {**ew, "n": n, "i": i}, degeneracy[n][i] @ tau[n], tau[n + 1] @ degeneracy[n][i - 1]

    def s0t():
        for n in range(N):
            yield {**ew, "n": n}, degeneracy[n][0] @ tau[n], tau[n + 1] @ tau[n + 1] @ degeneracy[n][n]

    _family("tau.face", "d_i tau_n = tau_{n-1} d_{i-1} (1<=i<=n)", dt(), report, prefix)
    _family("tau.face0", "d_0 tau_n = d_n", d0t(), report, prefix)
    _family("tau.degeneracy", "s_i tau_n = tau_{n+1} s_{i-1} (1<=i<=n)", st(), report, prefix)
    _family("tau.degeneracy0", "s_0 tau_n = tau_{n+1}^2 s_n", s0t(), report, prefix)
    # invertibility
    bad = next((n for n in range(N + 1) if rank(tau[n]) != tau[n].nrows), None)
    if bad is None:
        report.add(Check(prefix + "tau.invertible", "tau_n is an automorphism", list(range(N + 1))))
    else:
        report.add(Check(prefix + "tau.invertible", "tau_n is an automorphism", list(range(N + 1)), FAIL, {**ew, "n": bad}))


def cyclic_condition_check(tau, N, report: Report, prefix="", extra_wit=None):
    ew = extra_wit or {}
    cases = ((({**ew, "n": n}), tau[n].power(n + 1), Matrix.identity(tau[n].field, tau[n].nrows)) for n in range(N + 1))
    _family("cyclic", "tau_n^{n+1} = id", cases, report, prefix)


def check_paracyclic(m: ParacyclicModule, cyclic: bool = False) -> Report:
    """All paracyclic relations (and optionally the cyclic condition) with witnesses."""
    rep = Report(f"paracyclic identities: {m.name or 'module'}")
    simplicial_checks(m.face, m.degeneracy, m.N, rep)
    cyclic_relation_checks(m.face, m.degeneracy, m.tau, m.N, rep)
    if cyclic:
        cyclic_condition_check(m.tau, m.N, rep)
    return rep


# ---------------------------------------------------------------------------
# operator calculus


def _need(m, n, top):
    if not 0 <= n <= top:
        raise TruncationError(f"degree {n} outside 0..{top}")


def cyclic_operator_t(m: ParacyclicModule, n: int) -> Matrix:
    """t = (-1)^n tau_n."""
    _need(m, n, m.N)
    return m.tau[n] if n % 2 == 0 else -m.tau[n]


def extra_degeneracy(m: ParacyclicModule, n: int) -> Matrix:
    """sigma_{-1} = tau_{n+1} sigma_n : M_n -> M_{n+1}."""
    _need(m, n, m.N - 1)
    return m.tau[n + 1] @ m.degeneracy[n][n]


connes_sigma = extra_degeneracy


def norm_N(m: ParacyclicModule, n: int) -> Matrix:
    """1 + t + ... + t^n in degree n."""
    _need(m, n, m.N)
    t = cyclic_operator_t(m, n)
    acc = Matrix.identity(m.field, m.dims[n])
    power = acc
    for _ in range(n):
        power = t @ power
        acc = acc + power
    return acc


def hochschild_b(m: ParacyclicModule, n: int) -> Matrix:
    if n == 0:
        return Matrix.zeros(m.field, 0, m.dims[0])
    out = m.face[n][0]
    for i in range(1, n + 1):
        out = out + m.face[n][i] if i % 2 == 0 else out - m.face[n][i]
    return out


def connes_B(m: ParacyclicModule, n: int, order: str | None = None) -> Matrix:
    """Degree n -> n+1 Connes operator in the requested composition order.

    ``"norm_first"``: (1 - t) sigma_{-1} N.  ``"norm_last"``: N sigma_{-1} (1 - t).
    """
    order = order or conventions.B_ORDER
    one_n = Matrix.identity(m.field, m.dims[n])
    one_n1 = Matrix.identity(m.field, m.dims[n + 1])
    s = extra_degeneracy(m, n)
    if order == "norm_first":
        return (one_n1 - cyclic_operator_t(m, n + 1)) @ s @ norm_N(m, n)
    if order == "norm_last":
        return norm_N(m, n + 1) @ s @ (one_n - cyclic_operator_t(m, n))
    raise ValueError(f"unknown B order {order!r}")


# ---------------------------------------------------------------------------
# mixed complexes


@dataclass(frozen=True)
class MixedComplex:
    """Graded module with b (degree -1) and B (degree +1), truncated at N.

    ``b`` has blocks for degrees ``0..N`` (``b_0`` maps to the zero space) and
    ``B`` for ``0..N-1``.  ``flags`` may contain ``"pre-mixed"`` when
    ``bB + Bb`` is allowed to be nonzero.
    """

    field: FieldSpec
    N: int
    dims: tuple
    b: GradedMap
    B: GradedMap
    flags: frozenset = frozenset()
    name: str = ""

    @property
    def dim_map(self) -> dict:
        return dict(enumerate(self.dims))


def mixed_from_cyclic(m: ParacyclicModule, order: str | None = None) -> MixedComplex:
    b = GradedMap(m.field, -1, {n: hochschild_b(m, n) for n in range(m.N + 1)})
    B = GradedMap(m.field, 1, {n: connes_B(m, n, order) for n in range(m.N)})
    c = MixedComplex(m.field, m.N, m.dims, b, B, frozenset(), m.name)
    B = pad_below(c.B, c.dim_map)
    anti = (c.b @ B) + (B @ c.b)
    flags = frozenset() if anti.restrict(range(m.N)).is_zero() else frozenset({"pre-mixed"})
    return MixedComplex(m.field, m.N, m.dims, b, B, flags, m.name)


def zero_mixed(field, N, name="zero") -> MixedComplex:
    dims = {n: 0 for n in range(N + 1)}
    b = GradedMap(field, -1, {n: Matrix.zeros(field, 0, 0) for n in range(N + 1)})
    B = GradedMap(field, 1, {n: Matrix.zeros(field, 0, 0) for n in range(N)})
    return MixedComplex(field, N, (0,) * (N + 1), b, B, frozenset(), name)


def _top(c: MixedComplex) -> dict:
    return c.dim_map


def check_mixed(c: MixedComplex, prefix="") -> Report:
    """b^2 = 0, B^2 = 0 and bB + Bb = 0 wherever the composites exist."""
    rep = Report(f"mixed complex identities: {c.name or 'complex'}")
    rep.add(vanishes(prefix + "b^2", "b b = 0", c.b @ c.b))
    rep.add(vanishes(prefix + "B^2", "B B = 0", c.B @ c.B))
    B = pad_below(c.B, c.dim_map)
    rep.add(vanishes(prefix + "bB+Bb", "b B + B b = 0", ((c.b @ B) + (B @ c.b)).restrict(range(c.N + 1))))
    return rep


def operator_T(c: MixedComplex, n: int | None = None):
    """T = 1 - bB - Bb; the full family, or one degree when ``n`` is given."""
    one = GradedMap.identity(c.field, c.dim_map)
    bB = c.b @ c.B
    Bb = c.B @ c.b
    blocks = {}
    for k in range(c.N):
        mat = one[k] - bB[k]
        if k >= 1:
            mat = mat - Bb[k]
        blocks[k] = mat
    T = GradedMap(c.field, 0, blocks)
    if n is None:
        return T
    if n not in blocks:
        raise TruncationError(f"T needs degree {n} + 1 <= {c.N}")
    return blocks[n]


def check_operator_calculus(m: ParacyclicModule, order: str | None = None) -> Report:
    """b^2 = 0 and T = 1 - bB - Bb = tau^{n+1} on chains; B^2 = 0 after normalizing.

    For a cyclic module the middle identity is bB + Bb = 0, so this is the
    mixed-complex test; for a paracyclic one it measures the failure.
    """
    rep = Report(f"operator calculus: {m.name or 'module'}")
    c = mixed_from_cyclic(m, order)
    rep.add(vanishes("b^2", "b b = 0", c.b @ c.b))
    T = operator_T(c)
    tau_pow = GradedMap(m.field, 0, {n: m.tau[n].power(n + 1) for n in T.blocks})
    rep.add(compare("T=tau^{n+1}", "1 - bB - Bb = tau^{n+1}", T, tau_pow))
    nc = normalize(m, order).complex
    rep.add(vanishes("normalized.B^2", "B B = 0 on normalized chains", nc.B @ nc.B))
    return rep


# ---------------------------------------------------------------------------
# normalization


@dataclass(frozen=True)
class Normalized:
    """A complex on quotients together with the projections and sections used."""

    complex: MixedComplex
    proj: GradedMap
    sec: GradedMap
    degenerate: Mapping[int, Subspace]
    report: Report


def degenerate_subspaces(field, dims: Mapping[int, int], images: Mapping[int, Sequence[Matrix]]) -> dict:
    """Span of the given maps' images in each degree (e.g. all degeneracies)."""
    out = {}
    for n, d in dims.items():
        mats = images.get(n, [])
        if not mats:
            out[n] = Subspace.zero(field, d)
        else:
            out[n] = column_space(Matrix.hstack(field, d, mats))
    return out


def descend(name: str, op: GradedMap, proj: GradedMap, sec: GradedMap, degenerate: Mapping[int, Subspace], report: Report | None = None) -> GradedMap:
    """Induced operator on quotients; fails loudly if op does not preserve the degenerate part."""
    blocks = {}
    for n, mat in op.blocks.items():
        k = n + op.shift
        if k not in proj.blocks or n not in sec.blocks:
            continue
        D = degenerate[n].matrix()
        leak = (proj[k] @ mat @ D).first_nonzero()
        if leak is not None:
            if report is not None:
                report.add(Check(f"descends.{name}", f"{name} preserves degenerate chains", [n], FAIL,
                                 {"degree": n, "row": leak[0], "col": leak[1]}))
            raise NormalizationError(f"{name} does not preserve degenerate chains in degree {n}")
        blocks[n] = proj[k] @ mat @ sec[n]
    if report is not None:
        report.add(Check(f"descends.{name}", f"{name} preserves degenerate chains", sorted(blocks)))
    return GradedMap(op.field, op.shift, blocks)


def normalize_mixed(c: MixedComplex, degenerate: Mapping[int, Subspace], name="") -> Normalized:
    rep = Report(f"normalization: {name or c.name}")
    projs, secs = {}, {}
    for n, d in c.dim_map.items():
        projs[n], secs[n] = quotient_structure(d, degenerate[n])
    proj = GradedMap(c.field, 0, projs)
    sec = GradedMap(c.field, 0, secs)
    # degree -1 is the zero space
    proj_ext = GradedMap(c.field, 0, {**projs, -1: Matrix.zeros(c.field, 0, 0)})
    b = descend("b", c.b, proj_ext, sec, degenerate, rep)
    B = descend("B", c.B, proj, sec, degenerate, rep)
    dims = tuple(projs[n].nrows for n in range(c.N + 1))
    nc = MixedComplex(c.field, c.N, dims, b, B, c.flags, (name or c.name) + " (normalized)")
    # proj . op = op_bar . proj
    rep.add(compare("functorial.b", "p b = b_bar p", proj_ext @ c.b, b @ proj))
    rep.add(compare("functorial.B", "p B = B_bar p", proj @ c.B, B @ proj))
    rep.add(compare("section", "p s = id", proj @ sec, GradedMap.identity(c.field, dict(enumerate(dims)))))
    return Normalized(nc, proj, sec, degenerate, rep)


def normalize(m: ParacyclicModule, order: str | None = None) -> Normalized:
    """Quotient by the degenerate subcomplex; b and B descend, faces and tau do not."""
    c = mixed_from_cyclic(m, order)
    images = {n: list(m.degeneracy[n - 1]) for n in range(1, m.N + 1)}
    degen = degenerate_subspaces(m.field, c.dim_map, images)
    return normalize_mixed(c, degen, m.name)


# ---------------------------------------------------------------------------
# homology


def _b_matrix(c: MixedComplex, n: int) -> Matrix:
    if n == 0:
        return Matrix.zeros(c.field, 0, c.dims[0])
    return c.b[n]


def _check_window(c: MixedComplex, n: int, unsafe: bool):
    if n < 0 or n > c.N:
        raise TruncationError(f"degree {n} outside 0..{c.N}")
    if n > c.N - 1 and not unsafe:
        raise TruncationError(f"degree {n} is outside the safe window 0..{c.N - 1}")


def hochschild_homology(c: MixedComplex, n: int, unsafe: bool = False) -> int:
    """dim H_n(C, b)."""
    _check_window(c, n, unsafe)
    bn = _b_matrix(c, n)
    nxt = rank(c.b[n + 1]) if n + 1 <= c.N else 0
    return c.dims[n] - rank(bn) - nxt


def bicomplex_columns(c: MixedComplex, n: int) -> list[int]:
    """Degrees of the summands C_{n}, C_{n-2}, ... of Tot(BC)_n (column order)."""
    return [n - 2 * k for k in range(n // 2 + 1)]


def bicomplex_dim(c: MixedComplex, n: int) -> int:
    if n < 0:
        return 0
    return sum(c.dims[d] for d in bicomplex_columns(c, n))


def bicomplex_differential(c: MixedComplex, n: int) -> Matrix:
    """D = b + B : Tot(BC)_n -> Tot(BC)_{n-1}, columns in ascending shift order."""
    src = bicomplex_columns(c, n)
    tgt = bicomplex_columns(c, n - 1) if n >= 1 else []
    row_dims = [c.dims[d] for d in tgt]
    col_dims = [c.dims[d] for d in src]
    blocks = {}
    for k, d in enumerate(src):
        if d >= 1 and k < len(tgt):           # b : C_d -> C_{d-1}, same column
            blocks[(k, k)] = c.b[d]
        if k >= 1:                             # B : C_d -> C_{d+1}, previous column
            blocks[(k - 1, k)] = c.B[d]
    return Matrix.block(c.field, row_dims, col_dims, blocks)


def cyclic_homology(c: MixedComplex, n: int, unsafe: bool = False) -> int:
    """dim H_n(Tot BC); trusted for n <= N - 1."""
    _check_window(c, n, unsafe)
    if "pre-mixed" in c.flags:
        raise NotMixedError(f"{c.name or 'complex'}: bB + Bb != 0, cyclic homology is undefined")
    Dn = bicomplex_differential(c, n)
    nxt = rank(bicomplex_differential(c, n + 1)) if n + 1 <= c.N else 0
    return bicomplex_dim(c, n) - rank(Dn) - nxt


@dataclass
class HomologyRow:
    degree: int
    HH: int
    HC: int
    reliable: bool


def homology_table(c: MixedComplex, max_degree: int | None = None, unsafe: bool = False) -> list[HomologyRow]:
    top = c.N - 1 if max_degree is None else max_degree
    rows = []
    for n in range(top + 1):
        rows.append(HomologyRow(n, hochschild_homology(c, n, unsafe), cyclic_homology(c, n, unsafe), n <= c.N - 1))
    return rows


def connes_lambda_oracle(m: ParacyclicModule, n: int) -> int:
    """dim H_n of C_n / im(1 - t) with the differential induced by b (char 0 only)."""
    if m.field.kind != "Q":
        raise OracleError("the Connes complex oracle requires characteristic zero")
    if not 0 <= n <= m.N - 1:
        raise TruncationError(f"oracle degree {n} outside 0..{m.N - 1}")
    quots = {}
    for k in range(max(0, n - 1), n + 2):
        one_minus_t = Matrix.identity(m.field, m.dims[k]) - cyclic_operator_t(m, k)
        quots[k] = quotient_structure(m.dims[k], column_space(one_minus_t)) + (one_minus_t,)

    def bbar(k):
        if k == 0:
            return Matrix.zeros(m.field, 0, quots[0][0].nrows)
        proj_lo = quots[k - 1][0]
        proj_hi, sec_hi, omt = quots[k]
        b = hochschild_b(m, k)
        leak = (proj_lo @ b @ omt).first_nonzero()
        if leak is not None:
            raise NormalizationError(f"b does not preserve im(1 - t) in degree {k}")
        return proj_lo @ b @ sec_hi

    dim_n = quots[n][0].nrows
    return dim_n - rank(bbar(n)) - rank(bbar(n + 1))


# ---------------------------------------------------------------------------
# induced maps on homology


def induced_rank(phi: Matrix, d_src: Matrix, d_tgt_next: Matrix) -> int:
    """Rank of H(phi): H_n(src) -> H_n(tgt).

    ``d_src`` is the source differential out of degree n (kernel = cycles) and
    ``d_tgt_next`` the target differential into degree n (image = boundaries).
    """
    Z = kernel_basis(d_src).matrix()
    img = phi @ Z
    Bd = column_space(d_tgt_next).matrix()
    both = Matrix.hstack(phi.field, phi.nrows, [Bd, img])
    return rank(both) - Bd.ncols


# ---------------------------------------------------------------------------
# S-morphisms


@dataclass(frozen=True)
class SMorphism:
    """Components ``f_k`` of degree +2k (k = 0, 1, ...), i.e. f^0, f^{-1}, ...

    Components beyond the stored list are zero; a stored component with a
    missing block is clipped at that degree.
    """

    source: MixedComplex
    target: MixedComplex
    components: tuple

    def component(self, k: int) -> GradedMap:
        if k < len(self.components):
            return self.components[k]
        src = self.source.dim_map
        tgt = self.target.dim_map
        return GradedMap(self.source.field, 2 * k,
                         {n: Matrix.zeros(self.source.field, tgt[n + 2 * k], d) for n, d in src.items() if n + 2 * k in tgt})


def total_map(f: SMorphism, n: int) -> Matrix | None:
    """Matrix of f on Tot(BC)_n -> Tot(BC')_n, or None when a needed block is clipped."""
    src_cols = bicomplex_columns(f.source, n)
    tgt_cols = bicomplex_columns(f.target, n)
    blocks = {}
    for k, ds in enumerate(src_cols):
        for j, dt in enumerate(tgt_cols):
            if j > k:
                continue
            comp = f.component(k - j)
            if ds not in comp.blocks:
                return None
            blocks[(j, k)] = comp[ds]
    return Matrix.block(f.source.field, [f.target.dims[d] for d in tgt_cols], [f.source.dims[d] for d in src_cols], blocks)


def _S_matrix(c: MixedComplex, n: int) -> Matrix:
    """Quotient by the first column: Tot(BC)_n -> Tot(BC)_{n-2}."""
    src = bicomplex_columns(c, n)
    tgt = bicomplex_columns(c, n - 2) if n >= 2 else []
    blocks = {(k - 1, k): Matrix.identity(c.field, c.dims[src[k]]) for k in range(1, len(src))}
    return Matrix.block(c.field, [c.dims[d] for d in tgt], [c.dims[d] for d in src], blocks)


def check_smorphism(f: SMorphism, prefix="") -> Report:
    """[b, f_0] = 0, [B, f_k] + [b, f_{k+1}] = 0, and the assembled map commutes with D and S."""
    rep = Report("S-morphism")
    src, tgt = f.source, f.target
    tdims = tgt.dim_map
    f0 = pad_below(f.component(0), tdims)
    rep.add(compare(prefix + "bracket.b.f0", "b' f^0 = f^0 b", tgt.b @ f0, f0 @ src.b))
    checks = []
    for k in range(max(len(f.components), 1)):
        fk, fk1 = pad_below(f.component(k), tdims), pad_below(f.component(k + 1), tdims)
        lhs = ((tgt.B @ fk) - (fk @ src.B) + (tgt.b @ fk1) - (fk1 @ src.b)).restrict(range(src.N + 1))
        c = vanishes(f"k={k}", "[B, f_k] + [b, f_{k+1}] = 0", lhs)
        if c.status == FAIL:
            c.witness = {"component": k, **c.witness}
        checks.append(c)
    rep.add(merge_checks(prefix + "bracket.B", "[B, f^i] + [b, f^{i-1}] = 0 for all stored components", checks))
    # assembled total map
    window, fail = [], None
    for n in range(src.N + 1):
        F = total_map(f, n)
        Fm = total_map(f, n - 1) if n >= 1 else None
        if F is None or (n >= 1 and Fm is None):
            continue
        if n >= 1:
            diff = _eq(bicomplex_differential(tgt, n) @ F, Fm @ bicomplex_differential(src, n))
            if diff is not None:
                fail = {"degree": n, "square": "D", **diff}
                break
        if n >= 2:
            F2 = total_map(f, n - 2)
            if F2 is not None:
                diff = _eq(_S_matrix(tgt, n) @ F, F2 @ _S_matrix(src, n))
                if diff is not None:
                    fail = {"degree": n, "square": "S", **diff}
                    break
        window.append(n)
    ref = "f commutes with b + B and with S on Tot(BC)"
    rep.add(Check(prefix + "total", ref, window, FAIL if fail else (PASS if window else SKIP), fail))
    return rep
