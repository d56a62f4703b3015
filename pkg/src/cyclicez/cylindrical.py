"""Cylindrical modules: two commuting paracyclic structures on a bigraded module.

Bidegrees run over the square ``0 <= p, q <= N``.  Horizontal operators
(``d``, ``s``, ``t``) change ``p``; vertical ones (``delta``, ``sigma``,
``tau``) change ``q``.  All operator families are dictionaries keyed by the
source bidegree.
"""
from __future__ import annotations

from dataclasses import dataclass
from itertools import product

from . import conventions
from .exactfield import FieldSpec, Matrix
from .graded import GradedMap, compare
from .report import FAIL, PASS, SKIP, Check, Report
from .simplicial import (
    MixedComplex,
    Normalized,
    ParacyclicModule,
    check_mixed,
    cyclic_condition_check,
    cyclic_relation_checks,
    degenerate_subspaces,
    normalize_mixed,
    simplicial_checks,
)


@dataclass(frozen=True)
class CylindricalModule:
    field: FieldSpec
    N: int
    dims: dict      # (p, q) -> dimension
    hface: dict     # (p, q) -> tuple of p+1 maps X_{p,q} -> X_{p-1,q} (empty for p = 0)
    hdeg: dict      # (p, q) -> tuple of p+1 maps X_{p,q} -> X_{p+1,q}, p < N
    ht: dict        # (p, q) -> X_{p,q} -> X_{p,q}
    vface: dict
    vdeg: dict
    vtau: dict
    name: str = ""

    def bidegrees(self):
        return [(p, q) for p in range(self.N + 1) for q in range(self.N + 1)]

    def row(self, q: int) -> ParacyclicModule:
        """The horizontal paracyclic module X_{*, q}."""
        N = self.N
        return ParacyclicModule(
            self.field, N, tuple(self.dims[(p, q)] for p in range(N + 1)),
            tuple(self.hface[(p, q)] for p in range(N + 1)),
            tuple(self.hdeg[(p, q)] for p in range(N)),
            tuple(self.ht[(p, q)] for p in range(N + 1)),
            f"{self.name} row q={q}",
        )

    def column(self, p: int) -> ParacyclicModule:
        """The vertical paracyclic module X_{p, *}."""
        N = self.N
        return ParacyclicModule(
            self.field, N, tuple(self.dims[(p, q)] for q in range(N + 1)),
            tuple(self.vface[(p, q)] for q in range(N + 1)),
            tuple(self.vdeg[(p, q)] for q in range(N)),
            tuple(self.vtau[(p, q)] for q in range(N + 1)),
            f"{self.name} column p={p}",
        )

    def replace(self, **kw) -> "CylindricalModule":
        data = {k: getattr(self, k) for k in
                ("field", "N", "dims", "hface", "hdeg", "ht", "vface", "vdeg", "vtau", "name")}
        data.update(kw)
        return CylindricalModule(**data)


def _merge_by_name(reports, ref_prefix="") -> Report:
    """Collapse per-row reports so each identity family appears once."""
    out = Report("")
    seen: dict[str, Check] = {}
    order = []
    for rep in reports:
        for c in rep.checks:
            if c.name not in seen:
                seen[c.name] = Check(c.name, c.ref, [], SKIP)
                order.append(c.name)
            agg = seen[c.name]
            if agg.status == FAIL:
                continue
            if c.status == FAIL:
                agg.status, agg.witness = FAIL, c.witness
            elif c.status == PASS:
                agg.status = PASS
            agg.window = sorted(set(agg.window) | set(c.window or []))
    for name in order:
        out.add(seen[name])
    return out


def _operators(x: CylindricalModule, p, q):
    """(label, matrix, target bidegree) for every operator out of X_{p,q}."""
    N = x.N
    h, v = [], []
    for i, m in enumerate(x.hface[(p, q)]):
        h.append((f"d{i}", m, (p - 1, q)))
    if p < N:
        for i, m in enumerate(x.hdeg[(p, q)]):
            h.append((f"s{i}", m, (p + 1, q)))
    h.append(("t", x.ht[(p, q)], (p, q)))
    for i, m in enumerate(x.vface[(p, q)]):
        v.append((f"delta{i}", m, (p, q - 1)))
    if q < N:
        for i, m in enumerate(x.vdeg[(p, q)]):
            v.append((f"sigma{i}", m, (p, q + 1)))
    v.append(("tau", x.vtau[(p, q)], (p, q)))
    return h, v


def _lookup(x: CylindricalModule, label, bideg):
    p, q = bideg
    if label == "t":
        return x.ht[bideg]
    if label == "tau":
        return x.vtau[bideg]
    if label.startswith("delta"):
        i = int(label[5:])
        return x.vface[bideg][i] if i < len(x.vface[bideg]) else None
    if label.startswith("sigma"):
        i = int(label[5:])
        return x.vdeg[bideg][i] if q < x.N and i < len(x.vdeg[bideg]) else None
    if label.startswith("d"):
        i = int(label[1:])
        return x.hface[bideg][i] if i < len(x.hface[bideg]) else None
    if label.startswith("s"):
        i = int(label[1:])
        return x.hdeg[bideg][i] if p < x.N and i < len(x.hdeg[bideg]) else None
    raise KeyError(label)


def check_cylindrical(x: CylindricalModule) -> Report:
    """Row and column paracyclic relations, commutation, and tau^{q+1} t^{p+1} = id."""
    N = x.N
    rep = Report(f"cylindrical identities: {x.name or 'module'}")
    rows = []
    for q in range(N + 1):
        r = Report("")
        simplicial_checks([x.hface[(p, q)] for p in range(N + 1)], [x.hdeg[(p, q)] for p in range(N)], N, r,
                          "horizontal.", {"q": q})
        cyclic_relation_checks([x.hface[(p, q)] for p in range(N + 1)], [x.hdeg[(p, q)] for p in range(N)],
                               [x.ht[(p, q)] for p in range(N + 1)], N, r, "horizontal.", {"q": q})
        rows.append(r)
    rep.extend(_merge_by_name(rows))
    cols = []
    for p in range(N + 1):
        r = Report("")
        simplicial_checks([x.vface[(p, q)] for q in range(N + 1)], [x.vdeg[(p, q)] for q in range(N)], N, r,
                          "vertical.", {"p": p})
        cyclic_relation_checks([x.vface[(p, q)] for q in range(N + 1)], [x.vdeg[(p, q)] for q in range(N)],
                               [x.vtau[(p, q)] for q in range(N + 1)], N, r, "vertical.", {"p": p})
        cols.append(r)
    rep.extend(_merge_by_name(cols))

    # every vertical operator commutes with every horizontal operator
    window, fail = [], None
    for p, q in x.bidegrees():
        hs, vs = _operators(x, p, q)
        for (hl, hm, ht_) in hs:
            for (vl, vm, vt_) in vs:
                # V after H: H lands in ht_, then V from there; H after V: V lands in vt_
                v_after = _lookup(x, vl, ht_)
                h_after = _lookup(x, hl, vt_)
                if v_after is None or h_after is None:
                    continue
                diff = (v_after @ hm).first_difference(h_after @ vm)
                if diff is not None:
                    fail = {"p": p, "q": q, "horizontal": hl, "vertical": vl, "row": diff[0], "col": diff[1]}
                    break
            if fail:
                break
        if fail:
            break
        window.append((p, q))
    rep.add(Check("commute", "every vertical operator commutes with every horizontal operator",
                  window, FAIL if fail else PASS, fail))

    window, fail = [], None
    for p, q in x.bidegrees():
        lhs = x.vtau[(p, q)].power(q + 1) @ x.ht[(p, q)].power(p + 1)
        diff = lhs.first_difference(Matrix.identity(x.field, x.dims[(p, q)]))
        if diff is not None:
            fail = {"p": p, "q": q, "row": diff[0], "col": diff[1]}
            break
        window.append((p, q))
    rep.add(Check("cylindrical", "tau^{q+1} t^{p+1} = id on X_{p,q}", window, FAIL if fail else PASS, fail))
    return rep


# ---------------------------------------------------------------------------
# the four b/B pieces on each bidegree


def _alt(field, maps, nrows, ncols):
    out = Matrix.zeros(field, nrows, ncols)
    for i, m in enumerate(maps):
        out = out + m if i % 2 == 0 else out - m
    return out


def horizontal_b(x, p, q):
    if p == 0:
        return None
    return _alt(x.field, x.hface[(p, q)], x.dims[(p - 1, q)], x.dims[(p, q)])


def vertical_b(x, p, q):
    if q == 0:
        return None
    return _alt(x.field, x.vface[(p, q)], x.dims[(p, q - 1)], x.dims[(p, q)])


def _connes(field, t_lo, t_hi, s, dim_lo, dim_hi, n, order):
    """Connes' B from degree n to n+1 given tau in both degrees and sigma_n."""
    tl = t_lo if n % 2 == 0 else -t_lo
    th = t_hi if (n + 1) % 2 == 0 else -t_hi
    extra = t_hi @ s

    def norm(t, d, k):
        acc = Matrix.identity(field, d)
        pw = acc
        for _ in range(k):
            pw = t @ pw
            acc = acc + pw
        return acc

    if order == "norm_first":
        return (Matrix.identity(field, dim_hi) - th) @ extra @ norm(tl, dim_lo, n)
    return norm(th, dim_hi, n + 1) @ extra @ (Matrix.identity(field, dim_lo) - tl)


def horizontal_B(x, p, q, order=None):
    if p >= x.N:
        return None
    order = order or conventions.B_ORDER
    return _connes(x.field, x.ht[(p, q)], x.ht[(p + 1, q)], x.hdeg[(p, q)][p],
                   x.dims[(p, q)], x.dims[(p + 1, q)], p, order)


def vertical_B(x, p, q, order=None):
    if q >= x.N:
        return None
    order = order or conventions.B_ORDER
    return _connes(x.field, x.vtau[(p, q)], x.vtau[(p, q + 1)], x.vdeg[(p, q)][q],
                   x.dims[(p, q)], x.dims[(p, q + 1)], q, order)


def vertical_T(x, p, q, order=None):
    """T^v = 1 - b^v B^v - B^v b^v on X_{p,q} (needs q + 1 <= N)."""
    if q >= x.N:
        return None
    one = Matrix.identity(x.field, x.dims[(p, q)])
    Bv = vertical_B(x, p, q, order)
    out = one - vertical_b(x, p, q + 1) @ Bv
    if q >= 1:
        out = out - vertical_B(x, p, q - 1, order) @ vertical_b(x, p, q)
    return out


def horizontal_T(x, p, q, order=None):
    if p >= x.N:
        return None
    one = Matrix.identity(x.field, x.dims[(p, q)])
    out = one - horizontal_b(x, p + 1, q) @ horizontal_B(x, p, q, order)
    if p >= 1:
        out = out - horizontal_B(x, p - 1, q, order) @ horizontal_b(x, p, q)
    return out


# ---------------------------------------------------------------------------
# total complex


def tot_layout(x: CylindricalModule, n: int):
    """Bidegrees of Tot_n in ascending p."""
    return [(p, n - p) for p in range(n + 1) if p <= x.N and n - p <= x.N]


def tot_dims(x: CylindricalModule) -> dict:
    return {n: sum(x.dims[bd] for bd in tot_layout(x, n)) for n in range(x.N + 1)}


def assemble(x: CylindricalModule, n_src: int, n_tgt: int, pieces: dict) -> Matrix:
    """Block matrix Tot_{n_src} -> Tot_{n_tgt} from ``{(tgt_bideg, src_bideg): Matrix}``."""
    src = tot_layout(x, n_src)
    tgt = tot_layout(x, n_tgt) if n_tgt >= 0 else []
    sidx = {bd: k for k, bd in enumerate(src)}
    tidx = {bd: k for k, bd in enumerate(tgt)}
    blocks = {(tidx[t], sidx[s]): m for (t, s), m in pieces.items()}
    return Matrix.block(x.field, [x.dims[bd] for bd in tgt], [x.dims[bd] for bd in src], blocks)


def total_b_blocks(x, n, twist=None):
    twist = twist or conventions.TOT_B_TWIST
    pieces = {}
    for p, q in tot_layout(x, n):
        eh, ev = conventions.twist_signs(twist, p, q)
        if p >= 1:
            pieces[((p - 1, q), (p, q))] = horizontal_b(x, p, q).scale(eh)
        if q >= 1:
            pieces[((p, q - 1), (p, q))] = vertical_b(x, p, q).scale(ev)
    return pieces


def total_B_blocks(x, n, twist=None, order=None):
    twist = twist or conventions.TOT_BIG_B_TWIST
    pieces = {}
    for p, q in tot_layout(x, n):
        eh, ev = conventions.twist_signs(twist, p, q)
        pieces[((p + 1, q), (p, q))] = (vertical_T(x, p + 1, q, order) @ horizontal_B(x, p, q, order)).scale(eh)
        pieces[((p, q + 1), (p, q))] = vertical_B(x, p, q, order).scale(ev)
    return pieces


def total_mixed(x: CylindricalModule, b_twist=None, B_twist=None, order=None, verify=False) -> MixedComplex:
    """(Tot X, b, B) with b = b^h + b^v and B = T^v B^h + B^v under the frozen twists.

    When the rows or columns are only paracyclic, B^2 vanishes on normalized
    chains but not before, so ``verify`` (unnormalized) is off by default;
    :func:`normalized_total` checks the normalized complex instead.
    """
    N = x.N
    b = GradedMap(x.field, -1, {n: assemble(x, n, n - 1, total_b_blocks(x, n, b_twist)) for n in range(N + 1)})
    B = GradedMap(x.field, 1, {n: assemble(x, n, n + 1, total_B_blocks(x, n, B_twist, order)) for n in range(N)})
    td = tot_dims(x)
    c = MixedComplex(x.field, N, tuple(td[n] for n in range(N + 1)), b, B, frozenset(), f"Tot({x.name})")
    if verify:
        rep = check_mixed(c)
        if not rep.passed:
            bad = rep.failures()[0]
            raise ArithmeticError(f"Tot({x.name}) is not a mixed complex: {bad.name} at {bad.witness}")
    return c


def tot_degenerate(x: CylindricalModule) -> dict:
    """Images of all horizontal and vertical degeneracies, per total degree."""
    images = {}
    for n in range(x.N + 1):
        mats = []
        for p, q in tot_layout(x, n):
            for bd_src, maps in (((p - 1, q), x.hdeg.get((p - 1, q), ()) if p >= 1 else ()),
                                 ((p, q - 1), x.vdeg.get((p, q - 1), ()) if q >= 1 else ())):
                for m in maps:
                    # embed the image into Tot_n
                    mats.append(assemble_column(x, n, (p, q), m))
        images[n] = mats
    return degenerate_subspaces(x.field, tot_dims(x), images)


def assemble_column(x, n, bideg, m: Matrix) -> Matrix:
    layout = tot_layout(x, n)
    off = 0
    for bd in layout:
        if bd == bideg:
            break
        off += x.dims[bd]
    total = sum(x.dims[bd] for bd in layout)
    cols = [{off + r: v for r, v in c.items()} for c in m.cols]
    return Matrix(x.field, total, m.ncols, cols)


def normalized_total(x: CylindricalModule, verify=True, **kw) -> Normalized:
    nz = normalize_mixed(total_mixed(x, **kw), tot_degenerate(x), f"Tot({x.name})")
    if verify:
        rep = check_mixed(nz.complex)
        if not rep.passed:
            bad = rep.failures()[0]
            raise ArithmeticError(f"normalized Tot({x.name}) is not a mixed complex: {bad.name} at {bad.witness}")
    return nz


# ---------------------------------------------------------------------------
# diagonal


def diagonal_cyclic(x: CylindricalModule) -> ParacyclicModule:
    """d(X)_n = X_{n,n} with faces d_i delta_i, degeneracies s_i sigma_i and cyclic map t tau."""
    N = x.N
    faces = [()]
    for n in range(1, N + 1):
        faces.append(tuple(x.hface[(n, n - 1)][i] @ x.vface[(n, n)][i] for i in range(n + 1)))
    degs = [tuple(x.hdeg[(n, n + 1)][i] @ x.vdeg[(n, n)][i] for i in range(n + 1)) for n in range(N)]
    tau = tuple(x.ht[(n, n)] @ x.vtau[(n, n)] for n in range(N + 1))
    return ParacyclicModule(x.field, N, tuple(x.dims[(n, n)] for n in range(N + 1)), tuple(faces),
                            tuple(degs), tau, f"d({x.name})")


def check_diagonal(x: CylindricalModule) -> Report:
    from .simplicial import check_paracyclic

    return check_paracyclic(diagonal_cyclic(x), cyclic=True)


def zero_cylindrical(field, N, name="zero") -> CylindricalModule:
    z = Matrix.zeros(field, 0, 0)
    dims, hf, hd, ht, vf, vd, vt = {}, {}, {}, {}, {}, {}, {}
    for p, q in product(range(N + 1), repeat=2):
        dims[(p, q)] = 0
        hf[(p, q)] = tuple(z for _ in range(p + 1)) if p else ()
        hd[(p, q)] = tuple(z for _ in range(p + 1)) if p < N else ()
        ht[(p, q)] = z
        vf[(p, q)] = tuple(z for _ in range(q + 1)) if q else ()
        vd[(p, q)] = tuple(z for _ in range(q + 1)) if q < N else ()
        vt[(p, q)] = z
    return CylindricalModule(field, N, dims, hf, hd, ht, vf, vd, vt, name)
