"""Shuffle and Alexander-Whitney maps, the Eilenberg-Zilber retract and its perturbation.

Everything downstream of the two maps lives on normalized chains: the bigger
complex is the normalized diagonal (b_d, B_d) and the smaller one the
normalized total complex (b, B_t).  Homotopies are produced by exact linear
algebra instead of a closed formula.
"""
from __future__ import annotations

from dataclasses import dataclass, field as dc_field
from itertools import combinations
from math import comb

from . import conventions
from .cylindrical import (
    CylindricalModule,
    diagonal_cyclic,
    tot_degenerate,
    tot_dims,
    tot_layout,
    total_mixed,
)
from .exactfield import (
    Infeasible,
    Matrix,
    column_space,
    extend_basis,
    kernel_and_pivots,
    kernel_basis,
    rank,
    solve_matrix,
)
from .graded import GradedMap, compare, gsum, pad_below, vanishes
from .report import FAIL, INFO, PASS, SKIP, Check, Report
from .simplicial import (
    MixedComplex,
    Normalized,
    SMorphism,
    bicomplex_differential,
    check_mixed,
    check_smorphism,
    cyclic_homology,
    hochschild_homology,
    induced_rank,
    mixed_from_cyclic,
    normalize,
    normalize_mixed,
    total_map,
)


class RetractError(ArithmeticError):
    """The complement of im(P) failed to be contractible in some degree."""

    def __init__(self, message, witness=None):
        super().__init__(message)
        self.witness = witness or {}


# ---------------------------------------------------------------------------
# shuffles


def _parity(perm) -> int:
    inv = sum(1 for i in range(len(perm)) for j in range(i + 1, len(perm)) if perm[i] > perm[j])
    return -1 if inv % 2 else 1


@dataclass(frozen=True)
class ShuffleTable:
    """All (p, q)-shuffles for p + q <= N.

    An entry is ``(perm, sign)`` where ``perm`` lists the zero-based values
    eta(1)-1, ..., eta(n)-1: the first ``p`` are the vertical degeneracy
    indices, the remaining ``q`` the horizontal ones.
    """

    N: int
    entries: dict

    @classmethod
    def build(cls, N: int) -> "ShuffleTable":
        entries = {}
        for n in range(N + 1):
            for p in range(n + 1):
                q = n - p
                rows = []
                for front in combinations(range(n), p):
                    back = tuple(i for i in range(n) if i not in front)
                    perm = front + back
                    rows.append((perm, _parity(perm)))
                entries[(p, q)] = tuple(rows)
        return cls(N, entries)

    def __getitem__(self, pq):
        return self.entries[pq]

    def count(self, p, q) -> int:
        return len(self.entries[(p, q)])

    def is_valid(self) -> bool:
        for (p, q), rows in self.entries.items():
            if len(rows) != comb(p + q, p):
                return False
            for perm, sign in rows:
                if list(perm[:p]) != sorted(perm[:p]) or list(perm[p:]) != sorted(perm[p:]):
                    return False
                if sign != _parity(perm):
                    return False
        return True


def nabla(x: CylindricalModule, p: int, q: int, table: ShuffleTable | None = None) -> Matrix:
    """The shuffle component X_{p,q} -> X_{n,n}."""
    table = table or ShuffleTable.build(p + q)
    n = p + q
    total = Matrix.zeros(x.field, x.dims[(n, n)], x.dims[(p, q)])
    for perm, sign in table[(p, q)]:
        m = Matrix.identity(x.field, x.dims[(p, q)])
        r, s = p, q
        for i in perm[:p]:
            m = x.vdeg[(r, s)][i] @ m
            s += 1
        for i in perm[p:]:
            m = x.hdeg[(r, s)][i] @ m
            r += 1
        total = total + m if sign > 0 else total - m
    return total


def shuffle_map(x: CylindricalModule) -> GradedMap:
    """Unnormalized Sh = sum of the nabla_{p,q}: Tot_n -> X_{n,n}."""
    table = ShuffleTable.build(x.N)
    blocks = {}
    for n in range(x.N + 1):
        layout = tot_layout(x, n)
        pieces = {(0, k): nabla(x, p, q, table) for k, (p, q) in enumerate(layout)}
        blocks[n] = Matrix.block(x.field, [x.dims[(n, n)]], [x.dims[bd] for bd in layout], pieces)
    return GradedMap(x.field, 0, blocks)


def aw_component(x: CylindricalModule, p: int, q: int, sign_rule=None, orientation=None) -> Matrix:
    """The Alexander-Whitney component X_{n,n} -> X_{p,q}."""
    sign_rule = sign_rule or conventions.AW_SIGN
    orientation = orientation or conventions.AW_ORIENTATION
    n = p + q
    m = Matrix.identity(x.field, x.dims[(n, n)])
    r, s = n, n
    if orientation == "front_horizontal":
        # first vertical faces p times, then last horizontal faces q times
        for _ in range(p):
            m = x.vface[(r, s)][0] @ m
            s -= 1
        for _ in range(q):
            m = x.hface[(r, s)][r] @ m
            r -= 1
    elif orientation == "front_vertical":
        # first horizontal faces q times, then last vertical faces p times
        for _ in range(q):
            m = x.hface[(r, s)][0] @ m
            r -= 1
        for _ in range(p):
            m = x.vface[(r, s)][s] @ m
            s -= 1
    else:
        raise ValueError(orientation)
    return m.scale(conventions.sign_value(sign_rule, p, q))


def aw_map(x: CylindricalModule, sign_rule=None, orientation=None) -> GradedMap:
    """Unnormalized A = sum of the A_{p,q}: X_{n,n} -> Tot_n."""
    blocks = {}
    for n in range(x.N + 1):
        layout = tot_layout(x, n)
        pieces = {(k, 0): aw_component(x, p, q, sign_rule, orientation) for k, (p, q) in enumerate(layout)}
        blocks[n] = Matrix.block(x.field, [x.dims[bd] for bd in layout], [x.dims[(n, n)]], pieces)
    return GradedMap(x.field, 0, blocks)


# ---------------------------------------------------------------------------
# normalized setting


def descend_between(name: str, op: GradedMap, src: Normalized, tgt: Normalized, report: Report | None = None):
    """Induced map on normalized chains; a FAIL check (or exception) if degenerates leak."""
    blocks, fail = {}, None
    for n, mat in sorted(op.blocks.items()):
        k = n + op.shift
        if n not in src.sec.blocks or k not in tgt.proj.blocks:
            continue
        leak = (tgt.proj[k] @ mat @ src.degenerate[n].matrix()).first_nonzero()
        if leak is not None and fail is None:
            fail = {"degree": n, "row": leak[0], "col": leak[1]}
        blocks[n] = tgt.proj[k] @ mat @ src.sec[n]
    if report is not None:
        report.add(Check(f"descends.{name}", f"{name} maps degenerate chains to degenerate chains",
                         sorted(blocks), FAIL if fail else PASS, fail))
    return GradedMap(op.field, op.shift, blocks)


@dataclass
class EZData:
    """A cylindrical module with both normalized complexes and the two maps between them."""

    x: CylindricalModule
    tot: Normalized
    diag: Normalized
    Sh: GradedMap
    A: GradedMap
    Sh_bar: GradedMap
    A_bar: GradedMap
    unnormalized_tot: MixedComplex
    unnormalized_diag: MixedComplex
    report: Report
    aw: tuple = ("pq", "front_vertical")

    @property
    def L(self) -> MixedComplex:
        return self.tot.complex

    @property
    def M(self) -> MixedComplex:
        return self.diag.complex


def normalized_complexes(x: CylindricalModule, order=None, b_twist=None, B_twist=None):
    """(unnormalized Tot, normalized Tot, normalized diagonal)."""
    tot = total_mixed(x, b_twist, B_twist, order, verify=False)
    ntot = normalize_mixed(tot, tot_degenerate(x), f"Tot({x.name})")
    ndiag = normalize(diagonal_cyclic(x), order)
    return tot, ntot, ndiag


def ez_setup(x: CylindricalModule, aw_sign=None, aw_orientation=None, _complexes=None) -> EZData:
    aw_sign = aw_sign or conventions.AW_SIGN
    aw_orientation = aw_orientation or conventions.AW_ORIENTATION
    tot, ntot, ndiag = _complexes or normalized_complexes(x)
    rep = Report(f"Eilenberg-Zilber maps: {x.name}")
    Sh = shuffle_map(x)
    A = aw_map(x, aw_sign, aw_orientation)
    Shb = descend_between("Sh", Sh, ntot, ndiag, rep)
    Ab = descend_between("A", A, ndiag, ntot, rep)
    diag_unnorm = mixed_from_cyclic(diagonal_cyclic(x))
    return EZData(x, ntot, ndiag, Sh, A, Shb, Ab, tot, diag_unnorm, rep, (aw_sign, aw_orientation))


def check_ez_maps(ez: EZData) -> Report:
    """Chain-map identities (both levels) and A_bar Sh_bar = 1."""
    rep = Report(f"shuffle and Alexander-Whitney maps: {ez.x.name}")
    rep.extend(ez.report)
    T, D = ez.unnormalized_tot, ez.unnormalized_diag
    rep.add(compare("Sh.chain", "b_d Sh = Sh b", D.b @ ez.Sh, pad_below(ez.Sh, D.dim_map) @ T.b))
    rep.add(compare("A.chain", "b A = A b_d", T.b @ ez.A, pad_below(ez.A, T.dim_map) @ D.b))
    L, M = ez.L, ez.M
    rep.add(compare("Sh_bar.chain", "b_d Sh = Sh b (normalized)", M.b @ ez.Sh_bar,
                    pad_below(ez.Sh_bar, M.dim_map) @ L.b))
    rep.add(compare("A_bar.chain", "b A = A b_d (normalized)", L.b @ ez.A_bar,
                    pad_below(ez.A_bar, L.dim_map) @ M.b))
    rep.add(compare("A_bar.Sh_bar", "A Sh = 1 (normalized)", ez.A_bar @ ez.Sh_bar,
                    GradedMap.identity(L.field, L.dim_map)))
    return rep


def first_term_equals_Bt(x: CylindricalModule, ez: EZData | None = None) -> Report:
    """A_bar B_d Sh_bar against B_t = T^v B^h + B^v on normalized chains."""
    ez = ez or ez_setup(x)
    rep = Report(f"first perturbation term: {x.name}")
    lhs = ez.A_bar @ ez.M.B @ ez.Sh_bar
    chk = compare("A_bar.B_d.Sh_bar", "A B_d Sh = T^v B^h + B^v", lhs, ez.L.B)
    chk.detail = {"max_degree": max(chk.window) if chk.window else None}
    rep.add(chk)
    return rep


# ---------------------------------------------------------------------------
# retracts


@dataclass
class Retract:
    """(g, f, h) with g: smaller -> bigger, f: bigger -> smaller, h of degree +1 on bigger."""

    bigger: MixedComplex
    smaller: MixedComplex
    g: GradedMap
    f: GradedMap
    h: GradedMap
    special: bool = False
    method: str = "splitting"
    notes: dict = dc_field(default_factory=dict)


def _pad(r: Retract):
    M, L = r.bigger.dim_map, r.smaller.dim_map
    return pad_below(r.g, M), pad_below(r.f, L), pad_below(r.h, M)


def check_retract(r: Retract, prefix="") -> Report:
    rep = Report("retract identities")
    M, L = r.bigger, r.smaller
    g, f, h = _pad(r)
    top = range(M.N + 1)
    rep.add(compare(prefix + "fg", "f g = 1", r.f @ r.g, GradedMap.identity(L.field, L.dim_map)))
    rep.add(compare(prefix + "g.chain", "b g = g b", M.b @ r.g, (g @ L.b).restrict(top)))
    rep.add(compare(prefix + "f.chain", "b f = f b", L.b @ r.f, (f @ M.b).restrict(top)))
    one = GradedMap.identity(M.field, M.dim_map)
    rhs = one + M.b @ h + h @ M.b
    rep.add(compare(prefix + "gf", "g f = 1 + b h + h b", r.g @ r.f, rhs.restrict(top)))
    if r.special:
        rep.add(vanishes(prefix + "hg", "h g = 0", r.h @ r.g))
        rep.add(vanishes(prefix + "fh", "f h = 0", r.f @ r.h))
        rep.add(vanishes(prefix + "hh", "h h = 0", r.h @ r.h))
    return rep


def _complement_split(M: MixedComplex, P: GradedMap, constraint: GradedMap | None = None):
    """Bases (Z_n, W_n) of C_n = im(1 - P_n) with Z = cycles and W mapped isomorphically onto Z_{n-1}.

    With ``constraint`` the W_n are taken inside its kernel wherever it is
    defined.  Returns (C, Z, W, first infeasible degree or None).
    """
    fld = M.field
    C, Z, W = {}, {}, {}
    infeasible = None
    for n in range(M.N + 1):
        C[n] = column_space(Matrix.identity(fld, M.dims[n]) - P[n]).matrix()
        if n == 0:
            Z[n], W[n] = C[n], C[n].select_columns([])
            continue
        ker, piv = kernel_and_pivots(M.b[n] @ C[n])
        Z[n] = C[n] @ ker.matrix()
        # pivot columns of b|C span a complement of the cycles
        W[n] = C[n].select_columns(piv)
        if constraint is None or n not in constraint.blocks or infeasible is not None:
            continue
        BC = constraint[n] @ C[n]
        if BC.is_zero():
            continue
        cand = C[n] @ kernel_basis(BC).matrix()
        picked = extend_basis(Z[n], cand)
        if Z[n].ncols + len(picked) == C[n].ncols:
            W[n] = cand.select_columns(picked)
        else:
            infeasible = n
    return C, Z, W, infeasible


def _homotopy_from_split(M: MixedComplex, P: GradedMap, Z, W) -> GradedMap:
    fld = M.field
    blocks = {}
    for n in range(M.N):
        # acyclicity of C in degree n: b maps W_{n+1} onto Z_n
        bW = M.b[n + 1] @ W[n + 1]
        if rank(bW) != Z[n].ncols or bW.ncols != Z[n].ncols:
            raise RetractError(f"complement of im(Sh A) is not contractible in degree {n}",
                               {"degree": n, "cycles": Z[n].ncols, "boundaries": rank(bW)})
        basis = Matrix.hstack(fld, M.dims[n], [bW, W[n]])
        coords = solve_matrix(basis, Matrix.identity(fld, M.dims[n]) - P[n])
        if isinstance(coords, Infeasible):
            raise RetractError(f"im(1 - P) not spanned by the split basis in degree {n}", {"degree": n})
        top = coords.select_rows(range(bW.ncols))
        blocks[n] = -(W[n + 1] @ top)
    return GradedMap(fld, 1, blocks)


def build_retract(ez: EZData, constrain_B: bool = False) -> Retract:
    """Special retract of the normalized diagonal onto the normalized total complex.

    h is built on im(1 - P), P = Sh_bar A_bar, from a splitting C_{n+1} = Z ⊕ W
    with h = -(b|W)^{-1} on cycles and 0 on W and on im(P).  With
    ``constrain_B`` the W are chosen inside ker B_d; if that is impossible the
    returned retract has ``notes["infeasible_degree"]`` set and uses the
    unconstrained choice from that degree on.
    """
    M, L = ez.M, ez.L
    P = ez.Sh_bar @ ez.A_bar
    C, Z, W, infeasible = _complement_split(M, P, M.B if constrain_B else None)
    h = _homotopy_from_split(M, P, Z, W)
    notes = {"complement_dims": [C[n].ncols for n in range(M.N + 1)]}
    if constrain_B:
        notes["infeasible_degree"] = infeasible
    return Retract(M, L, ez.Sh_bar, ez.A_bar, h, True, "constrained splitting" if constrain_B else "splitting", notes)


def check_projector(ez: EZData) -> Report:
    rep = Report("projector P = Sh A")
    P = ez.Sh_bar @ ez.A_bar
    rep.add(compare("P.idempotent", "P P = P", P @ P, P))
    M = ez.M
    rep.add(compare("P.chain", "b P = P b", M.b @ P, (pad_below(P, M.dim_map) @ M.b).restrict(range(M.N + 1))))
    return rep


def make_special(r: Retract) -> Retract:
    """Replace h by a special homotopy.

    h <- (1 - gf) h (1 - gf), then h <- -h b h (the sign matches
    gf = 1 + bh + hb).  Falls back to an exact splitting if the result is
    not special.
    """
    M = r.bigger
    one = GradedMap.identity(M.field, M.dim_map)
    D = one - r.g @ r.f
    h1 = D @ r.h @ D
    h2 = -(h1 @ M.b @ h1)
    cand = Retract(M, r.smaller, r.g, r.f, h2, True, "conjugation", dict(r.notes))
    if check_retract(cand).passed and h2.degrees == r.h.degrees:
        return cand
    P = r.g @ r.f
    _, Z, W, _ = _complement_split(M, P)
    h = _homotopy_from_split(M, P, Z, W)
    return Retract(M, r.smaller, r.g, r.f, h, True, "splitting", dict(r.notes))


# ---------------------------------------------------------------------------
# perturbation


@dataclass
class PerturbationResult:
    """Weight-graded pieces of the perturbed data.

    ``h_terms[m] = h (B h)^m``, ``g_terms[m] = (h B)^m g``,
    ``f_terms[m] = f (B h)^m`` and ``B_terms[m] = f (B h)^m B g``; each has
    shift 2m + (1, 0, 0, 1).  A term list stops once a term is clipped in
    every degree.
    """

    retract: Retract
    perturbation: GradedMap
    h_terms: list
    g_terms: list
    f_terms: list
    B_terms: list

    @property
    def B_inf(self) -> GradedMap:
        return self.B_terms[0]

    def higher_terms_vanish(self) -> bool:
        return all(t.is_zero() for ts in (self.h_terms, self.g_terms, self.f_terms, self.B_terms) for t in ts[1:])


def _series(first: GradedMap, step: GradedMap, right: bool = True) -> list:
    out = [first]
    while True:
        nxt = out[-1] @ step if right else step @ out[-1]
        if not nxt.blocks:
            return out
        out.append(nxt)


def perturb(r: Retract, B: GradedMap | None = None) -> PerturbationResult:
    M = r.bigger
    B = B if B is not None else M.B
    Bh = B @ r.h
    hB = r.h @ B
    h_terms = _series(r.h, Bh)
    g_terms = _series(r.g, hB, right=False)
    f_terms = _series(r.f, Bh)
    B_terms = [ft @ B @ r.g for ft in f_terms]
    B_terms = [t for t in B_terms if t.blocks]
    return PerturbationResult(r, B, h_terms, g_terms, f_terms, B_terms)


def _weighted(pieces, N):
    """Sum of the available pieces of one weight, or None if any is clipped everywhere."""
    if not pieces or any(not p.blocks for p in pieces):
        return None
    s = gsum(pieces)
    return s.restrict(range(N + 1)) if s.blocks else None


def check_perturbation(res: PerturbationResult, prefix="") -> Report:
    """(b + B_inf)^2 = 0, f_inf g_inf = 1, g_inf f_inf = 1 + (b+B)h_inf + h_inf(b+B) per weight."""
    rep = Report("perturbation identities")
    r = res.retract
    M, L = r.bigger, r.smaller
    N = M.N
    Md, Ld = M.dim_map, L.dim_map
    X = [L.b] + [pad_below(t, Ld) for t in res.B_terms]
    hs = [pad_below(t, Md) for t in res.h_terms]
    Bp = pad_below(res.perturbation, Md)
    one_L = GradedMap.identity(L.field, Ld)
    one_M = GradedMap.identity(M.field, Md)

    def fold(name, ref, weights):
        window, fail = [], None
        for w, op in weights:
            if op is None:
                continue
            c = vanishes("", "", op)
            if c.status == FAIL:
                fail = {"weight": w, **c.witness}
                break
            if c.window:
                window.append(w)
        rep.add(Check(prefix + name, ref, window, FAIL if fail else (PASS if window else SKIP), fail))

    W = len(X)
    sq = []
    for w in range(2 * W):
        pieces = [X[i] @ X[w - i] for i in range(max(0, w - W + 1), min(w, W - 1) + 1)]
        if w >= W:  # some summand lies beyond the computed series: not assertable
            break
        sq.append((w, _weighted(pieces, N)))
    fold("square", "(b + B_inf)^2 = 0", sq)

    fg = []
    for w in range(min(len(res.f_terms), len(res.g_terms))):
        pieces = [res.f_terms[i] @ res.g_terms[w - i] for i in range(w + 1)]
        if w == 0:
            pieces = pieces + [-one_L]
        fg.append((w, _weighted(pieces, N)))
    fold("f_inf.g_inf", "f_inf g_inf = 1", fg)

    gf = []
    for w in range(min(len(res.f_terms), len(res.g_terms), len(hs))):
        pieces = [res.g_terms[i] @ res.f_terms[w - i] for i in range(w + 1)]
        pieces += [-(M.b @ hs[w]), -(hs[w] @ M.b)]
        if w >= 1:
            pieces += [-(Bp @ hs[w - 1]), -(hs[w - 1] @ Bp)]
        if w == 0:
            pieces.append(-one_M)
        gf.append((w, _weighted(pieces, N)))
    fold("g_inf.f_inf", "g_inf f_inf = 1 + (b + B) h_inf + h_inf (b + B)", gf)
    return rep


# ---------------------------------------------------------------------------
# main theorem


def package_smorphism(ez: EZData, res: PerturbationResult) -> SMorphism:
    """g_inf viewed as an S-morphism (Tot, b, B_t) -> (d(X), b_d, B_d); f^0 = Sh_bar."""
    return SMorphism(ez.L, ez.M, tuple(res.g_terms))


def _homology_checks(ez: EZData, sm: SMorphism, rep: Report):
    L, M = ez.L, ez.M
    window = list(range(L.N))
    hh_l = [hochschild_homology(L, n) for n in window]
    hh_m = [hochschild_homology(M, n) for n in window]
    hc_l = [cyclic_homology(L, n) for n in window]
    hc_m = [cyclic_homology(M, n) for n in window]
    detail = {"HH_total": hh_l, "HH_diagonal": hh_m, "HC_total": hc_l, "HC_diagonal": hc_m}

    def cmp(name, ref, a, b):
        bad = next((n for n in window if a[n] != b[n]), None)
        rep.add(Check(name, ref, window, FAIL if bad is not None else PASS,
                      None if bad is None else {"degree": bad, "total": a[bad], "diagonal": b[bad]}))

    cmp("HH.equal", "dim HH_n(Tot) = dim HH_n(d)", hh_l, hh_m)
    cmp("HC.equal", "dim HC_n(Tot) = dim HC_n(d)", hc_l, hc_m)

    def _b(c, n):
        return c.b[n] if n >= 1 else Matrix.zeros(c.field, 0, c.dims[0])

    hh_iso, hc_iso = [], []
    for n in window:
        rk = induced_rank(ez.Sh_bar[n], _b(L, n), M.b[n + 1])
        hh_iso.append(rk == hh_l[n] == hh_m[n])
        F = total_map(sm, n)
        if F is None:
            hc_iso.append(None)
            continue
        rk = induced_rank(F, bicomplex_differential(L, n), bicomplex_differential(M, n + 1))
        hc_iso.append(rk == hc_l[n] == hc_m[n])
    cum_hh = [all(hh_iso[: n + 1]) for n in window]
    cum_hc = [all(bool(v) for v in hc_iso[: n + 1]) for n in window]
    bad = next((n for n in window if cum_hh[n] != cum_hc[n] or hc_iso[n] is None), None)
    rep.add(Check("five_lemma", "H(f) iso on HH in degrees <= n iff iso on HC in degrees <= n", window,
                  FAIL if bad is not None else PASS, None if bad is None else {"degree": bad},
                  {"HH_iso": hh_iso, "HC_iso": hc_iso}))
    rep.add(Check("quasi_isomorphism", "Sh induces isomorphisms on HH and HC", window,
                  PASS if all(cum_hh) and all(cum_hc) else FAIL,
                  None if all(cum_hh) and all(cum_hc) else {"degree": next(n for n in window if not (cum_hh[n] and cum_hc[n]))}))
    rep.add(Check("homology", "dimensions", window, INFO, None, detail))


def verify_main_theorem(x: CylindricalModule, ez: EZData | None = None) -> Report:
    """Constrained retract (stage 1), packaged S-morphism (stage 2), homology comparison (stage 3)."""
    ez = ez or ez_setup(x)
    rep = Report(f"main theorem: {x.name}")
    B_t = ez.L.B

    # stage 1
    rc = build_retract(ez, constrain_B=True)
    bad = rc.notes["infeasible_degree"]
    feasible = bad is None
    rep.add(Check("stage1.constrained_solve", "special h with B_d h = 0", list(range(ez.M.N)),
                  PASS if feasible else INFO, None if feasible else {"infeasible_degree": bad},
                  {"feasible": feasible}))
    if feasible:
        rep.extend(check_retract(rc), "stage1")
        res1 = perturb(rc)
        rep.extend(check_perturbation(res1), "stage1")
        rep.add(compare("stage1.B_inf=B_t", "B_inf = B_t", res1.B_inf, B_t))
        higher = []
        for label, ts in (("h", res1.h_terms), ("g", res1.g_terms), ("f", res1.f_terms), ("B", res1.B_terms)):
            for m, t in enumerate(ts[1:], start=1):
                c = vanishes("", "", t)
                higher.append({"term": label, "m": m, "zero": c.status != FAIL, "degrees": t.degrees})
        nz = next((t for t in higher if not t["zero"]), None)
        rep.add(Check("stage1.higher_terms", "every term with m >= 1 is zero",
                      sorted({n for t in higher for n in t["degrees"]}), FAIL if nz else PASS, nz,
                      {"terms": [f'{t["term"]}{t["m"]}' for t in higher]}))
    else:
        res1 = None

    # stage 2
    r = rc if feasible else make_special(build_retract(ez))
    res = res1 if feasible else perturb(r)
    sm = package_smorphism(ez, res)
    rep.add(compare("stage2.f0=Sh_bar", "f^0 = Sh_bar", sm.component(0), ez.Sh_bar))
    if not feasible:
        # not implied by the theorem for this h, so recorded rather than asserted
        nz = [m for m, t in enumerate(res.B_terms[1:], start=1) if not t.is_zero()]
        rep.add(Check("stage2.higher_B_terms", "f (B h)^m B g = 0 for m >= 1 (h from the unconstrained splitting)",
                      list(range(1, len(res.B_terms))), INFO, None, {"nonzero_terms": nz}))
    rep.extend(check_smorphism(sm), "stage2")

    # stage 3
    _homology_checks(ez, sm, rep)
    return rep
