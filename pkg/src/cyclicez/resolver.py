"""Re-derive the frozen conventions by brute force.

Three independent axes are enumerated, each against the identities that
pin it down on small reference modules:

* order of Connes' operator: ``1 - bB - Bb = tau^{n+1}`` and ``B^2 = 0``
  on normalized chains;
* Koszul twists on Tot: the mixed-complex identities on normalized Tot;
* Alexander-Whitney sign and orientation: A is a chain map, A Sh = 1 and
  A B_d Sh = B_t, all on normalized chains.

The axes are resolved in that order, each with the earlier ones fixed.
"""
from __future__ import annotations

from dataclasses import dataclass, field as dc_field
from itertools import product

from . import catalog, conventions
from .constructors import a_natural, group_action_cylindrical, tensor_cylindrical
from .cylindrical import tot_degenerate, total_mixed
from .exactfield import QQ, FieldSpec
from .eztheorem import check_ez_maps, ez_setup, first_term_equals_Bt, normalized_complexes
from .report import FAIL, INFO, PASS, Check, Report
from .simplicial import check_mixed, check_operator_calculus, normalize_mixed

B_ORDERS = ("norm_first", "norm_last")
TWISTS = ("vertical", "horizontal", "none")
AW_SIGNS = ("one", "pq", "p+q")
AW_ORIENTATIONS = ("front_horizontal", "front_vertical")


@dataclass
class Resolution:
    survivors: dict = dc_field(default_factory=dict)   # axis -> list of surviving values
    frozen: dict = dc_field(default_factory=dict)
    report: Report = dc_field(default_factory=lambda: Report("convention resolver"))

    @property
    def consistent(self) -> bool:
        return all(self.frozen[k] in self.survivors.get(k, []) for k in self.frozen)


def reference_modules(field: FieldSpec = QQ, N: int = 3):
    """Paracyclic and cylindrical modules that over-determine the conventions."""
    a, act = catalog.sign_action(field)
    dual = catalog.dual_numbers(field)
    g = act.action[1]
    para = [a_natural(a, None, N), a_natural(dual, None, N), a_natural(a, g, N, name="A_g sign")]
    d = a_natural(dual, None, N)
    cyl = [group_action_cylindrical(a, act, N), tensor_cylindrical(d, d)]
    return para, cyl


def _first_failure(rep: Report):
    bad = rep.failures()
    return None if not bad else {"check": bad[0].name, **(bad[0].witness or {})}


def _record(res: Resolution, axis: str, value, failure, examples):
    status = INFO
    detail = {"survives": failure is None, "examples": examples}
    res.report.add(Check(f"{axis}={value}", "candidate", None, status, failure, detail))


def resolve(field: FieldSpec = QQ, N: int = 3) -> Resolution:
    res = Resolution()
    para, cyl = reference_modules(field, N)
    names_p = [m.name for m in para]
    names_c = [x.name for x in cyl]

    # Connes' operator
    surv = []
    for order in B_ORDERS:
        failure = None
        for m in para:
            failure = _first_failure(check_operator_calculus(m, order))
            if failure:
                failure = {"module": m.name, **failure}
                break
        _record(res, "B_order", order, failure, names_p)
        if failure is None:
            surv.append(order)
    res.survivors["B_order"] = surv
    order = conventions.B_ORDER

    # Tot twists (jointly, they interact through bB + Bb)
    surv = []
    for bt, Bt in product(TWISTS, TWISTS):
        failure = None
        for x in cyl:
            tot = total_mixed(x, bt, Bt, order, verify=False)
            failure = _first_failure(check_mixed(normalize_mixed(tot, tot_degenerate(x)).complex))
            if failure:
                failure = {"module": x.name, **failure}
                break
        _record(res, "tot_twists", f"{bt}/{Bt}", failure, names_c)
        if failure is None:
            surv.append((bt, Bt))
    res.survivors["tot_b_twist"] = sorted({s[0] for s in surv})
    res.survivors["tot_B_twist"] = sorted({s[1] for s in surv})
    res.survivors["tot_twists"] = [f"{a}/{b}" for a, b in surv]

    # Alexander-Whitney
    surv = []
    complexes = [normalized_complexes(x, order) for x in cyl]
    for sign, orient in product(AW_SIGNS, AW_ORIENTATIONS):
        failure = None
        for x, cx in zip(cyl, complexes):
            ez = ez_setup(x, sign, orient, cx)
            rep = check_ez_maps(ez)
            rep.extend(first_term_equals_Bt(x, ez))
            failure = _first_failure(rep)
            if failure:
                failure = {"module": x.name, **failure}
                break
        _record(res, "aw", f"{sign}/{orient}", failure, names_c)
        if failure is None:
            surv.append((sign, orient))
    res.survivors["aw_sign"] = sorted({s[0] for s in surv})
    res.survivors["aw_orientation"] = sorted({s[1] for s in surv})
    res.survivors["aw"] = [f"{a}/{b}" for a, b in surv]

    cur = conventions.current()
    res.frozen = {
        "B_order": cur["B_order"],
        "tot_twists": f"{cur['tot_b_twist']}/{cur['tot_B_twist']}",
        "aw": f"{cur['aw_sign']}/{cur['aw_orientation']}",
    }
    for axis, value in res.frozen.items():
        ok = value in res.survivors[axis]
        res.report.add(Check(f"frozen.{axis}", "frozen value is among the survivors", None, PASS if ok else FAIL,
                             None if ok else {"frozen": value, "survivors": res.survivors[axis]},
                             {"frozen": value, "survivors": res.survivors[axis]}))
    return res
