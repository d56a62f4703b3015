"""Command-line entry point: parse a job document, run it, print a deterministic report.

Exit codes: 0 every check passed, 1 some check failed, 2 invalid input,
3 resource cap exceeded.
"""
from __future__ import annotations

import argparse
import json
import random
import sys
from dataclasses import dataclass, field as dc_field
from fractions import Fraction

from .constructors import (
    DEFAULT_DIM_CAP,
    AlgebraSpec,
    AutomorphismSpec,
    GroupActionSpec,
    ResourceCapError,
    SpecError,
    a_natural,
    group_action_cylindrical,
    tensor_cylindrical,
)
from .cylindrical import CylindricalModule, check_cylindrical, check_diagonal, diagonal_cyclic, normalized_total
from .exactfield import GF, QQ, FieldSpec, Matrix, is_prime
from .report import FAIL, INFO, PASS, Check, Report
from .simplicial import (
    OracleError,
    ParacyclicModule,
    TruncationError,
    check_mixed,
    check_operator_calculus,
    check_paracyclic,
    connes_lambda_oracle,
    cyclic_homology,
    hochschild_homology,
    mixed_from_cyclic,
    normalize,
)

COMMANDS = ("check", "homology", "ez-verify", "oracle")
KINDS = ("a_natural_g", "group_action", "tensor")
TARGETS = ("diagonal", "total", "both")
EXIT_PASS, EXIT_FAIL, EXIT_INVALID, EXIT_CAP = 0, 1, 2, 3


@dataclass(frozen=True)
class JobSpec:
    """A validated job.  ``construction`` is kept in canonical document form."""

    field: FieldSpec
    truncation: int
    construction: dict
    command: str
    options: dict = dc_field(default_factory=dict)

    def __eq__(self, other):
        return isinstance(other, JobSpec) and serialize(self) == serialize(other)

    def __hash__(self):
        return hash(serialize(self))


# ---------------------------------------------------------------------------
# parsing


def _fail(code, message, path="", witness=None):
    raise SpecError(code, message, path, witness)


def _expect(cond, message, path):
    if not cond:
        _fail("MALFORMED_DOCUMENT", message, path)


def _parse_field(doc, path="field") -> FieldSpec:
    _expect(isinstance(doc, dict), "field must be an object", path)
    kind = doc.get("type")
    if kind == "Q":
        return QQ
    if kind == "Fp":
        p = doc.get("p")
        _expect(isinstance(p, int) and not isinstance(p, bool), "Fp needs an integer p", path + ".p")
        if not is_prime(p):
            _fail("FIELD_NOT_PRIME", f"{p} is not prime", path + ".p", [p])
        return GF(p)
    _fail("MALFORMED_DOCUMENT", "field type must be 'Q' or 'Fp'", path + ".type")


def _scalar(field: FieldSpec, v, path):
    _expect(isinstance(v, str), "scalars must be strings (exact fractions or residues)", path)
    try:
        Fraction(v.strip())
    except (ValueError, ZeroDivisionError):
        _fail("MALFORMED_DOCUMENT", f"cannot parse {v!r} as an exact scalar", path)
    try:
        return field(v.strip())
    except ZeroDivisionError:
        _fail("MALFORMED_DOCUMENT", f"{v!r} has a denominator divisible by {field.characteristic}", path)


def _vector(field, v, n, path):
    _expect(isinstance(v, list) and len(v) == n, f"expected a list of {n} scalars", path)
    return [_scalar(field, x, f"{path}[{i}]") for i, x in enumerate(v)]


def _matrix(field, rows, n, path) -> Matrix:
    _expect(isinstance(rows, list) and len(rows) == n, f"expected {n} rows", path)
    return Matrix.from_rows(field, [_vector(field, r, n, f"{path}[{i}]") for i, r in enumerate(rows)], n)


def _parse_algebra(field, doc, path) -> AlgebraSpec:
    _expect(isinstance(doc, dict), "algebra must be an object", path)
    d = doc.get("dim")
    _expect(isinstance(d, int) and not isinstance(d, bool) and d >= 1, "dim must be a positive integer", path + ".dim")
    sc = doc.get("structure_constants")
    _expect(isinstance(sc, list) and len(sc) == d, f"structure_constants must be {d}x{d}x{d}", path + ".structure_constants")
    table = []
    for i, row in enumerate(sc):
        _expect(isinstance(row, list) and len(row) == d, f"row {i} must have {d} entries", f"{path}.structure_constants[{i}]")
        table.append([_vector(field, v, d, f"{path}.structure_constants[{i}][{j}]") for j, v in enumerate(row)])
    unit = _vector(field, doc.get("unit"), d, path + ".unit")
    try:
        return AlgebraSpec.from_table(field, table, unit, doc.get("name", ""))
    except SpecError as e:
        raise _rebase_error(e, path, "algebra") from None


def _rebase_error(e: SpecError, path: str, strip: str = "") -> SpecError:
    """Re-anchor a constructor error's key path under ``path``."""
    inner = e.path[len(strip):].lstrip(".") if strip and e.path.startswith(strip) else e.path
    if inner and not inner.startswith("["):
        inner = "." + inner
    return SpecError(e.code, e.message, path + inner, e.witness)


def _canon_matrix(field, m: Matrix):
    return [[field.fmt(x) for x in row] for row in m.to_rows()]


def _canon_algebra(a: AlgebraSpec, name=None):
    f = a.field
    out = {
        "dim": a.dim,
        "structure_constants": [[[f.fmt(x) for x in v] for v in row] for row in a.structure_constants],
        "unit": [f.fmt(x) for x in a.unit],
    }
    if name:
        out["name"] = name
    return out


def _parse_construction(field, doc, path="construction", allowed=KINDS):
    """Returns (canonical document, builder(N, cap))."""
    _expect(isinstance(doc, dict), "construction must be an object", path)
    kind = doc.get("kind")
    _expect(kind in allowed, f"kind must be one of {list(allowed)}", path + ".kind")
    if kind == "a_natural_g":
        a = _parse_algebra(field, doc.get("algebra"), path + ".algebra")
        g_doc = doc.get("automorphism")
        g = AutomorphismSpec(Matrix.identity(field, a.dim) if g_doc is None else _matrix(field, g_doc, a.dim, path + ".automorphism"))
        try:
            g.validate(a, path + ".automorphism")
        except SpecError as e:
            raise SpecError(e.code, e.message, path + ".automorphism", e.witness) from None
        canon = {"kind": kind, "algebra": _canon_algebra(a, doc["algebra"].get("name")),
                 "automorphism": _canon_matrix(field, g.matrix)}
        label = doc["algebra"].get("name") or f"dim {a.dim}"
        prefix = "A" if g.matrix == Matrix.identity(field, a.dim) else "A_g"
        return canon, lambda N, cap: a_natural(a, g, N, cap, name=f"{prefix}({label})")
    if kind == "group_action":
        a = _parse_algebra(field, doc.get("algebra"), path + ".algebra")
        gdoc = doc.get("group")
        _expect(isinstance(gdoc, dict), "group must be an object", path + ".group")
        m = gdoc.get("order")
        _expect(isinstance(m, int) and not isinstance(m, bool) and m >= 1, "order must be a positive integer", path + ".group.order")
        table = gdoc.get("table")
        _expect(isinstance(table, list), "table must be a list of rows", path + ".group.table")
        ident = gdoc.get("identity", 0)
        _expect(isinstance(ident, int) and not isinstance(ident, bool), "identity must be an element index", path + ".group.identity")
        acts = doc.get("action")
        _expect(isinstance(acts, list), "action must be a list of matrices", path + ".action")
        mats = tuple(AutomorphismSpec(_matrix(field, mt, a.dim, f"{path}.action[{i}]")) for i, mt in enumerate(acts))
        act = GroupActionSpec(m, tuple(tuple(r) if isinstance(r, list) else r for r in table), ident, mats,
                              gdoc.get("name", f"G{m}"))
        try:
            act.validate(a)
        except SpecError as e:
            raise _rebase_error(e, path) from None
        canon = {"kind": kind, "algebra": _canon_algebra(a, doc["algebra"].get("name")),
                 "group": {"order": m, "table": [list(r) for r in act.table], "identity": ident},
                 "action": [_canon_matrix(field, g.matrix) for g in mats]}
        label = doc["algebra"].get("name") or f"dim {a.dim}"
        return canon, lambda N, cap: group_action_cylindrical(a, act, N, cap, name=f"G{m} on {label}")
    left, build_l = _parse_construction(field, doc.get("left"), path + ".left", ("a_natural_g",))
    right, build_r = _parse_construction(field, doc.get("right"), path + ".right", ("a_natural_g",))

    def build(N, cap):
        return tensor_cylindrical(build_l(N, cap), build_r(N, cap), cap=cap)

    return {"kind": kind, "left": left, "right": right}, build


def _parse_options(doc, N, path="options") -> dict:
    if doc is None:
        doc = {}
    _expect(isinstance(doc, dict), "options must be an object", path)
    known = {"max_degree", "unsafe", "target", "seed", "dimension_cap"}
    extra = sorted(set(doc) - known)
    _expect(not extra, f"unknown option(s) {extra}", path)
    out = {}
    if doc.get("max_degree") is not None:
        md = doc["max_degree"]
        _expect(isinstance(md, int) and not isinstance(md, bool) and md >= 0, "max_degree must be a non-negative integer",
                path + ".max_degree")
        _expect(md <= N, f"max_degree {md} exceeds the truncation {N}", path + ".max_degree")
        out["max_degree"] = md
    if doc.get("unsafe"):
        out["unsafe"] = True
    if doc.get("target") is not None:
        _expect(doc["target"] in TARGETS, f"target must be one of {list(TARGETS)}", path + ".target")
        out["target"] = doc["target"]
    if doc.get("seed") is not None:
        _expect(isinstance(doc["seed"], int) and not isinstance(doc["seed"], bool), "seed must be an integer", path + ".seed")
        out["seed"] = doc["seed"]
    if doc.get("dimension_cap") is not None:
        cap = doc["dimension_cap"]
        _expect(isinstance(cap, int) and not isinstance(cap, bool) and cap >= 1, "dimension_cap must be positive",
                path + ".dimension_cap")
        out["dimension_cap"] = cap
    return out


def parse_input(text: str) -> JobSpec:
    """Validate a job document; raises :class:`SpecError` with a code and key path."""
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as e:
        _fail("MALFORMED_DOCUMENT", f"not valid JSON: {e.msg} (line {e.lineno})", "")
    _expect(isinstance(doc, dict), "the document must be an object", "")
    extra = sorted(set(doc) - {"field", "truncation", "construction", "command", "options"})
    _expect(not extra, f"unknown key(s) {extra}", "")
    field = _parse_field(doc.get("field"))
    N = doc.get("truncation")
    _expect(isinstance(N, int) and not isinstance(N, bool) and N >= 1, "truncation must be an integer >= 1", "truncation")
    cmd = doc.get("command")
    _expect(cmd in COMMANDS, f"command must be one of {list(COMMANDS)}", "command")
    canon, _ = _parse_construction(field, doc.get("construction"))
    opts = _parse_options(doc.get("options"), N)
    return JobSpec(field, N, canon, cmd, opts)


def serialize(job: JobSpec) -> str:
    doc = {
        "field": job.field.to_json(),
        "truncation": job.truncation,
        "construction": job.construction,
        "command": job.command,
        "options": job.options,
    }
    return json.dumps(doc, sort_keys=True, indent=2, ensure_ascii=False)


def build_module(job: JobSpec):
    _, builder = _parse_construction(job.field, job.construction)
    return builder(job.truncation, job.options.get("dimension_cap", DEFAULT_DIM_CAP))


# ---------------------------------------------------------------------------
# commands


def _is_cyl(m) -> bool:
    return isinstance(m, CylindricalModule)


def _mutation_suite(module, seed: int, rounds: int = 5) -> Report:
    from .randomized import mutate

    rep = Report("mutation self-test")
    rng = random.Random(seed)
    for k in range(rounds):
        mutant, desc = mutate(module, rng)
        res = check_cylindrical(mutant) if _is_cyl(module) else check_paracyclic(mutant, module.is_cyclic())
        bad = res.failures()
        ok = bool(bad) and all(c.witness for c in bad)
        rep.add(Check(f"mutation.{k}", "a perturbed operator is caught with a witness", None, PASS if ok else FAIL,
                      None if ok else desc, {"mutation": desc, "caught_by": bad[0].name if bad else None}))
    return rep


def cmd_check(job: JobSpec, module) -> Report:
    rep = Report(f"check: {module.name}")
    if _is_cyl(module):
        rep.extend(check_cylindrical(module), "cylindrical")
        rep.extend(check_diagonal(module), "diagonal")
        rep.extend(check_mixed(normalized_total(module, verify=False).complex), "normalized_total")
        rep.extend(check_mixed(normalize(diagonal_cyclic(module)).complex), "normalized_diagonal")
    else:
        cyclic = module.is_cyclic()
        rep.extend(check_paracyclic(module, cyclic), "paracyclic")
        if not cyclic:
            rep.add(Check("cyclic", "tau^{n+1} = 1", None, INFO, None, {"cyclic": False}))
        rep.extend(check_operator_calculus(module), "operators")
    if "seed" in job.options:
        rep.extend(_mutation_suite(module, job.options["seed"]))
    return rep


def _degrees(job: JobSpec):
    N = job.truncation
    top = job.options.get("max_degree", N - 1)
    if top > N - 1 and not job.options.get("unsafe"):
        raise TruncationError(f"degree {top} is outside the safe window 0..{N - 1}; pass --unsafe to print it")
    return list(range(top + 1))


def _table(c, degrees, label) -> Check:
    mixed = "pre-mixed" not in c.flags
    rows = []
    for n in degrees:
        safe = n <= c.N - 1
        rows.append({"degree": n, "HH": hochschild_homology(c, n, not safe),
                     "HC": cyclic_homology(c, n, not safe) if mixed else None, "safe": safe})
    detail = {"rows": rows, "safe_window": [0, c.N - 1]}
    if not mixed:
        detail["note"] = "bB + Bb != 0 (paracyclic, not cyclic): HC is undefined"
    return Check(f"homology.{label}", "dim HH_n and dim HC_n (B-bicomplex)", degrees, INFO, None, detail)


def cmd_homology(job: JobSpec, module) -> Report:
    degrees = _degrees(job)
    rep = Report(f"homology: {module.name}")
    if not _is_cyl(module):
        rep.add(_table(normalize(module).complex, degrees, "module"))
        return rep
    target = job.options.get("target", "both")
    if target in ("diagonal", "both"):
        rep.add(_table(normalize(diagonal_cyclic(module)).complex, degrees, "diagonal"))
    if target in ("total", "both"):
        rep.add(_table(normalized_total(module, verify=False).complex, degrees, "total"))
    return rep


def cmd_ez_verify(job: JobSpec, module) -> Report:
    from .eztheorem import (
        build_retract,
        check_ez_maps,
        check_perturbation,
        check_projector,
        check_retract,
        ez_setup,
        first_term_equals_Bt,
        make_special,
        perturb,
        verify_main_theorem,
    )
    from .resolver import resolve

    if not _is_cyl(module):
        raise SpecError("COMMAND_NOT_APPLICABLE", "ez-verify needs a cylindrical construction (group_action or tensor)",
                        "construction.kind")
    rep = Report(f"ez-verify: {module.name}")
    res = resolve()
    for c in res.report.checks:
        if c.name.startswith("frozen."):
            rep.add(Check("conventions." + c.name[len("frozen."):], c.ref, None, c.status, c.witness, c.detail))
    rep.add(check_mixed(normalized_total(module, verify=False).complex).get("B^2"))
    ez = ez_setup(module)
    rep.extend(check_ez_maps(ez), "ez")
    rep.extend(first_term_equals_Bt(module, ez), "prop")
    rep.extend(check_projector(ez), "retract")
    r = make_special(build_retract(ez))
    rep.extend(check_retract(r), "retract")
    rep.add(Check("retract.method", "how h was obtained", None, INFO, None, {"method": r.method}))
    rep.extend(check_perturbation(perturb(r)), "perturbation")
    main = verify_main_theorem(module, ez)
    rep.extend(main, "theorem")
    if main.get("stage1.constrained_solve").status == PASS:
        exact = main.get("stage1.B_inf=B_t").status == PASS
        rep.add(Check("theorem.B_inf", "B_inf = B_t", None, INFO, None, {"B_inf=B_t": "exact" if exact else "differs"}))
    return rep


def cmd_oracle(job: JobSpec, module) -> Report:
    if job.field.kind != "Q":
        raise OracleError("the Connes complex oracle requires characteristic zero")
    m = diagonal_cyclic(module) if _is_cyl(module) else module
    if not m.is_cyclic():
        raise SpecError("NOT_CYCLIC", "the Connes complex needs a cyclic module (tau^{n+1} = 1)", "construction")
    degrees = _degrees(job)
    degrees = [n for n in degrees if n <= m.N - 1]
    rep = Report(f"oracle: {m.name}")
    c = normalize(m).complex
    rows, bad = [], None
    for n in degrees:
        hc, lam = cyclic_homology(c, n), connes_lambda_oracle(m, n)
        rows.append({"degree": n, "HC": hc, "lambda": lam})
        if hc != lam and bad is None:
            bad = {"degree": n, "HC": hc, "lambda": lam}
    rep.add(Check("oracle.HC=lambda", "HC_n from the B-bicomplex = H_n of the Connes complex", degrees,
                  FAIL if bad else PASS, bad, {"rows": rows}))
    return rep


DISPATCH = {"check": cmd_check, "homology": cmd_homology, "ez-verify": cmd_ez_verify, "oracle": cmd_oracle}


def run(job: JobSpec) -> Report:
    module = build_module(job)
    report = DISPATCH[job.command](job, module)
    report.title = f"{report.title} [{job.field.describe()}, N={job.truncation}]"
    return report


# ---------------------------------------------------------------------------
# output


def _render(report: Report, fmt: str) -> str:
    if fmt == "json":
        return json.dumps(report.to_json(), sort_keys=True, indent=2, ensure_ascii=False) + "\n"
    return report.to_text()


def _render_error(code, message, path, witness, fmt) -> str:
    if fmt == "json":
        err = {"code": code, "message": message, "path": path}
        if witness is not None:
            err["witness"] = witness
        return json.dumps({"error": err}, sort_keys=True, indent=2) + "\n"
    line = f"error {code}: {message}"
    if path:
        line += f" (at {path})"
    if witness is not None:
        line += f" witness={json.dumps(witness)}"
    return line + "\n"


def _parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="cyclicez", description=__doc__.splitlines()[0])
    ap.add_argument("--input", required=True, help="job document (JSON); '-' reads stdin")
    ap.add_argument("--command", choices=COMMANDS, help="override the document's command")
    ap.add_argument("--max-degree", type=int, help="highest degree to report (<= truncation)")
    ap.add_argument("--unsafe", action="store_true", help="allow degrees outside the safe window")
    ap.add_argument("--format", choices=("text", "json"), default="text")
    ap.add_argument("--seed", type=int, help="seed for the randomized mutation self-test")
    return ap


def main(argv=None, out=None) -> int:
    out = out or sys.stdout
    args = _parser().parse_args(argv)
    fmt = args.format
    try:
        text = sys.stdin.read() if args.input == "-" else open(args.input, encoding="utf-8").read()
    except OSError as e:
        out.write(_render_error("MALFORMED_DOCUMENT", f"cannot read input: {e.strerror}", "", None, fmt))
        return EXIT_INVALID
    try:
        job = parse_input(text)
        opts = dict(job.options)
        if args.max_degree is not None:
            if not 0 <= args.max_degree <= job.truncation:
                raise SpecError("MALFORMED_DOCUMENT", f"--max-degree must lie in 0..{job.truncation}", "--max-degree")
            opts["max_degree"] = args.max_degree
        if args.unsafe:
            opts["unsafe"] = True
        if args.seed is not None:
            opts["seed"] = args.seed
        job = JobSpec(job.field, job.truncation, job.construction, args.command or job.command, opts)
        report = run(job)
    except SpecError as e:
        out.write(_render_error(e.code, e.message, e.path, e.witness, fmt))
        return EXIT_INVALID
    except OracleError as e:
        out.write(_render_error(e.code, str(e), "field", None, fmt))
        return EXIT_INVALID
    except TruncationError as e:
        out.write(_render_error("UNSAFE_DEGREE", str(e), "--max-degree", None, fmt))
        return EXIT_INVALID
    except ResourceCapError as e:
        out.write(_render_error(ResourceCapError.code, str(e), "construction", None, fmt))
        return EXIT_CAP
    out.write(_render(report, fmt))
    return EXIT_PASS if report.passed else EXIT_FAIL


if __name__ == "__main__":
    sys.exit(main())
