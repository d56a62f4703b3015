"""Acceptance suite: one pass/fail line per criterion.

Run under pytest (lines appear in the terminal summary) or directly with
``python3 tests/test_acceptance.py``.  Scales: N=3 over Q and N=4 over
F_1009 for every bundled example.
"""
from __future__ import annotations

import json
import os
import random
import subprocess
import sys
import time
from functools import lru_cache

import pytest

sys.path.insert(0, os.path.dirname(__file__))

from cyclicez import bundled  # noqa: E402
from cyclicez.cylindrical import (  # noqa: E402
    check_cylindrical,
    check_diagonal,
    diagonal_cyclic,
    normalized_total,
    total_mixed,
)
from cyclicez.exactfield import GF, QQ  # noqa: E402
from cyclicez.eztheorem import (  # noqa: E402
    build_retract,
    check_ez_maps,
    check_perturbation,
    check_retract,
    ez_setup,
    first_term_equals_Bt,
    make_special,
    perturb,
    verify_main_theorem,
)
from cyclicez.randomized import CLASSES, mutate, random_instances  # noqa: E402
from cyclicez.resolver import resolve  # noqa: E402
from cyclicez.simplicial import (  # noqa: E402
    check_mixed,
    check_paracyclic,
    connes_lambda_oracle,
    cyclic_homology,
    normalize,
)

SCALES = bundled.DESK_SCALES
RESULTS: dict[int, tuple[bool, str]] = {}
TITLES = {
    1: "structural identities, randomized instances and mutation detection",
    2: "Tot(X) is a mixed complex; resolver freezes one convention",
    3: "Sh and A are chain maps and A Sh = 1 (normalized)",
    4: "A B_d Sh = B_t on normalized chains",
    5: "retract, special and perturbation identities",
    6: "constrained solve gives B_inf = B_t; S-morphism with f0 = Sh",
    7: "HC and HH of Tot and d(X) agree; five-lemma instance",
    8: "B-bicomplex HC equals the Connes complex over Q",
    9: "byte-identical reports for repeated runs",
}


def record(k: int, ok: bool, note: str = ""):
    RESULTS[k] = (ok, note)
    print(acceptance_line(k))


def acceptance_line(k: int) -> str:
    ok, note = RESULTS[k]
    line = f"criterion {k}: {'PASS' if ok else 'FAIL'}  {TITLES[k]}"
    return line + (f"  [{note}]" if note else "")


def _tag(field, N):
    return f"{field.describe()},N={N}"


@lru_cache(maxsize=None)
def module(name, field, N):
    return bundled.get(name).build(field, N)


@lru_cache(maxsize=None)
def ez(name, field, N):
    return ez_setup(module(name, field, N))


@lru_cache(maxsize=None)
def theorem(name, field, N):
    return verify_main_theorem(module(name, field, N), ez(name, field, N))


def cylindrical_runs():
    return [(e.name, f, N) for f, N in SCALES for e in bundled.cylindrical_examples()]


def _first_bad(items):
    """items: iterable of (label, Report); returns the first failing label and check."""
    for label, rep in items:
        bad = rep.failures()
        if bad:
            return f"{label}: {bad[0].name} {json.dumps(bad[0].witness, sort_keys=True)}"
    return None


# --- 1 ----------------------------------------------------------------------


def test_criterion_1_structure():
    t0 = time.perf_counter()
    reps = []
    for f, N in SCALES:
        for e in bundled.examples():
            m = module(e.name, f, N)
            if e.kind == "paracyclic":
                reps.append((f"{e.name} {_tag(f, N)}", check_paracyclic(m, e.cyclic)))
            else:
                reps.append((f"{e.name} {_tag(f, N)}", check_cylindrical(m)))
                reps.append((f"d({e.name}) {_tag(f, N)}", check_diagonal(m)))
    missed = []
    count = 0
    for f in (QQ, GF(1009)):
        for cls in CLASSES:
            rng = random.Random(f"acceptance:{cls}:{f.describe()}")
            for inst in random_instances(cls, 25, f, 3, seed=2024):
                check = check_cylindrical if cls == "cylindrical" else (lambda m, c=inst.cyclic: check_paracyclic(m, c))
                reps.append((f"{inst.description} {f.describe()}", check(inst.module)))
                mutant, desc = mutate(inst.module, rng)
                bad = check(mutant).failures()
                count += 1
                if not bad or not all(c.witness for c in bad):
                    missed.append(desc)
    elapsed = time.perf_counter() - t0
    first = _first_bad(reps)
    ok = first is None and not missed and elapsed <= 120
    note = f"{len(reps)} reports, {count} mutants caught, {elapsed:.0f}s"
    if first:
        note += f"; {first}"
    if missed:
        note += f"; uncaught mutation {missed[0]}"
    record(1, ok, note)
    assert ok, note


# --- 2 ----------------------------------------------------------------------


def _criterion_2():
    literal, normalized = [], []
    for name, f, N in cylindrical_runs():
        x = module(name, f, N)
        literal.append((f"{name} {_tag(f, N)}", check_mixed(total_mixed(x))))
        normalized.append((f"{name} {_tag(f, N)}", check_mixed(normalized_total(x, verify=False).complex)))
    for f, N in SCALES:
        for e in bundled.paracyclic_examples():
            if e.cyclic:
                normalized.append((f"{e.name} {_tag(f, N)}", check_mixed(normalize(module(e.name, f, N)).complex)))
    res = resolve()
    frozen_ok = res.consistent and len(res.frozen) == 3 and all(res.survivors[k] for k in res.frozen)
    lit_bad = [label for label, rep in literal if not rep.passed]
    return literal, normalized, res, frozen_ok, lit_bad


@lru_cache(maxsize=None)
def criterion_2_data():
    return _criterion_2()


def test_criterion_2_normalized_and_resolver():
    literal, normalized, res, frozen_ok, lit_bad = criterion_2_data()
    first = _first_bad(normalized)
    ok = not lit_bad and first is None and frozen_ok
    note = f"frozen {res.frozen}"
    if lit_bad:
        note += (f"; unnormalized Tot fails on {len(lit_bad)} runs with paracyclic rows "
                 f"(first: {_first_bad(literal)}); normalized Tot passes on all")
    record(2, ok, note)
    # the normalized form and the resolver must hold regardless
    assert first is None, first
    assert frozen_ok


@pytest.mark.xfail(strict=True, reason="on unnormalized chains B^2 = 0 needs cyclic rows; the sign-action rows "
                                       "are only paracyclic, so (B^h)^2 = 1 - t^{p+1} != 0")
def test_criterion_2_literal_unnormalized():
    _, _, _, _, lit_bad = criterion_2_data()
    assert not lit_bad, lit_bad


# --- 3, 4 -------------------------------------------------------------------


def test_criterion_3_ez_maps():
    reps = []
    for name, f, N in cylindrical_runs():
        rep = check_ez_maps(ez(name, f, N))
        reps.append((f"{name} {_tag(f, N)}", rep))
    first = _first_bad(reps)
    window_ok = all(max(c.window) >= N - 1 for (_, _, N), (_, r) in zip(cylindrical_runs(), reps)
                    for c in r.checks if c.window)
    ok = first is None and window_ok
    record(3, ok, f"{len(reps)} runs" + (f"; {first}" if first else ""))
    assert ok


def test_criterion_4_first_term():
    reps, short = [], []
    for name, f, N in cylindrical_runs():
        rep = first_term_equals_Bt(module(name, f, N), ez(name, f, N))
        reps.append((f"{name} {_tag(f, N)}", rep))
        if rep.checks[0].detail["max_degree"] < N - 2:
            short.append(name)
    first = _first_bad(reps)
    ok = first is None and not short
    record(4, ok, f"{len(reps)} runs" + (f"; {first}" if first else ""))
    assert ok


# --- 5 ----------------------------------------------------------------------


def test_criterion_5_retract_and_perturbation():
    reps = []
    for name, f, N in cylindrical_runs():
        r = make_special(build_retract(ez(name, f, N)))
        label = f"{name} {_tag(f, N)}"
        reps.append((label, check_retract(r)))
        reps.append((label, check_perturbation(perturb(r))))
    first = _first_bad(reps)
    names = {c.name for _, rep in reps for c in rep.checks}
    needed = {"fg", "gf", "hg", "fh", "hh", "square", "f_inf.g_inf"}
    ok = first is None and needed <= names
    record(5, ok, f"{len(reps) // 2} runs" + (f"; {first}" if first else ""))
    assert ok


# --- 6 ----------------------------------------------------------------------


def test_criterion_6_main_theorem():
    feasible, problems = [], []
    for name, f, N in cylindrical_runs():
        rep = theorem(name, f, N)
        label = f"{name} {_tag(f, N)}"
        if rep.get("stage1.constrained_solve").detail["feasible"]:
            feasible.append(label)
            for c in ("stage1.B_inf=B_t", "stage1.higher_terms"):
                if rep.get(c).status != "pass":
                    problems.append(f"{label}: {c}")
        for c in rep.checks:
            if c.name.startswith("stage2") and c.status == "fail":
                problems.append(f"{label}: {c.name}")
    tensor_ok = all(f"A(Q) x A(Q) {_tag(f, N)}" in feasible for f, N in SCALES)
    ok = not problems and tensor_ok
    note = f"constrained solve feasible on {len(feasible)}/{len(cylindrical_runs())} runs"
    if problems:
        note += f"; {problems[0]}"
    record(6, ok, note)
    assert ok


# --- 7 ----------------------------------------------------------------------


def test_criterion_7_quasi_isomorphism():
    bad = []
    for name, f, N in cylindrical_runs():
        rep = theorem(name, f, N)
        for c in ("HH.equal", "HC.equal", "five_lemma", "quasi_isomorphism"):
            if rep.get(c).status != "pass":
                bad.append(f"{name} {_tag(f, N)}: {c}")
    ok = not bad
    record(7, ok, f"{len(cylindrical_runs())} runs" + (f"; {bad[0]}" if bad else ""))
    assert ok


# --- 8 ----------------------------------------------------------------------


def test_criterion_8_oracle():
    N = 3
    bad, count = [], 0
    cyclic = [(e.name, module(e.name, QQ, N)) for e in bundled.paracyclic_examples() if e.cyclic]
    cyclic += [(f"d({e.name})", diagonal_cyclic(module(e.name, QQ, N))) for e in bundled.cylindrical_examples()]
    for label, m in cyclic:
        c = normalize(m).complex
        for n in range(N):
            count += 1
            hc, lam = cyclic_homology(c, n), connes_lambda_oracle(m, n)
            if hc != lam:
                bad.append(f"{label} n={n}: HC={hc} lambda={lam}")
    ground = normalize(module("A(Q)", QQ, N)).complex
    ground_ok = [cyclic_homology(ground, n) for n in range(3)] == [1, 0, 1]
    ok = not bad and ground_ok
    record(8, ok, f"{len(cyclic)} modules, {count} degrees" + (f"; {bad[0]}" if bad else ""))
    assert ok


# --- 9 ----------------------------------------------------------------------


def _jobs(tmp):
    from importlib import resources

    data = resources.files("cyclicez").joinpath("data")
    jobs = [(str(data.joinpath(n)), flags) for n, flags in
            (("tensor_q_ez.json", ["--format", "json"]), ("sign_action_check.json", ["--seed", "5"]),
             ("a_natural_q_homology.json", ["--max-degree", "4", "--unsafe"]),
             ("dual_numbers_f5_oracle.json", []))]
    return jobs


def test_criterion_9_determinism(tmp_path):
    diffs = []
    for path, flags in _jobs(tmp_path):
        outs = []
        for seed in ("1", "2"):
            env = dict(os.environ, PYTHONHASHSEED=seed)
            proc = subprocess.run([sys.executable, "-m", "cyclicez", "--input", path, *flags],
                                  capture_output=True, env=env)
            outs.append((proc.returncode, proc.stdout))
        if outs[0] != outs[1]:
            diffs.append(os.path.basename(path))
    ok = not diffs
    record(9, ok, f"{len(_jobs(tmp_path))} jobs run twice in separate processes" + (f"; differs: {diffs}" if diffs else ""))
    assert ok


def main():
    import tempfile
    from pathlib import Path

    tests = [test_criterion_1_structure, test_criterion_2_normalized_and_resolver, test_criterion_3_ez_maps,
             test_criterion_4_first_term, test_criterion_5_retract_and_perturbation, test_criterion_6_main_theorem,
             test_criterion_7_quasi_isomorphism, test_criterion_8_oracle]
    for t in tests:
        try:
            t()
        except AssertionError:
            pass
    with tempfile.TemporaryDirectory() as d:
        try:
            test_criterion_9_determinism(Path(d))
        except AssertionError:
            pass
    print()
    for k in sorted(RESULTS):
        print(acceptance_line(k))
    return 0 if all(ok for ok, _ in RESULTS.values()) else 1


if __name__ == "__main__":
    sys.exit(main())
