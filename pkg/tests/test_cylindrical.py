import pytest

from cyclicez import bundled, catalog
from cyclicez.constructors import group_action_cylindrical
from cyclicez.cylindrical import (
    check_cylindrical,
    check_diagonal,
    diagonal_cyclic,
    normalized_total,
    tot_dims,
    total_mixed,
    tot_degenerate,
)
from cyclicez.exactfield import QQ
from cyclicez.simplicial import check_mixed, check_paracyclic, normalize_mixed
from conftest import build

CYL = [e.name for e in bundled.cylindrical_examples()]


@pytest.mark.parametrize("name", CYL)
def test_bundled_cylindrical_modules(name):
    x = build(name, "Q", 3)
    assert check_cylindrical(x).passed
    assert check_diagonal(x).passed
    for q in range(x.N + 1):
        assert check_paracyclic(x.row(q)).passed
    for p in range(x.N + 1):
        assert check_paracyclic(x.column(p)).passed


@pytest.mark.parametrize("name", CYL)
def test_normalized_total_is_mixed(name):
    x = build(name, "Q", 3)
    nz = normalized_total(x)
    assert check_mixed(nz.complex).passed
    assert nz.report.passed


def test_tot_dimensions_are_sums_over_antidiagonals():
    x = build("Z/2 on Q", "Q", 3)
    td = tot_dims(x)
    assert td == {n: sum(2 ** (p + 1) for p in range(n + 1)) for n in range(4)}


def test_unnormalized_total_fails_for_paracyclic_rows():
    # rows of the sign action are paracyclic, so B^2 only vanishes after normalizing
    a, act = catalog.sign_action(QQ)
    x = group_action_cylindrical(a, act, 3)
    rep = check_mixed(total_mixed(x))
    assert not rep.passed
    assert all(c.witness for c in rep.failures())
    assert check_mixed(normalized_total(x).complex).passed


@pytest.mark.parametrize("twists", [("none", "none"), ("vertical", "none"), ("none", "vertical")])
def test_wrong_twists_are_caught(twists):
    a, act = catalog.sign_action(QQ)
    x = group_action_cylindrical(a, act, 3)
    tot = total_mixed(x, *twists)
    rep = check_mixed(normalize_mixed(tot, tot_degenerate(x)).complex)
    assert not rep.passed
    bad = rep.failures()[0]
    assert "degree" in bad.witness


def test_diagonal_of_tensor_is_cyclic_for_twisted_example():
    x = build("Z/2 on Q[x]/(x^2)", "Q", 3)
    assert diagonal_cyclic(x).is_cyclic()
    assert not x.row(0).is_cyclic() or not x.column(0).is_cyclic()
