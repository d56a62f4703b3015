from cyclicez import conventions
from cyclicez.resolver import resolve


def test_resolver_freezes_a_survivor_on_every_axis():
    res = resolve()
    assert res.consistent
    assert res.survivors["B_order"] == ["norm_first"]
    assert res.survivors["aw"] == ["pq/front_vertical"]
    # two twist placements survive; one is frozen
    assert "vertical/vertical" in res.survivors["tot_twists"]
    assert "none/none" not in res.survivors["tot_twists"]
    assert res.frozen == {"B_order": "norm_first", "tot_twists": "vertical/vertical", "aw": "pq/front_vertical"}
    frozen = [c for c in res.report.checks if c.name.startswith("frozen.")]
    assert len(frozen) == 3 and all(c.status == "pass" for c in frozen)


def test_rejected_candidates_carry_witnesses():
    res = resolve()
    for c in res.report.checks:
        if c.name.startswith("frozen."):
            continue
        if not c.detail["survives"]:
            assert c.witness and "module" in c.witness and "check" in c.witness


def test_conventions_module_matches():
    cur = conventions.current()
    assert cur["B_order"] == "norm_first"
    assert (cur["aw_sign"], cur["aw_orientation"]) == ("pq", "front_vertical")
    assert conventions.sign_value("pq", 1, 1) == -1
    assert conventions.sign_value("p+q", 1, 1) == 1
    assert conventions.sign_value("one", 3, 5) == 1
