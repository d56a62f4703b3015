import os
import sys
from functools import lru_cache

import pytest
from hypothesis import HealthCheck, settings

sys.path.insert(0, os.path.dirname(__file__))

from cyclicez import bundled  # noqa: E402
from cyclicez.exactfield import GF, QQ  # noqa: E402

settings.register_profile("default", max_examples=40, deadline=None,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")

F1009 = GF(1009)


@lru_cache(maxsize=None)
def build(name, field_kind="Q", N=3):
    field = QQ if field_kind == "Q" else GF(int(field_kind))
    return bundled.get(name).build(field, N)


@lru_cache(maxsize=None)
def ez_for(name, field_kind="Q", N=3):
    from cyclicez.eztheorem import ez_setup
    return ez_setup(build(name, field_kind, N))


@pytest.fixture
def qq():
    return QQ


@pytest.fixture
def f1009():
    return F1009


def pytest_terminal_summary(terminalreporter):
    mod = sys.modules.get("test_acceptance")
    if not mod or not mod.RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for k in sorted(mod.RESULTS):
        terminalreporter.write_line(mod.acceptance_line(k))
