import numpy as np
import pytest
from hypothesis import HealthCheck, settings

from bohrgroups.groups import build_group, dual

settings.register_profile("default", max_examples=60, deadline=None,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")

GROUP_LABELS = ["cyclic:1", "cyclic:2", "cyclic:8", "cyclic:12", "dihedral:3", "dihedral:4", "dihedral:5",
                "symmetric:1", "symmetric:2", "symmetric:3", "symmetric:4", "quaternion:8"]


@pytest.fixture(scope="session")
def duals():
    """Dual lists keyed by group label, built once per session."""
    return {lab: dual(build_group(lab)) for lab in GROUP_LABELS}


@pytest.fixture()
def rng():
    return np.random.default_rng(20240611)


# ---------------------------------------------------------------------------
# acceptance criteria: one summary line each, whatever the pytest verbosity

CRITERIA: dict = {}


def record_criterion(number: int, ok: bool, text: str):
    """Remember a sub-check of an acceptance criterion; all sub-checks must pass."""
    CRITERIA.setdefault(number, []).append((bool(ok), text))
    print(f"[{'PASS' if ok else 'FAIL'}] criterion {number}: {text}")


def pytest_terminal_summary(terminalreporter):
    if not CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(CRITERIA):
        parts = CRITERIA[number]
        ok = all(p for p, _ in parts)
        terminalreporter.write_line(f"[{'PASS' if ok else 'FAIL'}] criterion {number}: "
                                    + "; ".join(t for _, t in parts))
