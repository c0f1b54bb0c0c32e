from __future__ import annotations

import os
from pathlib import Path

import pytest
from hypothesis import HealthCheck, settings

from hmfimage.heckedata import load

DATA = Path(__file__).resolve().parents[1] / "src" / "hmfimage" / "data"
EXTERNAL = Path(os.environ.get("HMFIMAGE_EXTERNAL", Path(__file__).resolve().parent / "external"))

settings.register_profile("default", deadline=None, suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")

# criterion number -> (passed, detail); filled by test_acceptance
ACCEPTANCE: dict[int, tuple[bool, str]] = {}


@pytest.fixture(scope="session")
def cs():
    return load(DATA / "consani_scholten.hmf")


@pytest.fixture(scope="session")
def dembele():
    return load(DATA / "dembele.hmf")


@pytest.fixture(scope="session")
def okada():
    return load(DATA / "okada.hmf")


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(ACCEPTANCE):
        ok, detail = ACCEPTANCE[n]
        terminalreporter.write_line(f"criterion {n}: {'PASS' if ok else 'FAIL'} - {detail}")
