from __future__ import annotations

import numpy as np
import pytest

from jostlab.analytics import PointMultiset
from jostlab.jost import JostFunction
from jostlab.potential import Potential
from jostlab.zeros import Rectangle, locate_zeros

BOX = Potential.box(1.0, 4.0)


@pytest.fixture(scope="session")
def box():
    return BOX


@pytest.fixture(scope="session")
def box_resonances_200():
    """Box resonances in |Re| <= 200, -200 <= Im <= -0.01 (one scan per session)."""
    report = locate_zeros(JostFunction(BOX), Rectangle(-200.0, 200.0, -200.0, -0.01), 1e-10)
    return PointMultiset.from_report(report)


@pytest.fixture
def rng():
    return np.random.default_rng(20261016)


def pytest_terminal_summary(terminalreporter):
    # wall time includes fixture setup (the shared resonance scan)
    setup, lines = {}, []
    for key, reports in terminalreporter.stats.items():
        for rep in reports:
            name = getattr(rep, "nodeid", "")
            if "test_acceptance.py::test_criterion_" not in name:
                continue
            when = getattr(rep, "when", None)
            if when == "setup":
                setup[name] = setup.get(name, 0.0) + rep.duration
                if rep.failed:
                    lines.append((name, "error", 0.0))
            elif when == "call":
                lines.append((name, key, rep.duration))
    if not lines:
        return
    terminalreporter.section("acceptance criteria")
    for name, key, dur in sorted(lines):
        short = name.split("::")[-1]
        verdict = "PASS" if key == "passed" else "FAIL"
        terminalreporter.write_line(
            f"criterion {int(short.split('_')[2]):2d} {verdict}  {short}  "
            f"({dur + setup.get(name, 0.0):.2f} s)")
