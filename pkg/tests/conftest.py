import importlib

import numpy as np
import pytest

from ghzrsp import _pykernels

ACCEPTANCE_LINES = []


def available_backends():
    mods = [_pykernels]
    try:
        mods.append(importlib.import_module("ghzrsp._ckernels"))
    except ImportError:
        pass
    return mods


@pytest.fixture(params=available_backends(), ids=lambda m: m.BACKEND)
def backend(request):
    return request.param


@pytest.fixture
def rng():
    return np.random.default_rng(20240607)


@pytest.fixture
def acceptance():
    def record(number, title, passed, detail=""):
        line = f"[{'PASS' if passed else 'FAIL'}] criterion {number:>2}: {title}"
        if detail:
            line += f" ({detail})"
        ACCEPTANCE_LINES.append(line)
        print(line)
        return passed
    return record


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
