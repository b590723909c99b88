import time
from contextlib import contextmanager
from dataclasses import dataclass

import numpy as np
import pytest

from qicausality.qcore import make_rng

_ACCEPTANCE: list["CriterionRecord"] = []


@pytest.fixture
def rng() -> np.random.Generator:
    return make_rng(12345)


@dataclass
class CriterionRecord:
    number: int
    title: str
    budget: float
    passed: bool = False
    elapsed: float = 0.0
    detail: str = ""

    def line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        text = f"[{status}] criterion {self.number:2d}: {self.title} ({self.elapsed:.2f} s, budget {self.budget:g} s)"
        return f"{text} | {self.detail}" if self.detail else text


@pytest.fixture
def criterion():
    """Context manager that times a block, enforces its budget and records PASS/FAIL."""

    @contextmanager
    def run(number: int, title: str, budget: float):
        rec = CriterionRecord(number, title, budget)
        _ACCEPTANCE.append(rec)
        start = time.perf_counter()
        try:
            yield rec
        finally:
            rec.elapsed = time.perf_counter() - start
        assert rec.elapsed < budget, f"criterion {number} took {rec.elapsed:.2f} s, budget {budget} s"
        rec.passed = True
        print(rec.line())

    return run


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for rec in sorted(_ACCEPTANCE, key=lambda r: r.number):
        terminalreporter.write_line(rec.line())
