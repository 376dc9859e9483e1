import random

import pytest

from dynsubmod.oracles import CoverageOracle, CoverageSpec

ACCEPTANCE_LINES: list[str] = []


def record(criterion: int, ok: bool, detail: str) -> None:
    line = f"criterion {criterion}: {'PASS' if ok else 'FAIL'}  {detail}"
    ACCEPTANCE_LINES.append(line)
    print(line)


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES, key=lambda s: int(s.split()[1].rstrip(":"))):
            terminalreporter.write_line(line)


@pytest.fixture
def rng():
    return random.Random(12345)


@pytest.fixture
def abc_coverage():
    # covers(1) = {a, b}, covers(2) = {b, c} with a, b, c = 0, 1, 2
    return CoverageOracle(CoverageSpec(3, {1: {0, 1}, 2: {1, 2}}))
