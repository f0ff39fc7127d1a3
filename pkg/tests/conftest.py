from fractions import Fraction

import pytest

from besc.triple_system import dilute, generate_random_linear, generate_steiner, validate

from oracles import FANO

STS_ORDERS = (7, 9, 13, 15, 19, 21, 25, 27)


def instance_corpus():
    """Deterministic list of (label, system): Steiner, random and diluted instances (>= 200)."""
    out = []
    for n in STS_ORDERS:
        out.append((f"sts{n}", generate_steiner(n)))
    densities = [Fraction(1, 10), Fraction(1, 4), Fraction(1, 2), Fraction(3, 4), Fraction(9, 10), Fraction(1)]
    for n in (6, 10, 17, 24, 33, 45, 60):
        for d in densities:
            for seed in range(4):
                out.append((f"rand{n}_{d}_{seed}", generate_random_linear(n, d, seed)))
    for n in (9, 13, 15, 19, 21, 25, 27, 31, 45):
        H = generate_steiner(n)
        for d in (Fraction(17, 20), Fraction(2, 3), Fraction(1, 3)):
            for seed in range(2):
                out.append((f"dil{n}_{d}_{seed}", dilute(H, d, seed)))
    return out


@pytest.fixture(scope="session")
def corpus():
    return instance_corpus()


@pytest.fixture
def fano():
    return validate(7, FANO)


@pytest.fixture
def single():
    return validate(3, [(0, 1, 2)])


_acceptance: list[tuple[str, str, float]] = []


def pytest_runtest_logreport(report):
    if "test_acceptance.py" not in report.nodeid:
        return
    if report.when == "call" or (report.when == "setup" and report.outcome != "passed"):
        name = report.nodeid.split("::")[-1]
        _acceptance.append((name, report.outcome, report.duration))


def pytest_terminal_summary(terminalreporter):
    if not _acceptance:
        return
    terminalreporter.section("acceptance criteria")
    for name, outcome, duration in _acceptance:
        verdict = "PASS" if outcome == "passed" else "FAIL"
        terminalreporter.write_line(f"{verdict}  {name}  ({duration:.2f} s)")
