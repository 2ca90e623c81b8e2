"""Shared fixtures and independent brute-force oracles.

The oracles here use plain loops over ``itertools.product`` and never touch
the package's vectorized code space, so they can check it.
"""

from itertools import product

import pytest

from hybridmind.game import GameConfig, Row, Feedback

DEFAULT = GameConfig()
DESK = GameConfig.with_colors(4, 6)

WORKED_ROWS = [
    ("BBYYR", (1, 1)),
    ("OOBBB", (0, 0)),
    ("RRRGG", (3, 1)),
    ("RGRYG", (3, 2)),
    ("GRRYG", (3, 2)),
    ("RRGYG", (5, 0)),
]
WORKED_SECRET = tuple("RRGYG")


def worked(n=6):
    return tuple(Row(tuple(g), Feedback(*f)) for g, f in WORKED_ROWS[:n])


def brute_score(guess, secret):
    whites = 0
    for a, b in zip(guess, secret):
        if a == b:
            whites += 1
    total = 0
    for c in set(guess):
        total += min(list(guess).count(c), list(secret).count(c))
    return (whites, total - whites)


def brute_codes(config):
    return [tuple(c) for c in product(config.palette, repeat=config.positions)]


def brute_consistent(code, rows):
    return all(brute_score(r.guess, code) == tuple(r.feedback) for r in rows)


def color_count(code, c):
    return sum(1 for x in code if x == c)


# -- acceptance reporting -------------------------------------------------------

_criteria = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(number, title): acceptance criterion")


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    report = outcome.get_result()
    marker = item.get_closest_marker("criterion")
    if marker is None:
        return
    if report.when == "call" or (report.when == "setup" and report.outcome != "passed"):
        number, title = marker.args
        passed = report.outcome == "passed"
        prev = _criteria.get(number, (title, True))
        _criteria[number] = (title, prev[1] and passed)


def pytest_terminal_summary(terminalreporter):
    if not _criteria:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(_criteria):
        title, passed = _criteria[number]
        terminalreporter.write_line(f"criterion {number:>2}: {'PASS' if passed else 'FAIL'}  {title}")
