"""Independent reference implementations used to derive frozen test values.

These deliberately avoid the package's own predicates: substrings are
compared as Python string slices and quantum evolutions as dense matrices.
"""

import numpy as np


def naive_lcs(a: str, b: str) -> int:
    best = 0
    for i in range(len(a)):
        for j in range(i + 1, len(a) + 1):
            if a[i:j] in b:
                best = max(best, j - i)
    return best


def naive_lps(s: str) -> int:
    best = 0
    for i in range(len(s)):
        for j in range(i + 1, len(s) + 1):
            if s[i:j] == s[i:j][::-1]:
                best = max(best, j - i)
    return best


def dense_grover(N: int, marked, k: int) -> np.ndarray:
    """State after ``k`` textbook iterations, built from explicit matrices."""
    s = np.full(N, 1 / np.sqrt(N))
    oracle = np.eye(N)
    for m in marked:
        oracle[m, m] = -1
    diffuser = 2 * np.outer(s, s) - np.eye(N)
    state = s.copy()
    for _ in range(k):
        state = diffuser @ (oracle @ state)
    return state


# -- acceptance summary -----------------------------------------------------------

import pytest

_LINES = pytest.StashKey[list]()


@pytest.fixture
def verdict(request):
    """Record one PASS/FAIL line for the terminal summary and return the flag."""

    def record(number: int, ok: bool, text: str) -> bool:
        line = f"{'PASS' if ok else 'FAIL'} criterion {number}: {text}"
        print(line)
        request.config.stash.setdefault(_LINES, []).append(line)
        return ok

    return record


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    lines = config.stash.get(_LINES, [])
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in sorted(lines, key=lambda s: int(s.split()[2].rstrip(":"))):
            terminalreporter.write_line(line)
