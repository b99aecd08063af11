"""Exhaustive oracle checks and the Grover closed-form check.

Every basis assignment of the oracle inputs is pushed through the gate-level
circuit in one bit-sliced batch and compared with a vectorised evaluation of
the classical predicate. The same pass confirms that every register other
than ``out`` comes back unchanged.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .circuit import Circuit
from .grover import (
    build_U_phi,
    build_U_psi,
    build_U_rho,
    functional_oracle,
    grover_search,
    diffuser_for,
    success_probability,
    uniform_state,
)
from .operators import OperatorBuild, build_sfc, lcs_layout, lps_layout
from .sim import evaluate_basis

FAULTS = ("sfc",)


@dataclass(frozen=True)
class SuiteResult:
    name: str
    passed: bool
    checked: int
    mismatches: int
    unrestored: int
    detail: str = ""

    def line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        return f"{status} {self.name}: {self.checked} cases, {self.mismatches} wrong, {self.unrestored} unrestored {self.detail}".rstrip()


def _symbols(values: np.ndarray, n: int, c: int) -> np.ndarray:
    mask = np.uint64((1 << c) - 1)
    shifts = np.array([c * (n - 1 - k) for k in range(n)], dtype=np.uint64)
    return ((values[:, None] >> shifts[None, :]) & mask).astype(np.int64)


def _windows_equal(a: np.ndarray, b: np.ndarray, a_start, b_start, d: int) -> np.ndarray:
    n = a.shape[1]
    rows = np.arange(len(a))
    ok = np.ones(len(a), dtype=bool)
    for k in range(d):
        ok &= a[rows, (a_start + k) % n] == b[rows, (b_start + k) % n]
    return ok


def phi_batch(xs, ys, i, j, d) -> np.ndarray:
    return _windows_equal(xs, ys, i - j, i, d)


def psi_batch(xs, ys, j, d) -> np.ndarray:
    n = xs.shape[1]
    out = np.zeros(len(xs), dtype=bool)
    for i in range(n):
        out |= phi_batch(xs, ys, np.full(len(xs), i), j, d)
    return out


def rho_batch(xs, i, d) -> np.ndarray:
    n = xs.shape[1]
    rows = np.arange(len(xs))
    ok = np.ones(len(xs), dtype=bool)
    for k in range(d // 2):
        ok &= xs[rows, (i + k) % n] == xs[rows, (i + d - 1 - k) % n]
    return ok


def _grid(**ranges) -> dict[str, np.ndarray]:
    names = list(ranges)
    mesh = np.meshgrid(*[np.arange(ranges[k], dtype=np.uint64) for k in names], indexing="ij")
    return {k: m.ravel() for k, m in zip(names, mesh)}


def _compare(circuit: Circuit, inputs: dict, expected: np.ndarray) -> tuple[int, int]:
    out = evaluate_basis(circuit, inputs)
    wrong = int(np.count_nonzero(out["out"].astype(bool) != expected))
    moved = np.zeros(len(expected), dtype=bool)
    for name, _, _ in circuit.layout.registers:
        if name == "out":
            continue
        before = inputs.get(name, np.zeros(len(expected), dtype=np.uint64))
        moved |= np.asarray(out[name] != before, dtype=bool)
    return wrong, int(np.count_nonzero(moved))


def corrupt_sfc(build: OperatorBuild) -> OperatorBuild:
    """Drop the final negation of ``r``, so every window answer is inverted."""
    r = build.circuit.layout["r"][0]
    gates = list(build.circuit.gates)
    for k in range(len(gates) - 1, -1, -1):
        if gates[k].kind == "X" and gates[k].targets == (r,):
            del gates[k]
            break
    return OperatorBuild(Circuit(build.circuit.layout, gates, "sfc_faulty"), build.ancillas, build.function)


def oracle_suite(kind: str, n: int = 4, c: int = 2, fault: Optional[str] = None) -> SuiteResult:
    """All basis inputs of ``U_psi``, ``U_phi`` or ``U_rho`` at size ``n``."""
    if fault is not None and fault not in FAULTS:
        raise ValueError(f"unknown fault {fault!r}; expected one of {FAULTS}")
    texts = 1 << (n * c)
    checked = wrong = moved = 0
    layout = lps_layout(n, c) if kind == "rho" else lcs_layout(n, c)
    for d in range(n + 1):
        if kind == "psi":
            sfc = build_sfc(layout, d, c)
            if fault == "sfc":
                sfc = corrupt_sfc(sfc)
            circuit = build_U_psi(layout, d, c, sfc).circuit
            inputs = _grid(j=n, x=texts, y=texts)
            expected = psi_batch(_symbols(inputs["x"], n, c), _symbols(inputs["y"], n, c), inputs["j"].astype(np.int64), d)
        elif kind == "phi":
            circuit = build_U_phi(layout, d, c).circuit
            inputs = _grid(i=n, j=n, x=texts, y=texts)
            expected = phi_batch(
                _symbols(inputs["x"], n, c), _symbols(inputs["y"], n, c),
                inputs["i"].astype(np.int64), inputs["j"].astype(np.int64), d,
            )
        elif kind == "rho":
            circuit = build_U_rho(layout, d, c).circuit
            inputs = _grid(i=n, x=texts)
            expected = rho_batch(_symbols(inputs["x"], n, c), inputs["i"].astype(np.int64), d)
        else:
            raise ValueError(f"unknown oracle kind {kind!r}")
        inputs["d"] = np.full(len(expected), d, dtype=np.uint64)
        w, m = _compare(circuit, inputs, expected)
        checked += len(expected)
        wrong += w
        moved += m
    name = f"U_{kind} exhaustive n={n} c={c}" + (f" fault={fault}" if fault and kind == "psi" else "")
    return SuiteResult(name, wrong == 0 and moved == 0, checked, wrong, moved)


GROVER_CASES = ((16, 1, 3), (16, 2, 2), (64, 1, 6))


def grover_law_suite(cases=GROVER_CASES, tol: float = 1e-9) -> SuiteResult:
    """Exact success probability after ``k`` iterations against the closed form."""
    worst = 0.0
    for N, m, k in cases:
        table = np.zeros(N, dtype=bool)
        table[:m] = True
        oracle = functional_oracle("law", 0, "s", table)
        result = grover_search(uniform_state(oracle.layout, "s"), oracle, diffuser_for(oracle), k, np.random.default_rng(0))
        worst = max(worst, abs(result.probability - success_probability(N, m, k)))
    return SuiteResult("Grover closed form", worst <= tol, len(cases), int(worst > tol), 0, f"(max error {worst:.1e})")


def selftest(fault: Optional[str] = None, n: int = 4, c: int = 2) -> list[SuiteResult]:
    return [oracle_suite(kind, n, c, fault) for kind in ("psi", "phi", "rho")] + [grover_law_suite()]


def all_texts(length: int, chars: str = "01"):
    return ["".join(t) for t in itertools.product(chars, repeat=length)]
