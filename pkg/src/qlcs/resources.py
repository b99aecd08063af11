"""Worst-case resource estimates without simulation.

The worst path through the length search probes ``d = n/2, 3n/4, ..., n``
(every probe succeeds). At each probe every restart spends all of its shots
in every phase, each shot running the largest iteration count the schedule
can draw. The estimate builds each circuit once and sums depths and gate
counts over that path.
"""

from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass
from typing import Iterable, Sequence

from .circuit import KINDS, Circuit
from .driver import Tally
from .grover import (
    GroverConfig,
    build_U_phi,
    build_U_psi,
    build_U_rho,
    build_U_rho_pair,
    diffuser_for,
    fixed_iterations,
    kickback_circuit,
    max_cap,
    uniform_circuit,
)
from .operators import lcs_layout, log2_exact, lps_layout

PROBLEMS = ("lcs", "lps")
LOG_POWER = {"lcs": 4, "lps": 3}
SWEEP = tuple(1 << p for p in range(4, 13))


@dataclass(frozen=True)
class ResourceRow:
    n: int
    problem: str
    qubits: int
    gates: dict
    depth: int
    oracle_calls: int
    ratio: float
    log_power: int

    def as_dict(self) -> dict:
        out = {
            "n": self.n,
            "problem": self.problem,
            "qubits": self.qubits,
            "depth": self.depth,
            "oracle_calls": self.oracle_calls,
            "log_power": self.log_power,
            "ratio": self.ratio,
        }
        out.update({f"gates_{k}": v for k, v in self.gates.items()})
        return out


def worst_path(n: int) -> list[int]:
    """Probed lengths when every test succeeds."""
    lo, hi, path = 0, n, []
    while lo < hi:
        d = (lo + hi + 1) // 2
        path.append(d)
        lo = d
    return path


def worst_iterations(cfg: GroverConfig, N: int) -> int:
    if cfg.schedule == "fixed":
        return fixed_iterations(N)
    return max_cap(N) - 1


def _shots(tally: Tally, oracle, cfg: GroverConfig, n: int) -> None:
    layout = oracle.layout
    shots = cfg.restarts * cfg.shots
    k = worst_iterations(cfg, n)
    tally.circuit(uniform_circuit(layout, oracle.search), shots)
    tally.circuit(kickback_circuit(layout), shots)
    tally.oracle(oracle, shots * (k + 1))
    tally.circuit(diffuser_for(oracle).circuit, shots * k)


def estimate(n: int, problem: str, cfg: GroverConfig = GroverConfig(), c: int = 2) -> ResourceRow:
    """Resource row for one size; ``c`` is the symbol width (2 for binary texts)."""
    log2_exact(n)
    if problem not in PROBLEMS:
        raise ValueError(f"unknown problem {problem!r}; expected one of {PROBLEMS}")
    tally = Tally()
    if problem == "lcs":
        layout = lcs_layout(n, c)
        for d in worst_path(n):
            _shots(tally, build_U_psi(layout, d, c), cfg, n)
            _shots(tally, build_U_phi(layout, d, c), cfg, n)
    else:
        layout = lps_layout(n, c)
        for d in worst_path(n):
            _shots(tally, build_U_rho_pair(layout, d, c, guard=(1 << c) - 2), cfg, n)
            if d < n:
                tally.oracle(build_U_rho(layout, d + 1, c, guard=(1 << c) - 2))
    k = LOG_POWER[problem]
    ratio = tally.depth / (math.sqrt(n) * math.log2(n) ** k)
    summary = tally.as_dict()
    return ResourceRow(
        n, problem, layout.width, summary["gates"], tally.depth, tally.oracle_calls, round(ratio, 6), k
    )


def estimate_resources(
    ns: int | Iterable[int], problem: str, cfg: GroverConfig = GroverConfig(), c: int = 2
) -> list[ResourceRow]:
    """Rows for each size in ``ns`` (a single ``n`` gives one row)."""
    sizes = [ns] if isinstance(ns, int) else list(ns)
    return [estimate(n, problem, cfg, c) for n in sizes]


def rows_to_csv(rows: Sequence[ResourceRow]) -> str:
    buf = io.StringIO()
    fields = ["n", "problem", "qubits", "depth", "oracle_calls", "log_power", "ratio"] + [f"gates_{k}" for k in KINDS]
    writer = csv.DictWriter(buf, fieldnames=fields, lineterminator="\n")
    writer.writeheader()
    for row in rows:
        writer.writerow(row.as_dict())
    return buf.getvalue()


def spread(rows: Sequence[ResourceRow]) -> float:
    """max/min of the normalized depth column."""
    ratios = [r.ratio for r in rows]
    return max(ratios) / min(ratios)
