"""Boolean oracles for the three window predicates, phase kickback, and Grover
search with either a fixed or a randomized-doubling iteration schedule.

An :class:`OracleSpec` is either gate-level (a reversible circuit writing the
predicate into ``out``) or functional (a phase applied straight to the
search register from a classical truth table). Both expose the same
``apply`` and ``marked`` interface so the search loop does not care which.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np

from .circuit import Circuit, RegisterMap, compose, cx, h, inverse, mcx, x
from .operators import (
    OperatorBuild,
    build_ctrl_rot,
    build_diffuser,
    build_fpm,
    build_ipm,
    build_sfc,
    search_layout,
    text_geometry,
    unpack_symbols,
)
from .sim import (
    SparseState,
    apply_circuit,
    apply_phase_function,
    init_basis,
    measure_register,
)
from .strings import phi, psi, rho, rho_in_text

SCHEDULES = ("randomized-doubling", "fixed")

Values = dict[str, int]


@dataclass(frozen=True)
class GroverConfig:
    """Search settings shared by every phase of a test.

    ``restarts`` is the number of times a whole test is repeated before it is
    declared failed; ``shots`` bounds the measure-and-check attempts of one
    phase within a restart.
    """

    schedule: str = "randomized-doubling"
    restarts: int = 5
    shots: int = 8
    seed: int = 0

    def __post_init__(self):
        if self.schedule not in SCHEDULES:
            raise ValueError(f"unknown schedule {self.schedule!r}; expected one of {SCHEDULES}")
        if self.restarts < 1:
            raise ValueError("restarts must be at least 1")
        if self.shots < 1:
            raise ValueError("shots must be at least 1")


@dataclass(frozen=True)
class OracleSpec:
    kind: str
    d: int
    search: str
    layout: RegisterMap
    predicate: Callable[[Values], int] = field(compare=False)
    reads: tuple[str, ...] = ()
    circuit: Optional[Circuit] = None

    @property
    def functional(self) -> bool:
        return self.circuit is None

    def evaluate(self, values: Values) -> int:
        return int(self.predicate(values))

    def apply(self, state: SparseState) -> SparseState:
        """One oracle call; gate-level oracles need ``out`` prepared in ``|->``."""
        if self.circuit is not None:
            return apply_circuit(state, self.circuit)
        return apply_phase_function(state, self.search, lambda v: self.predicate({self.search: v}))

    def marked(self, state: SparseState) -> float:
        """Exact probability that measuring ``search`` yields a solution."""
        layout = self.layout
        total = 0.0
        for key, amp in state.amplitudes.items():
            values = {name: layout.value(key, name) for name in self.reads}
            if self.predicate(values):
                total += abs(amp) ** 2
        return total


# -- gate-level oracles -----------------------------------------------------------


def _boolean(
    layout: RegisterMap, parts: list[Circuit], core: Circuit, label: str, copy: Circuit | None = None
) -> Circuit:
    """``parts``, ``core``, ``copy``, ``core`` inverse, ``parts`` inverse.

    ``copy`` defaults to CX(r -> out).
    """
    if copy is None:
        copy = Circuit(layout, [cx(layout["r"][0], layout["out"][0])])
    tail = [inverse(core)] + [inverse(p) for p in reversed(parts)]
    return compose(*parts, core, copy, *tail, label=label)


def _symbols(values: Values, reg: str, n: int, c: int):
    return unpack_symbols(values[reg], n, c)


def build_U_psi(layout: RegisterMap, d: int, c: int, sfc: OperatorBuild | None = None) -> OracleSpec:
    """``out ^= psi(x, y, j, d)``: rotate ``x`` by ``j``, test for a shared window, undo.

    ``sfc`` replaces the window check, which lets tests inject a faulty one.
    """
    n = text_geometry(layout, "x", c)
    rot = build_ctrl_rot(layout, "j", "x", c)
    core = (sfc or build_sfc(layout, d, c)).circuit
    circuit = _boolean(layout, [rot.circuit], core, f"U_psi_{d}")

    def predicate(v: Values) -> int:
        return psi(_symbols(v, "x", n, c), _symbols(v, "y", n, c), v["j"], d)

    return OracleSpec("psi", d, "j", layout, predicate, ("j", "x", "y"), circuit)


def build_U_phi(layout: RegisterMap, d: int, c: int) -> OracleSpec:
    """``out ^= phi(x, y, i, j, d)``.

    ``x`` is rotated right by ``j`` and then both texts left by ``i``, which
    brings the window starting at ``i`` to the front for a prefix match.
    """
    n = text_geometry(layout, "x", c)
    parts = [
        build_ctrl_rot(layout, "j", "x", c).circuit,
        build_ctrl_rot(layout, "i", "x", c, left=True).circuit,
        build_ctrl_rot(layout, "i", "y", c, left=True).circuit,
    ]
    circuit = _boolean(layout, parts, build_fpm(layout, d, c).circuit, f"U_phi_{d}")

    def predicate(v: Values) -> int:
        return phi(_symbols(v, "x", n, c), _symbols(v, "y", n, c), v["i"], v["j"], d)

    return OracleSpec("phi", d, "i", layout, predicate, ("i", "j", "x", "y"), circuit)


def build_U_rho(layout: RegisterMap, d: int, c: int, guard: int | None = None) -> OracleSpec:
    """``out ^= rho(x, i, d)``, or its sentinel-free variant when ``guard`` is set."""
    n = text_geometry(layout, "x", c)
    parts = [build_ctrl_rot(layout, "i", "x", c, left=True).circuit]
    circuit = _boolean(layout, parts, build_ipm(layout, d, c, guard).circuit, f"U_rho_{d}")

    def predicate(v: Values) -> int:
        xs = _symbols(v, "x", n, c)
        return rho(xs, v["i"], d) if guard is None else rho_in_text(xs, v["i"], d, guard)

    return OracleSpec("rho", d, "i", layout, predicate, ("i", "x"), circuit)


def build_U_rho_pair(layout: RegisterMap, d: int, c: int, guard: int | None = None) -> OracleSpec:
    """``out ^= rho(x, i, d) or rho(x, i, d + 1)``, sentinel-guarded when ``guard`` is set.

    Palindromes shrink two symbols at a time, so only this paired predicate
    is monotone in ``d``; it is what the length search probes. Lengths
    ``d`` and ``d + 1`` go to ``r[0]`` and ``r[1]`` and are OR-ed into ``out``.
    """
    n = text_geometry(layout, "x", c)
    if layout.size("r") < 2:
        raise ValueError("the paired palindrome oracle needs a two-qubit r register")
    parts = [build_ctrl_rot(layout, "i", "x", c, left=True).circuit]
    cores = [build_ipm(layout, d, c, guard, 0).circuit]
    if d < n:
        cores.append(build_ipm(layout, d + 1, c, guard, 1).circuit)
    core = compose(*cores)
    r0, r1 = layout["r"][0], layout["r"][1]
    out = layout["out"][0]
    flips = [x(r0), x(r1)]
    copy = Circuit(layout, flips + [mcx((r0, r1), out), x(out)] + flips)
    circuit = _boolean(layout, parts, core, f"U_rho2_{d}", copy)

    def test(xs, i, length):
        if length > n:
            return 0
        return rho(xs, i, length) if guard is None else rho_in_text(xs, i, length, guard)

    def predicate(v: Values) -> int:
        xs = _symbols(v, "x", n, c)
        return int(test(xs, v["i"], d) or test(xs, v["i"], d + 1))

    return OracleSpec("rho2", d, "i", layout, predicate, ("i", "x"), circuit)


def functional_oracle(kind: str, d: int, search: str, table) -> OracleSpec:
    """Phase oracle over a lone search register, driven by a truth table."""
    table = np.asarray(table, dtype=bool)
    n = len(table)
    flags = tuple(bool(t) for t in table)

    def predicate(v: Values) -> int:
        return int(flags[v[search]])

    return OracleSpec(kind, d, search, search_layout(search, n), predicate, (search,))


# -- kickback, diffusion and search ----------------------------------------------


def kickback_circuit(layout: RegisterMap, out_reg: str = "out") -> Circuit:
    q = layout[out_reg][0]
    return Circuit(layout, [x(q), h(q)], "kickback")


def prepare_kickback(state: SparseState, out_reg: str = "out") -> SparseState:
    """Put ``out`` (assumed ``|0>``) into ``|->`` so a boolean oracle acts as a phase."""
    return apply_circuit(state, kickback_circuit(state.layout, out_reg))


def uniform_circuit(layout: RegisterMap, search: str) -> Circuit:
    return Circuit(layout, [h(q) for q in layout[search]], "uniform")


def success_probability(N: int, m: int, k: int) -> float:
    """Closed form ``sin^2((2k+1) * asin(sqrt(m/N)))``."""
    return math.sin((2 * k + 1) * math.asin(math.sqrt(m / N))) ** 2


def fixed_iterations(N: int) -> int:
    return int(math.floor(math.pi / 4 * math.sqrt(N)))


def max_cap(N: int) -> int:
    return max(1, math.ceil(math.sqrt(N)))


def draw_iterations(cfg: GroverConfig, N: int, cap: int, rng: np.random.Generator) -> int:
    """Iteration count for one shot under the configured schedule."""
    if cfg.schedule == "fixed":
        return fixed_iterations(N)
    return int(rng.integers(cap))


def next_cap(cap: int, N: int) -> int:
    return min(2 * cap, max_cap(N))


@dataclass(frozen=True)
class SearchResult:
    candidate: int
    probability: float
    iterations: int


def grover_search(
    state: SparseState,
    oracle: OracleSpec,
    diffuser: OperatorBuild,
    iterations: int,
    rng: np.random.Generator,
    trace: Optional[Callable[[SparseState], None]] = None,
) -> SearchResult:
    """Run ``iterations`` rounds of oracle then diffuser and measure the search register.

    ``state`` must already hold the uniform superposition (and ``|->`` on
    ``out`` for gate-level oracles). The reported probability is the exact
    pre-measurement weight of solutions. ``trace`` sees the state after each
    round.
    """
    for _ in range(iterations):
        state = oracle.apply(state)
        state = apply_circuit(state, diffuser.circuit)
        if trace is not None:
            trace(state)
    probability = oracle.marked(state)
    outcome, _ = measure_register(state, oracle.search, rng)
    return SearchResult(outcome.value, probability, iterations)


def uniform_state(layout: RegisterMap, search: str, basis: Values | None = None, kickback: bool = True) -> SparseState:
    """Basis ``basis`` with ``search`` in uniform superposition and ``out`` in ``|->``."""
    state = apply_circuit(init_basis(layout, basis), uniform_circuit(layout, search))
    if kickback and "out" in layout:
        state = prepare_kickback(state)
    return state


def diffuser_for(oracle: OracleSpec) -> OperatorBuild:
    return build_diffuser(oracle.layout, oracle.search)


def search_amplitudes(state: SparseState, search: str) -> np.ndarray:
    """Amplitude vector of the search register, other registers factored out.

    With ``out`` in ``|->`` the ``out=0`` branch carries each amplitude
    scaled by ``1/sqrt(2)``; it is rescaled here so gate-level and
    functional states compare directly.
    """
    layout = state.layout
    vec = np.zeros(1 << layout.size(search), dtype=complex)
    kicked = "out" in layout
    for key, amp in state.amplitudes.items():
        if kicked:
            if layout.value(key, "out"):
                continue
            amp = amp * math.sqrt(2)
        vec[layout.value(key, search)] += amp
    return vec
