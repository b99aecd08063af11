"""Classical control: the binary search over window lengths and the iterative
quantum test run at each probe.

A test at length ``d`` is a sequence of restarts. Each restart runs a search
phase and, for LCS, a verification phase; a phase is a handful of Grover
shots, each followed by a single oracle call on the measured candidate whose
``out`` bit is measured. The last phase's check is the final check, so a
verified test always carries a real witness.

Randomness for restart ``t`` of binary-search iteration ``k`` comes from
``numpy.random.default_rng([seed, k, t])``.
"""

from __future__ import annotations

import json
import math
from collections import Counter
from dataclasses import asdict, dataclass, field
from typing import Optional

import numpy as np

from .circuit import KINDS, Circuit, RegisterMap
from .grover import (
    GroverConfig,
    OracleSpec,
    build_U_phi,
    build_U_psi,
    build_U_rho,
    build_U_rho_pair,
    diffuser_for,
    draw_iterations,
    functional_oracle,
    grover_search,
    kickback_circuit,
    next_cap,
    uniform_circuit,
    uniform_state,
)
from .operators import lcs_layout, lps_layout, pack_symbols
from .sim import apply_circuit, init_basis, measure_register
from .strings import (
    Alphabet,
    InputError,
    MatchWitness,
    PaddedText,
    brute_lcs,
    brute_lps,
    pad_input,
    phi,
    phi_table,
    psi_table,
    rho_in_text,
    rho_table,
)

MODES = ("gate", "abstract", "classical")
GATE_LIMIT = 16
ABSTRACT_LIMIT = 1 << 16
DIGITS = 12


class CapacityError(RuntimeError):
    """The requested size is beyond what the chosen mode will simulate."""


def check_capacity(n: int, mode: str) -> None:
    if mode not in MODES:
        raise ValueError(f"unknown mode {mode!r}; expected one of {MODES}")
    if mode == "gate" and n > GATE_LIMIT:
        raise CapacityError(
            f"gate mode simulates padded n <= {GATE_LIMIT}, got n={n}; "
            "use --mode abstract or the resources command"
        )
    if mode == "abstract" and n > ABSTRACT_LIMIT:
        raise CapacityError(f"abstract mode is limited to padded n <= {ABSTRACT_LIMIT}, got n={n}")


# -- resource accounting ----------------------------------------------------------


@dataclass
class Tally:
    """Running totals over every circuit a run executes."""

    qubits: int = 0
    depth: int = 0
    gates: Counter = field(default_factory=Counter)
    oracle_calls: int = 0

    def circuit(self, c: Circuit, times: int = 1) -> None:
        if times <= 0:
            return
        self.qubits = max(self.qubits, c.layout.width)
        self.depth += c.depth * times
        for kind, count in c.counts.items():
            if count:
                self.gates[kind] += count * times

    def oracle(self, spec: OracleSpec, times: int = 1) -> None:
        if times <= 0:
            return
        self.oracle_calls += times
        if spec.circuit is not None:
            self.circuit(spec.circuit, times)
        else:
            self.qubits = max(self.qubits, spec.layout.width)
            self.depth += times
            self.gates["ORACLE"] += times

    def as_dict(self) -> dict:
        gates = {kind: int(self.gates.get(kind, 0)) for kind in KINDS}
        if "ORACLE" in self.gates:
            gates["ORACLE"] = int(self.gates["ORACLE"])
        return {"qubits": int(self.qubits), "depth": int(self.depth), "gates": gates}


# -- engines ---------------------------------------------------------------------


class GateEngine:
    """Full register simulation with gate-level oracles and kickback."""

    mode = "gate"

    def __init__(self, x: PaddedText, y: Optional[PaddedText] = None):
        self.x, self.y = x, y
        self.n, self.c = x.n, x.width
        self.layout: RegisterMap = (lcs_layout if y is not None else lps_layout)(self.n, self.c)
        self.base = {"x": pack_symbols(x, self.c)}
        if y is not None:
            self.base["y"] = pack_symbols(y, self.c)
        self._oracles: dict = {}

    def _cached(self, key, build):
        if key not in self._oracles:
            self._oracles[key] = build()
        return self._oracles[key]

    def psi(self, d: int) -> OracleSpec:
        return self._cached(("psi", d), lambda: build_U_psi(self.layout, d, self.c))

    def phi(self, d: int, j: int) -> OracleSpec:
        return self._cached(("phi", d), lambda: build_U_phi(self.layout, d, self.c))

    def rho(self, d: int) -> OracleSpec:
        return self._cached(("rho", d), lambda: build_U_rho(self.layout, d, self.c, self.x.sentinel))

    def rho_pair(self, d: int) -> OracleSpec:
        return self._cached(("rho2", d), lambda: build_U_rho_pair(self.layout, d, self.c, self.x.sentinel))

    def values(self, d: int, fixed: dict) -> dict:
        return {**self.base, "d": d, **fixed}

    def prepare(self, oracle: OracleSpec, d: int, fixed: dict, tally: Tally):
        layout = self.layout
        tally.circuit(uniform_circuit(layout, oracle.search))
        tally.circuit(kickback_circuit(layout))
        return uniform_state(layout, oracle.search, self.values(d, fixed))

    def check(self, oracle: OracleSpec, d: int, fixed: dict, value: int, rng, tally: Tally) -> bool:
        state = init_basis(self.layout, self.values(d, {**fixed, oracle.search: value}))
        state = apply_circuit(state, oracle.circuit)
        tally.oracle(oracle)
        outcome, _ = measure_register(state, "out", rng)
        return bool(outcome.value)


class AbstractEngine:
    """Search register only; oracles are phases read from classical tables."""

    mode = "abstract"

    def __init__(self, x: PaddedText, y: Optional[PaddedText] = None):
        self.x, self.y = x, y
        self.n = x.n
        self._oracles: dict = {}
        self._out = RegisterMap.build([("out", 1)])

    def psi(self, d: int) -> OracleSpec:
        key = ("psi", d)
        if key not in self._oracles:
            self._oracles[key] = functional_oracle("psi", d, "j", psi_table(self.x, self.y, d))
        return self._oracles[key]

    def phi(self, d: int, j: int) -> OracleSpec:
        key = ("phi", d, j)
        if key not in self._oracles:
            self._oracles[key] = functional_oracle("phi", d, "i", phi_table(self.x, self.y, j, d))
        return self._oracles[key]

    def rho(self, d: int) -> OracleSpec:
        key = ("rho", d)
        if key not in self._oracles:
            self._oracles[key] = functional_oracle("rho", d, "i", rho_table(self.x, d, self.x.sentinel))
        return self._oracles[key]

    def rho_pair(self, d: int) -> OracleSpec:
        key = ("rho2", d)
        if key not in self._oracles:
            self._oracles[key] = functional_oracle("rho2", d, "i", palindrome_pair_table(self.x, d))
        return self._oracles[key]

    def prepare(self, oracle: OracleSpec, d: int, fixed: dict, tally: Tally):
        tally.circuit(uniform_circuit(oracle.layout, oracle.search))
        return uniform_state(oracle.layout, oracle.search)

    def check(self, oracle: OracleSpec, d: int, fixed: dict, value: int, rng, tally: Tally) -> bool:
        tally.oracle(oracle)
        bit = oracle.evaluate({oracle.search: value})
        outcome, _ = measure_register(init_basis(self._out, {"out": bit}), "out", rng)
        return bool(outcome.value)


def make_engine(mode: str, x: PaddedText, y: Optional[PaddedText] = None):
    check_capacity(x.n, mode)
    if mode == "gate":
        return GateEngine(x, y)
    if mode == "abstract":
        return AbstractEngine(x, y)
    raise ValueError(f"mode {mode!r} has no quantum engine")


# -- the iterative test --------------------------------------------------------------


@dataclass(frozen=True)
class TestOutcome:
    verified: bool
    witness: Optional[MatchWitness]
    search_success_prob: float
    verify_success_prob: Optional[float]
    restarts: int

    __test__ = False  # not a pytest class


@dataclass
class _Phase:
    cap: int = 1
    probability: Optional[float] = None


def _run_phase(engine, oracle, d, fixed, phase: _Phase, cfg, rng, tally) -> Optional[int]:
    """Grover shots with checks; returns the first candidate whose check passes."""
    N = engine.n
    diffuser = diffuser_for(oracle)
    for _ in range(cfg.shots):
        k = draw_iterations(cfg, N, phase.cap, rng)
        state = engine.prepare(oracle, d, fixed, tally)
        result = grover_search(state, oracle, diffuser, k, rng)
        tally.oracle(oracle, k)
        tally.circuit(diffuser.circuit, k)
        phase.probability = result.probability
        if engine.check(oracle, d, fixed, result.candidate, rng, tally):
            return result.candidate
        phase.cap = next_cap(phase.cap, N)
    return None


def _rng(cfg: GroverConfig, iteration: int, restart: int) -> np.random.Generator:
    return np.random.default_rng([cfg.seed, iteration, restart])


def _probability(p: Optional[float]) -> Optional[float]:
    return None if p is None else round(float(p), DIGITS)


def quantum_test_lcs(engine, d: int, cfg: GroverConfig, iteration: int = 0, tally: Tally | None = None) -> TestOutcome:
    """Search over rotations ``j``, verify over starts ``i``, check ``phi``."""
    tally = tally if tally is not None else Tally()
    search, verify = _Phase(), _Phase()
    for restart in range(cfg.restarts):
        rng = _rng(cfg, iteration, restart)
        j = _run_phase(engine, engine.psi(d), d, {}, search, cfg, rng, tally)
        if j is None:
            continue
        i = _run_phase(engine, engine.phi(d, j), d, {"j": j}, verify, cfg, rng, tally)
        if i is None:
            continue
        assert phi(engine.x, engine.y, i, j, d), "final check accepted a non-solution"
        return TestOutcome(
            True, MatchWitness(i, j, d), _probability(search.probability), _probability(verify.probability), restart + 1
        )
    return TestOutcome(False, None, _probability(search.probability), _probability(verify.probability), cfg.restarts)


def palindrome_pair_table(x: PaddedText, d: int) -> np.ndarray:
    """Starts of a sentinel-free palindrome of length ``d`` or ``d + 1``."""
    table = rho_table(x, d, x.sentinel)
    if d < x.n:
        table = table | rho_table(x, d + 1, x.sentinel)
    return table


def quantum_test_lps(engine, d: int, cfg: GroverConfig, iteration: int = 0, tally: Tally | None = None) -> TestOutcome:
    """Search over starts ``i`` for a palindrome of length ``d`` or ``d + 1``.

    The search phase's check is the final check. One more oracle call on the
    accepted start tells the two lengths apart; the witness carries the
    longer one when it holds.
    """
    tally = tally if tally is not None else Tally()
    search = _Phase()
    for restart in range(cfg.restarts):
        rng = _rng(cfg, iteration, restart)
        i = _run_phase(engine, engine.rho_pair(d), d, {}, search, cfg, rng, tally)
        if i is None:
            continue
        length = d
        if d < engine.n and engine.check(engine.rho(d + 1), d + 1, {}, i, rng, tally):
            length = d + 1
        assert rho_in_text(engine.x, i, length, engine.x.sentinel), "final check accepted a non-solution"
        return TestOutcome(True, MatchWitness(i, 0, length), _probability(search.probability), None, restart + 1)
    return TestOutcome(False, None, _probability(search.probability), None, cfg.restarts)


# -- reports -----------------------------------------------------------------------


@dataclass(frozen=True)
class IterationRecord:
    l: int  # noqa: E741
    r: int
    d: int
    verified: bool
    search_success_prob: Optional[float]
    verify_success_prob: Optional[float]
    restarts: int
    false_negative: bool


@dataclass(frozen=True)
class RunReport:
    problem: str
    n: int
    raw_len: int
    answer: int
    witness: dict
    iterations: tuple[IterationRecord, ...]
    resources: dict
    oracle_calls: int
    seed: int
    mode: str
    schedule: str

    def to_dict(self) -> dict:
        out = asdict(self)
        out["iterations"] = [asdict(it) for it in self.iterations]
        return out

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2) + "\n"

    @classmethod
    def from_dict(cls, data: dict) -> "RunReport":
        data = dict(data)
        data["iterations"] = tuple(IterationRecord(**it) for it in data["iterations"])
        return cls(**data)

    @classmethod
    def from_json(cls, text: str) -> "RunReport":
        return cls.from_dict(json.loads(text))


def _binary_search(test, n: int, exists, cfg: GroverConfig):
    """Max-true search over ``[0, n]`` with the ceiling midpoint."""
    lo, hi = 0, n
    records, best, k = [], None, 0
    while lo < hi:
        d = (lo + hi + 1) // 2
        outcome = test(d, k)
        records.append(
            IterationRecord(
                lo, hi, d, outcome.verified, outcome.search_success_prob, outcome.verify_success_prob,
                outcome.restarts, (not outcome.verified) and bool(exists(d)),
            )
        )
        if outcome.verified:
            lo, best = outcome.witness.d, outcome.witness
        else:
            hi = d - 1
        k += 1
    return lo, best, tuple(records)


def _texts(x_raw: str, y_raw: str, alphabet: Alphabet | None):
    if len(x_raw) != len(y_raw):
        raise InputError(f"texts must have equal length, got {len(x_raw)} and {len(y_raw)}")
    alphabet = alphabet or Alphabet.for_texts(x_raw, y_raw)
    return pad_input(x_raw, "$", alphabet), pad_input(y_raw, "%", alphabet)


def _empty_resources() -> dict:
    return Tally().as_dict()


def _lcs_witness(w: Optional[MatchWitness], n: int, raw_len: int) -> dict:
    if w is None or w.d == 0:
        return {"x_pos": None, "y_pos": None}
    x_pos, y_pos = (w.i - w.j) % n, w.i
    assert x_pos + w.d <= raw_len and y_pos + w.d <= raw_len, "witness reaches into the padding"
    return {"x_pos": x_pos, "y_pos": y_pos}


def lcs(
    x_raw: str,
    y_raw: str,
    cfg: GroverConfig = GroverConfig(),
    mode: str = "abstract",
    alphabet: Alphabet | None = None,
) -> RunReport:
    """Longest common substring length of two equal-length texts."""
    x, y = _texts(x_raw, y_raw, alphabet)
    n = x.n
    check_capacity(n, mode)
    if mode == "classical":
        length, w = brute_lcs(x, y)
        return RunReport(
            "lcs", n, x.raw_len, length, _lcs_witness(w, n, x.raw_len), (), _empty_resources(), 0,
            cfg.seed, mode, cfg.schedule,
        )
    engine = make_engine(mode, x, y)
    tally = Tally()

    def exists(d):
        return psi_table(x, y, d).any()

    answer, w, records = _binary_search(
        lambda d, k: quantum_test_lcs(engine, d, cfg, k, tally), n, exists, cfg
    )
    return RunReport(
        "lcs", n, x.raw_len, answer, _lcs_witness(w, n, x.raw_len), records, tally.as_dict(),
        tally.oracle_calls, cfg.seed, mode, cfg.schedule,
    )


def lps(
    x_raw: str,
    cfg: GroverConfig = GroverConfig(),
    mode: str = "abstract",
    alphabet: Alphabet | None = None,
) -> RunReport:
    """Longest palindromic substring length of one text."""
    x = pad_input(x_raw, "$", alphabet or Alphabet.for_texts(x_raw))
    n = x.n
    check_capacity(n, mode)
    if mode == "classical":
        length, start = brute_lps(x)
        witness = {"x_pos": start if length else None, "y_pos": None}
        return RunReport("lps", n, x.raw_len, length, witness, (), _empty_resources(), 0, cfg.seed, mode, cfg.schedule)
    engine = make_engine(mode, x)
    tally = Tally()

    def exists(d):
        return palindrome_pair_table(x, d).any()

    answer, w, records = _binary_search(
        lambda d, k: quantum_test_lps(engine, d, cfg, k, tally), n, exists, cfg
    )
    witness = {"x_pos": w.i if w is not None and answer else None, "y_pos": None}
    return RunReport(
        "lps", n, x.raw_len, answer, witness, records, tally.as_dict(), tally.oracle_calls,
        cfg.seed, mode, cfg.schedule,
    )


def max_iterations(n: int) -> int:
    """Upper bound on binary-search probes over ``[0, n]``."""
    return math.ceil(math.log2(n)) + 1 if n > 1 else 1
