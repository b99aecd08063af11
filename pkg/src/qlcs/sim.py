"""Exact sparse statevector simulation.

Only the search registers are ever in superposition; the text registers hold
basis values that are functions of them. A state is therefore kept as a map
from basis index to amplitude with at most a few ``n`` entries.

Runs of permutation gates are applied bit-sliced: the support is transposed
into one Python integer per qubit (bit ``k`` = that qubit in row ``k``) so
that each gate costs a couple of big-integer operations regardless of how
many basis states are present.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Mapping, Sequence, Union

import numpy as np

from .circuit import PERMUTATION_KINDS, Circuit, CircuitError, Gate, RegisterMap

PRUNE = 1e-14
_SQRT_HALF = 1 / math.sqrt(2)

Rng = Union[np.random.Generator, int, None]


@dataclass
class SparseState:
    layout: RegisterMap
    amplitudes: dict[int, complex]

    def __len__(self) -> int:
        return len(self.amplitudes)

    @property
    def norm(self) -> float:
        return math.sqrt(sum(abs(a) ** 2 for a in self.amplitudes.values()))

    def values(self, name: str) -> dict[int, float]:
        """Marginal distribution of one register."""
        out: dict[int, float] = {}
        layout = self.layout
        for key, amp in self.amplitudes.items():
            v = layout.value(key, name)
            out[v] = out.get(v, 0.0) + abs(amp) ** 2
        return out

    def amplitude(self, assignments: Mapping[str, int]) -> complex:
        return self.amplitudes.get(self.layout.embed(assignments), 0j)


@dataclass(frozen=True)
class MeasurementOutcome:
    register: str
    value: int
    probability: float


def init_basis(layout: RegisterMap, assignments: Mapping[str, int] | None = None) -> SparseState:
    return SparseState(layout, {layout.embed(assignments or {}): 1 + 0j})


def _mask(layout: RegisterMap, q: int) -> int:
    return 1 << (layout.width - 1 - q)


def apply_gate(s: SparseState, g: Gate) -> SparseState:
    layout = s.layout
    if max(g.qubits) >= layout.width:
        raise CircuitError(f"gate {g} exceeds state width {layout.width}")
    kind = g.kind
    t = _mask(layout, g.targets[0])
    cmask = 0
    for q in g.controls:
        cmask |= _mask(layout, q)
    amps = s.amplitudes
    if kind == "H":
        out: dict[int, complex] = {}
        for key, a in amps.items():
            a = a * _SQRT_HALF
            low, high = key & ~t, key | t
            out[low] = out.get(low, 0j) + a
            out[high] = out.get(high, 0j) + (-a if key & t else a)
        return SparseState(layout, {k: a for k, a in out.items() if abs(a) >= PRUNE})
    if kind in ("Z", "MCZ"):
        full = cmask | t
        return SparseState(layout, {k: (-a if k & full == full else a) for k, a in amps.items()})
    if kind in ("X", "CX", "CCX", "MCX"):
        return SparseState(
            layout, {(k ^ t if k & cmask == cmask else k): a for k, a in amps.items()}
        )
    # SWAP / CSWAP
    u = _mask(layout, g.targets[1])
    both = t | u
    out = {}
    for k, a in amps.items():
        if k & cmask == cmask and bool(k & t) != bool(k & u):
            k ^= both
        out[k] = a
    return SparseState(layout, out)


# -- bit-sliced permutation runs -------------------------------------------

_OPS = {"X": 0, "CX": 1, "CCX": 2, "MCX": 3, "SWAP": 4, "CSWAP": 5}


def _lower(gates: Sequence[Gate]) -> list[tuple]:
    prog = []
    for g in gates:
        op = _OPS[g.kind]
        t = g.targets[0]
        if op == 0:
            prog.append((0, t, 0, 0))
        elif op == 1:
            prog.append((1, t, g.controls[0], 0))
        elif op == 2:
            prog.append((2, t, g.controls[0], g.controls[1]))
        elif op == 3:
            prog.append((3, t, g.controls, 0))
        elif op == 4:
            prog.append((4, t, g.targets[1], 0))
        else:
            prog.append((5, t, g.targets[1], g.controls[0]))
    return prog


def run_program(prog: Sequence[tuple], cols: list[int], ones: int) -> None:
    """Apply a lowered permutation program to bit-sliced columns in place."""
    for op, t, a, b in prog:
        if op == 2:
            cols[t] ^= cols[a] & cols[b]
        elif op == 1:
            cols[t] ^= cols[a]
        elif op == 5:
            m = (cols[t] ^ cols[a]) & cols[b]
            cols[t] ^= m
            cols[a] ^= m
        elif op == 0:
            cols[t] ^= ones
        elif op == 3:
            acc = ones
            for q in a:
                acc &= cols[q]
            cols[t] ^= acc
        else:
            cols[t], cols[a] = cols[a], cols[t]


def _program(c: Circuit) -> list:
    """Split a circuit into ('perm', lowered run) and ('gate', Gate) segments."""
    if "program" in c._cache:
        return c._cache["program"]
    segments: list = []
    run: list[Gate] = []

    def flush():
        if len(run) >= 8:
            segments.append(("perm", _lower(run)))
        else:
            segments.extend(("gate", g) for g in run)
        run.clear()

    for g in c.gates:
        if g.kind in PERMUTATION_KINDS:
            run.append(g)
        else:
            flush()
            segments.append(("gate", g))
    flush()
    c._cache["program"] = segments
    return segments


def _to_columns(keys: Sequence[int], width: int) -> list[int]:
    nbytes = (width + 7) // 8
    pad = nbytes * 8 - width
    raw = np.frombuffer(b"".join(k.to_bytes(nbytes, "big") for k in keys), dtype=np.uint8)
    bits = np.unpackbits(raw.reshape(len(keys), nbytes), axis=1)[:, pad:]
    packed = np.packbits(bits.T, axis=1, bitorder="little")
    return [int.from_bytes(row.tobytes(), "little") for row in packed]


def _from_columns(cols: Sequence[int], rows: int, width: int) -> list[int]:
    nb = (rows + 7) // 8
    raw = np.frombuffer(b"".join(c.to_bytes(nb, "little") for c in cols), dtype=np.uint8)
    bits = np.unpackbits(raw.reshape(width, nb), axis=1, bitorder="little")[:, :rows]
    nbytes = (width + 7) // 8
    pad = nbytes * 8 - width
    full = np.zeros((rows, nbytes * 8), dtype=np.uint8)
    full[:, pad:] = bits.T
    packed = np.packbits(full, axis=1)
    return [int.from_bytes(row.tobytes(), "big") for row in packed]


def _permute(s: SparseState, prog: list) -> SparseState:
    keys = list(s.amplitudes)
    width = s.layout.width
    cols = _to_columns(keys, width)
    run_program(prog, cols, (1 << len(keys)) - 1)
    new_keys = _from_columns(cols, len(keys), width)
    return SparseState(s.layout, dict(zip(new_keys, s.amplitudes.values())))


def apply_circuit(s: SparseState, c: Circuit) -> SparseState:
    if c.layout != s.layout:
        raise CircuitError("circuit and state use different register maps")
    for kind, item in _program(c):
        s = _permute(s, item) if kind == "perm" else apply_gate(s, item)
    return s


def evaluate_basis(c: Circuit, inputs: Mapping[str, np.ndarray]) -> dict[str, np.ndarray]:
    """Run a permutation circuit on many basis inputs at once.

    ``inputs`` maps register names to equal-length integer arrays; registers
    not mentioned start at 0. Returns the value of every register afterwards
    (object arrays of Python ints for registers wider than 63 qubits).
    """
    layout = c.layout
    for g in c.gates:
        if g.kind not in PERMUTATION_KINDS:
            raise CircuitError(f"{g.kind} is not a permutation gate")
    rows = len(next(iter(inputs.values()))) if inputs else 1
    cols: list[int] = [0] * layout.width
    for name, values in inputs.items():
        start, size = layout.span(name)
        if size > 63:
            raise CircuitError(f"register {name!r} is too wide for batch input")
        values = np.asarray(values, dtype=np.uint64)
        for t in range(size):
            bit = ((values >> np.uint64(size - 1 - t)) & np.uint64(1)).astype(np.uint8)
            cols[start + t] = int.from_bytes(np.packbits(bit, bitorder="little").tobytes(), "little")
    if "batch" not in c._cache:
        c._cache["batch"] = _lower(c.gates)
    run_program(c._cache["batch"], cols, (1 << rows) - 1)
    nb = (rows + 7) // 8

    def bits(col: int) -> np.ndarray:
        raw = np.frombuffer(col.to_bytes(nb, "little"), dtype=np.uint8)
        return np.unpackbits(raw, bitorder="little")[:rows]

    out = {}
    for name, start, size in layout.registers:
        if size <= 63:
            acc = np.zeros(rows, dtype=np.uint64)
            for t in range(size):
                acc = (acc << np.uint64(1)) | bits(cols[start + t]).astype(np.uint64)
        else:
            acc = np.zeros(rows, dtype=object)
            for t in range(size):
                acc = acc * 2 + bits(cols[start + t]).astype(object)
        out[name] = acc
    return out


# -- phases, measurement, readout -------------------------------------------


def _selector(layout: RegisterMap, reg: Union[str, Sequence[str]]):
    if isinstance(reg, str):
        return lambda key: layout.value(key, reg)
    names = tuple(reg)
    return lambda key: tuple(layout.value(key, r) for r in names)


def apply_phase_function(
    s: SparseState, reg: Union[str, Sequence[str]], predicate: Callable[..., int]
) -> SparseState:
    """Negate every amplitude whose register value satisfies ``predicate``."""
    pick = _selector(s.layout, reg)
    return SparseState(
        s.layout, {k: (-a if predicate(pick(k)) else a) for k, a in s.amplitudes.items()}
    )


def register_probability(
    s: SparseState, reg: Union[str, Sequence[str]], predicate: Callable[..., int]
) -> float:
    pick = _selector(s.layout, reg)
    return float(sum(abs(a) ** 2 for k, a in s.amplitudes.items() if predicate(pick(k))))


def _generator(rng: Rng) -> np.random.Generator:
    if isinstance(rng, np.random.Generator):
        return rng
    return np.random.default_rng(rng)


def measure_register(s: SparseState, reg: str, rng: Rng = None) -> tuple[MeasurementOutcome, SparseState]:
    """Born-rule sample of one register; always consumes exactly one uniform draw."""
    gen = _generator(rng)
    marginal = s.values(reg)
    total = sum(marginal.values())
    u = gen.random() * total
    acc = 0.0
    ordered = sorted(marginal.items())
    value, prob = ordered[-1]
    for v, pv in ordered:
        acc += pv
        if u < acc:
            value, prob = v, pv
            break
    layout = s.layout
    scale = 1 / math.sqrt(prob)
    kept = {k: a * scale for k, a in s.amplitudes.items() if layout.value(k, reg) == value}
    return MeasurementOutcome(reg, value, prob / total), SparseState(layout, kept)


def dump_state(s: SparseState) -> str:
    """One ``index real imag`` line per stored amplitude, sorted by index."""
    return "".join(f"{k} {a.real:.17g} {a.imag:.17g}\n" for k, a in sorted(s.amplitudes.items()))
