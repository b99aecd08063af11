"""Reversible-circuit IR: gates over named registers, inversion, composition,
weighted ASAP depth and a line-oriented text dump."""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from typing import Iterable, Iterator, Mapping, Sequence

KINDS = ("H", "X", "Z", "CX", "CCX", "MCX", "MCZ", "SWAP", "CSWAP")
PERMUTATION_KINDS = frozenset({"X", "CX", "CCX", "MCX", "SWAP", "CSWAP"})

_ARITY = {
    # kind: (targets, minimum controls, maximum controls)
    "H": (1, 0, 0),
    "X": (1, 0, 0),
    "Z": (1, 0, 0),
    "CX": (1, 1, 1),
    "CCX": (1, 2, 2),
    "MCX": (1, 1, None),
    "MCZ": (1, 1, None),
    "SWAP": (2, 0, 0),
    "CSWAP": (2, 1, 1),
}


class CircuitError(ValueError):
    """Malformed gate, register layout or circuit combination."""


@dataclass(frozen=True, slots=True)
class Gate:
    kind: str
    targets: tuple[int, ...]
    controls: tuple[int, ...] = ()

    def __post_init__(self):
        arity = _ARITY.get(self.kind)
        if arity is None:
            raise CircuitError(f"unknown gate kind {self.kind!r}")
        n_targets, lo, hi = arity
        if len(self.targets) != n_targets:
            raise CircuitError(f"{self.kind} takes {n_targets} target(s), got {self.targets}")
        if len(self.controls) < lo or (hi is not None and len(self.controls) > hi):
            raise CircuitError(f"{self.kind} has a bad control count: {self.controls}")
        qubits = self.targets + self.controls
        if len(set(qubits)) != len(qubits):
            raise CircuitError(f"{self.kind} reuses a qubit: {qubits}")
        if min(qubits) < 0:
            raise CircuitError(f"negative qubit id in {qubits}")

    @property
    def qubits(self) -> tuple[int, ...]:
        return self.controls + self.targets

    def __str__(self) -> str:
        controls = ",".join(map(str, self.controls)) or "-"
        return f"{self.kind} {','.join(map(str, self.targets))} {controls}"


def h(q: int) -> Gate:
    return Gate("H", (q,))


def x(q: int) -> Gate:
    return Gate("X", (q,))


def z(q: int) -> Gate:
    return Gate("Z", (q,))


def cx(control: int, target: int) -> Gate:
    return Gate("CX", (target,), (control,))


def swap(a: int, b: int) -> Gate:
    return Gate("SWAP", (a, b))


def cswap(control: int, a: int, b: int) -> Gate:
    return Gate("CSWAP", (a, b), (control,))


def mcx(controls: Sequence[int], target: int) -> Gate:
    """Multi-controlled X, narrowed to X/CX/CCX when the control count allows."""
    controls = tuple(controls)
    if not controls:
        return x(target)
    if len(controls) == 1:
        return cx(controls[0], target)
    if len(controls) == 2:
        return Gate("CCX", (target,), controls)
    return Gate("MCX", (target,), controls)


def mcz(qubits: Sequence[int]) -> Gate:
    """Phase flip when every qubit in ``qubits`` is 1."""
    qubits = tuple(qubits)
    if len(qubits) == 1:
        return z(qubits[0])
    return Gate("MCZ", (qubits[-1],), qubits[:-1])


@dataclass(frozen=True)
class RegisterMap:
    """Named, contiguous, pairwise disjoint qubit ranges.

    Register values are big-endian: the first qubit of a register holds its
    most significant bit. The global basis index is big-endian as well, so
    qubit ``q`` is bit ``width - 1 - q`` of the index.
    """

    registers: tuple[tuple[str, int, int], ...]

    @classmethod
    def build(cls, spec: Iterable[tuple[str, int]]) -> "RegisterMap":
        regs, start = [], 0
        for name, size in spec:
            if size < 0:
                raise CircuitError(f"register {name!r} has negative width")
            regs.append((name, start, size))
            start += size
        names = [r[0] for r in regs]
        if len(set(names)) != len(names):
            raise CircuitError(f"duplicate register names in {names}")
        return cls(tuple(regs))

    @property
    def width(self) -> int:
        return sum(size for _, _, size in self.registers)

    @property
    def names(self) -> tuple[str, ...]:
        return tuple(r[0] for r in self.registers)

    def __contains__(self, name: str) -> bool:
        return any(r[0] == name for r in self.registers)

    def span(self, name: str) -> tuple[int, int]:
        for reg, start, size in self.registers:
            if reg == name:
                return start, size
        raise KeyError(f"no register named {name!r}")

    def __getitem__(self, name: str) -> range:
        start, size = self.span(name)
        return range(start, start + size)

    def size(self, name: str) -> int:
        return self.span(name)[1]

    def shift(self, name: str) -> int:
        """Bit offset of the register's least significant bit in a basis index."""
        start, size = self.span(name)
        return self.width - start - size

    def value(self, index: int, name: str) -> int:
        start, size = self.span(name)
        return (index >> (self.width - start - size)) & ((1 << size) - 1)

    def embed(self, assignments: Mapping[str, int]) -> int:
        index = 0
        for name, value in assignments.items():
            size = self.size(name)
            if not 0 <= value < (1 << size):
                raise CircuitError(f"value {value} does not fit register {name!r} ({size} qubits)")
            index |= value << self.shift(name)
        return index

    def extend(self, name: str, size: int) -> "RegisterMap":
        return RegisterMap.build([(r, s) for r, _, s in self.registers] + [(name, size)])


class Circuit:
    """An immutable ordered gate list over a register map."""

    __slots__ = ("gates", "layout", "label", "_cache")

    def __init__(
        self,
        layout: RegisterMap,
        gates: Iterable[Gate] = (),
        label: str = "",
        check: bool = True,
    ):
        self.layout = layout
        self.gates = tuple(gates)
        self.label = label
        self._cache = {}
        if not check:
            return
        width = layout.width
        for g in self.gates:
            if max(g.targets + g.controls) >= width:
                raise CircuitError(f"gate {g} exceeds circuit width {width}")

    def __len__(self) -> int:
        return len(self.gates)

    def __iter__(self) -> Iterator[Gate]:
        return iter(self.gates)

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, Circuit)
            and self.layout == other.layout
            and self.gates == other.gates
        )

    def __hash__(self):
        return hash((self.layout, self.gates))

    def __repr__(self) -> str:
        return f"Circuit({self.label!r}, size={len(self.gates)}, width={self.layout.width})"

    @property
    def size(self) -> int:
        return len(self.gates)

    @property
    def depth(self) -> int:
        if "depth" not in self._cache:
            self._cache["depth"] = depth(self)
        return self._cache["depth"]

    @property
    def counts(self) -> dict[str, int]:
        if "counts" not in self._cache:
            self._cache["counts"] = gate_counts(self)
        return self._cache["counts"]


def append(c: Circuit, g: Gate) -> Circuit:
    return Circuit(c.layout, c.gates + (g,), c.label)


def inverse(c: Circuit) -> Circuit:
    """Reverse the gate order; every gate in the set is self-inverse."""
    label = c.label[:-4] if c.label.endswith("_inv") else (c.label + "_inv" if c.label else "")
    return Circuit(c.layout, reversed(c.gates), label, check=False)


def compose(*circuits: Circuit, label: str = "") -> Circuit:
    if not circuits:
        raise CircuitError("nothing to compose")
    layout = circuits[0].layout
    for c in circuits[1:]:
        if c.layout != layout:
            raise CircuitError("cannot compose circuits over different register maps")
    gates: list[Gate] = []
    for c in circuits:
        gates.extend(c.gates)
    return Circuit(layout, gates, label, check=False)


def _ceil_log2(k: int) -> int:
    return (k - 1).bit_length()


def mcx_depth(k: int) -> int:
    """Layers used by :func:`expand_multicontrolled` for an X with ``k`` controls."""
    if k <= 2:
        return 1
    return 2 * (_ceil_log2(k) - 1) + 1


def gate_weight(g: Gate) -> int:
    if g.kind == "MCX":
        return mcx_depth(len(g.controls))
    if g.kind == "MCZ":
        return mcx_depth(len(g.controls)) + 2
    return 1


def depth(c: Circuit | Iterable[Gate], weighted: bool = True) -> int:
    """ASAP layer count: each gate starts after every earlier gate on its qubits.

    With ``weighted`` set, multi-controlled gates occupy as many layers as their
    bounded-arity expansion.
    """
    gates = c.gates if isinstance(c, Circuit) else c
    ready: dict[int, int] = {}
    get = ready.get
    total = 0
    for g in gates:
        qubits = g.controls + g.targets
        start = max(get(q, 0) for q in qubits)
        end = start + (gate_weight(g) if weighted else 1)
        for q in qubits:
            ready[q] = end
        if end > total:
            total = end
    return total


def layers(c: Circuit) -> list[list[Gate]]:
    """Unit-weight ASAP layering."""
    ready: dict[int, int] = {}
    out: list[list[Gate]] = []
    for g in c.gates:
        start = max(ready.get(q, 0) for q in g.qubits)
        for q in g.qubits:
            ready[q] = start + 1
        if start == len(out):
            out.append([])
        out[start].append(g)
    return out


def gate_counts(c: Circuit | Iterable[Gate]) -> dict[str, int]:
    gates = c.gates if isinstance(c, Circuit) else c
    counts = Counter(g.kind for g in gates)
    return {kind: counts.get(kind, 0) for kind in KINDS}


def expand_multicontrolled(c: Circuit) -> Circuit:
    """Rewrite MCX/MCZ into CCX/CX/H networks over an extra ``mcx`` ancilla register.

    Controls are AND-ed pairwise into ancillae, level by level, the final pair
    drives a Toffoli onto the target and the tree is uncomputed.
    """
    need = 0
    for g in c.gates:
        if g.kind in ("MCX", "MCZ"):
            need = max(need, len(g.controls) - 2)
    layout = c.layout.extend("mcx", need) if need else c.layout
    pool = list(layout["mcx"]) if need else []
    out: list[Gate] = []
    for g in c.gates:
        if g.kind == "MCX":
            out.extend(_and_tree(g.controls, g.targets[0], pool))
        elif g.kind == "MCZ":
            t = g.targets[0]
            out.append(h(t))
            out.extend(_and_tree(g.controls, t, pool))
            out.append(h(t))
        else:
            out.append(g)
    return Circuit(layout, out, c.label)


def _and_tree(controls: Sequence[int], target: int, pool: Sequence[int]) -> list[Gate]:
    if len(controls) <= 2:
        return [mcx(controls, target)]
    compute: list[Gate] = []
    level, free = list(controls), iter(pool)
    while len(level) > 2:
        nxt = []
        for a, b in zip(level[0::2], level[1::2]):
            anc = next(free)
            compute.append(mcx((a, b), anc))
            nxt.append(anc)
        if len(level) % 2:
            nxt.append(level[-1])
        level = nxt
    return compute + [mcx(level, target)] + compute[::-1]


def dump(c: Circuit) -> str:
    """One gate per line, ``KIND targets controls`` with ``-`` for no controls."""
    header = [f"# label {c.label or '-'}"]
    header += [f"# register {name} {start} {size}" for name, start, size in c.layout.registers]
    return "\n".join(header + [str(g) for g in c.gates]) + "\n"


def parse(text: str) -> Circuit:
    regs: list[tuple[str, int, int]] = []
    label = ""
    gates: list[Gate] = []
    for line in text.splitlines():
        line = line.strip()
        if not line:
            continue
        if line.startswith("#"):
            parts = line[1:].split()
            if parts[:1] == ["register"]:
                regs.append((parts[1], int(parts[2]), int(parts[3])))
            elif parts[:1] == ["label"]:
                label = "" if parts[1] == "-" else parts[1]
            continue
        kind, targets, controls = line.split()
        gates.append(
            Gate(
                kind,
                tuple(int(t) for t in targets.split(",")),
                () if controls == "-" else tuple(int(q) for q in controls.split(",")),
            )
        )
    return Circuit(RegisterMap(tuple(regs)), gates, label)
