"""Gate-level builders for the string operators and the Grover diffuser.

Every text register stores ``n`` symbols of ``c`` qubits each, symbol ``k``
occupying qubits ``start + k*c .. start + k*c + c - 1`` (most significant bit
first). Builders borrow qubits from the ``anc`` register and always return
them to ``|0>``.

Each build also carries a functional form: the classical map it performs on
register values, used to cross-check circuits on basis inputs.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache
from typing import Callable, Optional

from .circuit import (
    Circuit,
    CircuitError,
    Gate,
    RegisterMap,
    cswap,
    cx,
    h,
    mcx,
    mcz,
    x,
)
from .strings import phi, psi, rho, rho_in_text, rotate

Values = dict[str, int]


@dataclass(frozen=True)
class OperatorBuild:
    circuit: Circuit
    ancillas: tuple[int, ...]
    function: Optional[Callable[[Values], Values]] = field(default=None, compare=False)
    mode: str = "gate-level"

    @property
    def depth(self) -> int:
        return self.circuit.depth

    @property
    def size(self) -> int:
        return self.circuit.size


def log2_exact(n: int) -> int:
    if n < 1 or n & (n - 1):
        raise CircuitError(f"n={n} is not a power of two")
    return n.bit_length() - 1


# -- symbol packing ----------------------------------------------------------


def pack_symbols(symbols, c: int) -> int:
    value = 0
    for s in symbols:
        value = (value << c) | s
    return value


def unpack_symbols(value: int, n: int, c: int) -> tuple[int, ...]:
    mask = (1 << c) - 1
    return tuple((value >> (c * (n - 1 - k))) & mask for k in range(n))


def _symbol(layout: RegisterMap, reg: str, k: int, c: int) -> range:
    start = layout.span(reg)[0] + k * c
    return range(start, start + c)


# -- register layouts ----------------------------------------------------------


def rot_ancillas(n: int, c: int) -> int:
    return max(0, (n // 2) * c - 1)


def sfc_ancillas(n: int, d: int) -> int:
    if d == 0:
        return 0
    return n * ((d.bit_length() - 1) + bin(d).count("1"))


def lcs_layout(n: int, c: int) -> RegisterMap:
    """``i, j, x, y, d, r, out, anc`` for the LCS oracles."""
    p = log2_exact(n)
    anc = max([rot_ancillas(n, c)] + [sfc_ancillas(n, d) for d in range(n + 1)])
    return RegisterMap.build(
        [("i", p), ("j", p), ("x", n * c), ("y", n * c), ("d", p + 1), ("r", 1), ("out", 1), ("anc", anc)]
    )


def lps_layout(n: int, c: int) -> RegisterMap:
    """``i, x, d, r, out, anc`` for the palindrome oracles.

    ``r`` has two qubits so the paired oracle can test lengths ``d`` and
    ``d + 1`` side by side.
    """
    p = log2_exact(n)
    anc = max(rot_ancillas(n, c), n)
    return RegisterMap.build([("i", p), ("x", n * c), ("d", p + 1), ("r", 2), ("out", 1), ("anc", anc)])


def search_layout(name: str, n: int) -> RegisterMap:
    """A lone search register, for phase-function simulation."""
    return RegisterMap.build([(name, log2_exact(n))])


def text_geometry(layout: RegisterMap, reg: str, c: int) -> int:
    size = layout.size(reg)
    if size % c:
        raise CircuitError(f"register {reg!r} width {size} is not a multiple of c={c}")
    return size // c


# -- controlled rotation -------------------------------------------------------


def _fanout(source: int, pool: list[int], count: int) -> tuple[list[Gate], list[int]]:
    """CX doubling tree copying ``source`` until ``count`` qubits hold it."""
    holders, gates, free = [source], [], iter(pool)
    while len(holders) < count:
        grown = []
        for q in holders:
            if len(holders) + len(grown) >= count:
                break
            a = next(free)
            gates.append(cx(q, a))
            grown.append(a)
        holders += grown
    return gates, holders


def _reversal_pairs(lo: int, hi: int) -> list[tuple[int, int]]:
    return [(lo + t, hi - 1 - t) for t in range((hi - lo) // 2)]


def _rotation_gates(layout: RegisterMap, control: int, data_reg: str, c: int, shift: int) -> list[Gate]:
    """Right rotation by fixed ``shift`` symbols, controlled on one qubit."""
    n = text_geometry(layout, data_reg, c)
    width = (n // 2) * c
    anc = list(layout["anc"])[: max(0, width - 1)]
    fan, holders = _fanout(control, anc, width)
    gates = list(fan)
    for pairs in (_reversal_pairs(0, n), _reversal_pairs(0, shift) + _reversal_pairs(shift, n)):
        slot = 0
        for a, b in pairs:
            for qa, qb in zip(_symbol(layout, data_reg, a, c), _symbol(layout, data_reg, b, c)):
                gates.append(cswap(holders[slot], qa, qb))
                slot += 1
    gates.extend(reversed(fan))
    return gates


@lru_cache(maxsize=64)
def build_ctrl_rot(
    layout: RegisterMap, control_reg: str, data_reg: str, c: int, left: bool = False
) -> OperatorBuild:
    """Rotate ``data_reg`` right by the value of ``control_reg`` symbols.

    Each control bit of weight ``2**k`` drives a fixed rotation made of two
    reversal layers (the whole text, then both parts) of CSWAPs, with the
    control fanned out so every CSWAP in a layer has its own copy. ``left``
    builds the inverse rotation.
    """
    n = text_geometry(layout, data_reg, c)
    p = layout.size(control_reg)
    if (1 << p) != n:
        raise CircuitError(f"control register {control_reg!r} has {p} qubits for n={n}")
    gates: list[Gate] = []
    controls = list(layout[control_reg])
    for t, q in enumerate(controls):
        gates.extend(_rotation_gates(layout, q, data_reg, c, 1 << (p - 1 - t)))
    if left:
        gates.reverse()
    used = tuple(layout["anc"])[: rot_ancillas(n, c)]
    sign = -1 if left else 1

    def function(values: Values) -> Values:
        out = dict(values)
        symbols = unpack_symbols(values.get(data_reg, 0), n, c)
        s = (sign * values.get(control_reg, 0)) % n
        out[data_reg] = pack_symbols(rotate(symbols, s), c)
        return out

    direction = "rotl" if left else "rotr"
    circuit = Circuit(layout, gates, f"{direction}_{control_reg}_{data_reg}")
    return OperatorBuild(circuit, used, function)


# -- matching operators ----------------------------------------------------------


def _xnor_gates(layout: RegisterMap, c: int, positions, targets) -> list[Gate]:
    """``targets[k] ^= (x[k] == y[k])`` with ``y`` restored afterwards."""
    diff, flip, ands = [], [], []
    for k, t in zip(positions, targets):
        ys = _symbol(layout, "y", k, c)
        for qx, qy in zip(_symbol(layout, "x", k, c), ys):
            diff.append(cx(qx, qy))
            flip.append(x(qy))
        ands.append(mcx(tuple(ys), t))
    return diff + flip + ands + flip + diff


def _check_d(layout: RegisterMap, d: int, reg: str = "x", c: int = 1):
    n = text_geometry(layout, reg, c)
    if not 0 <= d <= n:
        raise CircuitError(f"d={d} outside [0, {n}]")
    return n


@lru_cache(maxsize=64)
def build_sfc(layout: RegisterMap, d: int, c: int) -> OperatorBuild:
    """Flip ``r`` iff ``x`` and ``y`` share a circular ``d``-window at one position.

    Symbol match bits go into an ancilla block; runs of length ``2**k`` are
    formed by shift-and-AND doubling, combined along the binary expansion of
    ``d``, and OR-ed into ``r``. Everything except ``r`` is uncomputed.
    """
    n = _check_d(layout, d, "x", c)
    r = layout["r"][0]
    if d == 0:
        return OperatorBuild(Circuit(layout, [x(r)], f"sfc_{d}"), (), _sfc_function(n, c, d))
    anc = list(layout["anc"])
    blocks = iter(range(0, len(anc), n))

    def block() -> list[int]:
        start = next(blocks)
        return anc[start : start + n]

    match = block()
    compute = _xnor_gates(layout, c, range(n), match)
    powers = {1: match}
    length = 1
    while 2 * length <= d:
        prev, nxt = powers[length], block()
        # even blocks first, then odd ones: each round touches every qubit once
        order = sorted(range(n), key=lambda i: (i // length) % 2)
        compute += [mcx((prev[i], prev[(i + length) % n]), nxt[i]) for i in order]
        length *= 2
        powers[length] = nxt
    run, covered = powers[length], length
    for k in reversed(range(length.bit_length() - 1)):
        part = 1 << k
        if d & part:
            piece, nxt = powers[part], block()
            compute += [mcx((run[i], piece[(i + covered) % n]), nxt[i]) for i in range(n)]
            run, covered = nxt, covered + part
    assert covered == d
    flip = [x(q) for q in run]
    write = flip + [mcx(run, r)] + flip + [x(r)]
    used = tuple(anc[: sfc_ancillas(n, d)])
    circuit = Circuit(layout, compute + write + compute[::-1], f"sfc_{d}")
    return OperatorBuild(circuit, used, _sfc_function(n, c, d))


def _sfc_function(n: int, c: int, d: int):
    def function(values: Values) -> Values:
        out = dict(values)
        xs = unpack_symbols(values.get("x", 0), n, c)
        ys = unpack_symbols(values.get("y", 0), n, c)
        out["r"] = values.get("r", 0) ^ psi(xs, ys, 0, d)
        return out

    return function


@lru_cache(maxsize=64)
def build_fpm(layout: RegisterMap, d: int, c: int) -> OperatorBuild:
    """Flip ``r`` iff the first ``d`` symbols of ``x`` and ``y`` agree.

    The per-bit differences are formed in place on ``y``, so a single
    ``d*c``-controlled X computes the prefix AND without ancillae.
    """
    n = _check_d(layout, d, "x", c)
    r = layout["r"][0]
    diff, flip, controls = [], [], []
    for k in range(d):
        for qx, qy in zip(_symbol(layout, "x", k, c), _symbol(layout, "y", k, c)):
            diff.append(cx(qx, qy))
            flip.append(x(qy))
            controls.append(qy)
    gates = diff + flip + [mcx(controls, r)] + flip + diff

    def function(values: Values) -> Values:
        out = dict(values)
        xs = unpack_symbols(values.get("x", 0), n, c)
        ys = unpack_symbols(values.get("y", 0), n, c)
        out["r"] = values.get("r", 0) ^ phi(xs, ys, 0, 0, d)
        return out

    return OperatorBuild(Circuit(layout, gates, f"fpm_{d}"), (), function)


@lru_cache(maxsize=64)
def build_ipm(
    layout: RegisterMap, d: int, c: int, guard: int | None = None, slot: int = 0
) -> OperatorBuild:
    """Flip ``r[slot]`` iff the length-``d`` prefix of ``x`` is a palindrome.

    Mirrored symbol pairs are compared in place. With ``guard`` set to a
    sentinel code, every prefix symbol must also differ from that code; the
    guard bits live in ancillae and are uncomputed.
    """
    n = _check_d(layout, d, "x", c)
    r = layout["r"][slot]
    weight = 1 << (layout.size("r") - 1 - slot)
    anc = list(layout["anc"])
    guard_gates: list[Gate] = []
    controls: list[int] = []
    if guard is not None:
        if not 0 <= guard < (1 << c):
            raise CircuitError(f"guard code {guard} does not fit {c} bits")
        polarity = [x(q) for k in range(d) for b, q in enumerate(_symbol(layout, "x", k, c)) if not (guard >> (c - 1 - b)) & 1]
        equal = [mcx(tuple(_symbol(layout, "x", k, c)), anc[k]) for k in range(d)]
        negate = [x(anc[k]) for k in range(d)]
        guard_gates = polarity + equal + polarity + negate
        controls += anc[:d]
    diff, flip = [], []
    for k in range(d // 2):
        for qa, qb in zip(_symbol(layout, "x", k, c), _symbol(layout, "x", d - 1 - k, c)):
            diff.append(cx(qa, qb))
            flip.append(x(qb))
            controls.append(qb)
    compute = guard_gates + diff + flip
    gates = compute + [mcx(controls, r)] + compute[::-1]

    def function(values: Values) -> Values:
        out = dict(values)
        xs = unpack_symbols(values.get("x", 0), n, c)
        bit = rho(xs, 0, d) if guard is None else rho_in_text(xs, 0, d, guard)
        out["r"] = values.get("r", 0) ^ (bit * weight)
        return out

    used = tuple(anc[:d]) if guard is not None else ()
    return OperatorBuild(Circuit(layout, gates, f"ipm_{d}_{slot}"), used, function)


@lru_cache(maxsize=64)
def build_diffuser(layout: RegisterMap, search_reg: str) -> OperatorBuild:
    """Reflection about the uniform superposition of ``search_reg``.

    H, X, multi-controlled Z, X, H: this is ``I - 2|s><s|``, i.e. the textbook
    ``2|s><s| - I`` up to a global phase of -1.
    """
    qubits = list(layout[search_reg])
    if not qubits:
        return OperatorBuild(Circuit(layout, [], "diffuser"), ())
    hs = [h(q) for q in qubits]
    xs = [x(q) for q in qubits]
    return OperatorBuild(Circuit(layout, hs + xs + [mcz(qubits)] + xs + hs, "diffuser"), ())
