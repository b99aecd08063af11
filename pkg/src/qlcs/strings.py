"""Classical string layer: symbol encoding, sentinel padding, rotations and
the exact window predicates used as ground truth by every quantum routine.

Texts are sequences of integer symbol codes. For an alphabet of ``sigma``
ordinary characters, codes ``0 .. sigma-1`` are the characters themselves,
``sigma`` is the ``'$'`` sentinel (pads ``x``) and ``sigma + 1`` is the
``'%'`` sentinel (pads ``y``). All window predicates index circularly.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterator, Sequence, Union

import numpy as np

DOLLAR = "$"
PERCENT = "%"
BINARY = "01"

Symbols = Sequence[int]


class InputError(ValueError):
    """Raised for malformed or inconsistent text inputs."""


@dataclass(frozen=True)
class Alphabet:
    """Ordered set of ordinary characters plus the two reserved sentinels."""

    chars: str

    def __post_init__(self):
        if len(set(self.chars)) != len(self.chars):
            raise InputError(f"duplicate characters in alphabet {self.chars!r}")
        if DOLLAR in self.chars or PERCENT in self.chars:
            raise InputError("'$' and '%' are reserved sentinels")

    @classmethod
    def binary(cls) -> "Alphabet":
        return cls(BINARY)

    @classmethod
    def for_texts(cls, *texts: str) -> "Alphabet":
        """Binary alphabet when every text is over {0,1}, else the sorted union."""
        used = set().union(*texts) if texts else set()
        if used <= set(BINARY):
            return cls.binary()
        return cls("".join(sorted(used)))

    @property
    def sigma(self) -> int:
        return len(self.chars)

    @property
    def width(self) -> int:
        """Bits per symbol, ``ceil(log2(sigma + 2))``."""
        return max(1, (self.sigma + 1).bit_length())

    def sentinel(self, mark: str) -> int:
        if mark == DOLLAR:
            return self.sigma
        if mark == PERCENT:
            return self.sigma + 1
        raise InputError(f"unknown sentinel {mark!r}")

    def encode(self, text: str) -> tuple[int, ...]:
        index = {ch: k for k, ch in enumerate(self.chars)}
        try:
            return tuple(index[ch] for ch in text)
        except KeyError as exc:
            raise InputError(f"character {exc.args[0]!r} is not in alphabet {self.chars!r}") from None

    def decode(self, codes: Symbols) -> str:
        table = self.chars + DOLLAR + PERCENT
        return "".join(table[c] if 0 <= c < len(table) else "?" for c in codes)


@dataclass(frozen=True)
class PaddedText:
    """A text followed by at least one sentinel, with power-of-two length."""

    symbols: tuple[int, ...]
    raw_len: int
    alphabet: Alphabet
    sentinel: int

    def __len__(self) -> int:
        return len(self.symbols)

    def __getitem__(self, k):
        return self.symbols[k]

    def __iter__(self) -> Iterator[int]:
        return iter(self.symbols)

    def __str__(self) -> str:
        return self.alphabet.decode(self.symbols)

    @property
    def n(self) -> int:
        return len(self.symbols)

    @property
    def p(self) -> int:
        return self.n.bit_length() - 1

    @property
    def width(self) -> int:
        return self.alphabet.width

    @property
    def raw(self) -> str:
        return self.alphabet.decode(self.symbols[: self.raw_len])


@dataclass(frozen=True)
class MatchWitness:
    """A verified window: start ``i`` in the rotated frame, rotation ``j``, length ``d``."""

    i: int
    j: int
    d: int


def padded_length(raw_len: int) -> int:
    """Least power of two strictly greater than ``raw_len``."""
    return 1 << raw_len.bit_length()


def pad_input(
    raw: Union[str, Symbols],
    sentinel: str = DOLLAR,
    alphabet: Alphabet | None = None,
    n: int | None = None,
) -> PaddedText:
    """Append sentinels up to the least power of two strictly above ``len(raw)``.

    ``raw`` is either a string over ``alphabet`` or a sequence of symbol codes.
    Passing ``n`` pads to a larger common power of two instead.
    """
    if alphabet is None:
        if not isinstance(raw, str):
            raise InputError("an alphabet is required for pre-encoded symbols")
        alphabet = Alphabet.for_texts(raw)
    mark = alphabet.sentinel(sentinel)
    codes = alphabet.encode(raw) if isinstance(raw, str) else tuple(int(c) for c in raw)
    for c in codes:
        if c >= alphabet.sigma or c < 0:
            raise InputError(f"symbol code {c} is a sentinel or out of range")
    size = padded_length(len(codes))
    if n is not None:
        if n < size or n & (n - 1):
            raise InputError(f"cannot pad length {len(codes)} to n={n}")
        size = n
    return PaddedText(codes + (mark,) * (size - len(codes)), len(codes), alphabet, mark)


def _check_index(value: int, n: int, name: str, inclusive: bool = False):
    hi = n if inclusive else n - 1
    if not 0 <= value <= hi:
        raise IndexError(f"{name}={value} outside [0, {hi}]")


def _check_pair(x: Symbols, y: Symbols):
    if len(x) != len(y):
        raise InputError(f"texts have different lengths {len(x)} and {len(y)}")


def rotate(x, j: int):
    """Cyclic rightward rotation by ``j`` symbols: ``x[n-j:] + x[:n-j]``."""
    n = len(x)
    _check_index(j, n, "j")
    symbols = tuple(x[(k - j) % n] for k in range(n))
    if isinstance(x, PaddedText):
        return PaddedText(symbols, x.raw_len, x.alphabet, x.sentinel)
    return symbols


def phi(x: Symbols, y: Symbols, i: int, j: int, d: int) -> int:
    """1 iff the rotated ``x`` and ``y`` agree on the circular window ``[i, i+d)``."""
    _check_pair(x, y)
    n = len(x)
    _check_index(i, n, "i")
    _check_index(j, n, "j")
    _check_index(d, n, "d", inclusive=True)
    return int(all(x[(i + k - j) % n] == y[(i + k) % n] for k in range(d)))


def psi(x: Symbols, y: Symbols, j: int, d: int) -> int:
    _check_pair(x, y)
    n = len(x)
    _check_index(j, n, "j")
    _check_index(d, n, "d", inclusive=True)
    if d == 0:
        return 1
    return int(any(phi(x, y, i, j, d) for i in range(n)))


def rho(x: Symbols, i: int, d: int) -> int:
    """1 iff the circular window ``x[i .. i+d-1]`` reads the same reversed."""
    n = len(x)
    _check_index(i, n, "i")
    _check_index(d, n, "d", inclusive=True)
    return int(all(x[(i + k) % n] == x[(i + d - 1 - k) % n] for k in range(d // 2)))


def rho_in_text(x: Symbols, i: int, d: int, sentinel: int) -> int:
    """``rho`` restricted to windows free of the ``sentinel`` code.

    Padding makes runs such as ``$$`` palindromic, so the palindrome search
    must ignore windows that touch it.
    """
    n = len(x)
    if not rho(x, i, d):
        return 0
    return int(all(x[(i + k) % n] != sentinel for k in range(d)))


def brute_lcs(x: Symbols, y: Symbols) -> tuple[int, MatchWitness]:
    """Exhaustive maximum of ``d`` over all ``(i, j)`` with ``phi = 1``.

    Ties go to the smallest rotation, then the smallest start.
    """
    _check_pair(x, y)
    n = len(x)
    best = MatchWitness(0, 0, 0)
    for j in range(n):
        for i in range(n):
            run = 0
            while run < n and x[(i + run - j) % n] == y[(i + run) % n]:
                run += 1
            if run > best.d:
                best = MatchWitness(i, j, run)
    return best.d, best


def brute_lps(x: PaddedText) -> tuple[int, int]:
    """Longest palindromic window lying inside the raw text, as ``(length, start)``."""
    m = x.raw_len if isinstance(x, PaddedText) else len(x)
    for d in range(m, 0, -1):
        for i in range(m - d + 1):
            if rho(x, i, d):
                return d, i
    return 0, 0


# Vectorised tables over a whole search register, used by the abstract engine.


def _run_starts(match: np.ndarray, d: int) -> np.ndarray:
    """Positions starting a circular run of ``d`` ones along the last axis."""
    n = match.shape[-1]
    if d == 0:
        return np.ones(match.shape, dtype=bool)
    out = np.ones(match.shape, dtype=bool)
    block = match.copy()
    length, covered = 1, 0
    while d:
        if d & 1:
            out &= np.roll(block, -covered, axis=-1)
            covered += length
        d >>= 1
        if d:
            block = block & np.roll(block, -length, axis=-1)
            length *= 2
    assert covered <= n
    return out


def psi_table(x: Symbols, y: Symbols, d: int) -> np.ndarray:
    """``psi(x, y, j, d)`` for every rotation ``j`` as a boolean array."""
    _check_pair(x, y)
    n = len(x)
    _check_index(d, n, "d", inclusive=True)
    xs = np.asarray(x, dtype=np.int64)
    ys = np.asarray(y, dtype=np.int64)
    table = np.empty(n, dtype=bool)
    chunk = max(1, (1 << 20) // max(n, 1))
    for start in range(0, n, chunk):
        js = np.arange(start, min(n, start + chunk))
        idx = (np.arange(n)[None, :] - js[:, None]) % n
        table[js] = _run_starts(xs[idx] == ys[None, :], d).any(axis=1)
    return table


def phi_table(x: Symbols, y: Symbols, j: int, d: int) -> np.ndarray:
    """``phi(x, y, i, j, d)`` for every start ``i``."""
    _check_pair(x, y)
    n = len(x)
    _check_index(j, n, "j")
    _check_index(d, n, "d", inclusive=True)
    xs = np.roll(np.asarray(x, dtype=np.int64), j)
    return _run_starts(xs == np.asarray(y, dtype=np.int64), d)


def rho_table(x: Symbols, d: int, sentinel: int | None = None) -> np.ndarray:
    """``rho`` (or ``rho_in_text`` when ``sentinel`` is given) for every start."""
    n = len(x)
    _check_index(d, n, "d", inclusive=True)
    xs = np.asarray(x, dtype=np.int64)
    starts = np.arange(n)
    ok = np.ones(n, dtype=bool)
    for k in range(d // 2):
        ok &= xs[(starts + k) % n] == xs[(starts + d - 1 - k) % n]
    if sentinel is not None:
        clean = xs != sentinel
        ok &= _run_starts(clean, d)
    return ok
