"""Asynchronous sweeps, iteration, and materialised state maps.

A configuration of n cells is stored as the integer
``sum(c_i << (n - 1 - i))``: cell 0 is the most significant bit, so the
bit string ``"1000"`` is cell 0 set and the value 8.

One application of a temporal rule is one sweep: the layers of its
schedule are processed in order, every cell of a layer reads the state as
it stands when that layer starts, and later layers see earlier updates.
"""

from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Iterable, Sequence

import numpy as np

from .errors import DimensionMismatch, DomainError
from .rulespace import as_rule
from .temporal import TemporalRule, enumerate_rules, parse, schedule

THREADS_ENV = "TEMPORAL_ECA_THREADS"


@dataclass(frozen=True)
class Configuration:
    n: int
    value: int

    def __post_init__(self) -> None:
        if self.n < 1 or not 0 <= self.value < (1 << self.n):
            raise DomainError(f"value {self.value} does not fit in {self.n} cells")

    @classmethod
    def from_bits(cls, bits: str | Sequence[int]) -> "Configuration":
        if isinstance(bits, str):
            if not bits or set(bits) - {"0", "1"}:
                raise DomainError(f"not a bit string: {bits!r}")
            return cls(len(bits), int(bits, 2))
        bits = list(bits)
        return cls(len(bits), sum(int(b) << (len(bits) - 1 - i) for i, b in enumerate(bits)))

    @property
    def cells(self) -> tuple[int, ...]:
        return tuple((self.value >> (self.n - 1 - i)) & 1 for i in range(self.n))

    def __str__(self) -> str:
        return format(self.value, f"0{self.n}b")


def parse_config(text: str, n: int | None = None) -> Configuration:
    """Read a bit string (MSB first) or, failing that, a decimal value.

    A string of 0/1 characters is a bit string unless ``n`` is given and
    its length differs from ``n``.
    """
    text = text.strip()
    if text and not set(text) - {"0", "1"} and (n is None or len(text) == n):
        return Configuration.from_bits(text)
    if n is None:
        raise DomainError(f"decimal input {text!r} needs an explicit cell count")
    try:
        return Configuration(n, int(text, 10))
    except ValueError:
        raise DomainError(f"cannot read configuration {text!r}") from None


def _as_config(config, n: int | None = None) -> Configuration:
    if isinstance(config, Configuration):
        return config
    if isinstance(config, str):
        return parse_config(config, n)
    if n is None:
        raise DomainError("integer configuration needs n")
    return Configuration(n, int(config))


def _update_cells(code: int, n: int, value: int, cells: Iterable[int]) -> int:
    new = value
    for i in cells:
        left = (value >> (n - 1 - (i - 1) % n)) & 1
        center = (value >> (n - 1 - i)) & 1
        right = (value >> (n - 1 - (i + 1) % n)) & 1
        bit = (code >> (4 * left + 2 * center + right)) & 1
        new = (new & ~(1 << (n - 1 - i))) | (bit << (n - 1 - i))
    return new


def layer_step(eca, cells: Iterable[int], config) -> Configuration:
    """Update the given cells simultaneously; all others are untouched."""
    config = _as_config(config)
    cells = list(cells)
    if any(not 0 <= i < config.n for i in cells):
        raise DimensionMismatch(f"cells {cells} outside 0..{config.n - 1}")
    return Configuration(config.n, _update_cells(as_rule(eca).code, config.n, config.value, cells))


def sweep(eca, rule, config) -> Configuration:
    rule = parse(rule)
    config = _as_config(config, rule.n)
    if rule.n != config.n:
        raise DimensionMismatch(f"rule has {rule.n} cells, configuration has {config.n}")
    code, value = as_rule(eca).code, config.value
    for layer in schedule(rule).layers:
        value = _update_cells(code, config.n, value, layer)
    return Configuration(config.n, value)


def iterate(eca, rule, config, tau: int) -> Configuration:
    if tau < 0:
        raise DomainError("tau must be non-negative")
    rule = parse(rule)
    config = _as_config(config, rule.n)
    if rule.n != config.n:
        raise DimensionMismatch(f"rule has {rule.n} cells, configuration has {config.n}")
    if tau == 0:
        return config
    table = state_map(eca, rule, rule.n).table
    v = config.value
    for _ in range(tau):
        v = int(table[v])
    return Configuration(config.n, v)


def apply_sequence(eca, rules: Sequence, config) -> Configuration:
    """Apply the rules left to right, one sweep each."""
    rules = [parse(r) for r in rules]
    config = _as_config(config, rules[0].n if rules else None)
    for rule in rules:
        config = sweep(eca, rule, config)
    return config


@dataclass(frozen=True, eq=False)
class StateMap:
    """The total function on 0..2^n-1 induced by some sweep(s)."""

    n: int
    table: np.ndarray = field(repr=False)

    def __post_init__(self) -> None:
        table = np.asarray(self.table, dtype=np.int64)
        if table.shape != (1 << self.n,):
            raise DimensionMismatch(f"table must have {1 << self.n} entries, got {table.shape}")
        if table.size and (table.min() < 0 or table.max() >= (1 << self.n)):
            raise DomainError("table entries out of range")
        table.setflags(write=False)
        object.__setattr__(self, "table", table)

    def __call__(self, v: int) -> int:
        return int(self.table[v])

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, StateMap)
            and other.n == self.n
            and np.array_equal(other.table, self.table)
        )

    def __hash__(self) -> int:
        return hash((self.n, self.table.tobytes()))

    def tolist(self) -> list[int]:
        return [int(x) for x in self.table]

    @property
    def is_bijective(self) -> bool:
        return np.unique(self.table).size == self.table.size

    @classmethod
    def identity(cls, n: int) -> "StateMap":
        return cls(n, np.arange(1 << n))


def default_threads() -> int:
    try:
        return max(1, int(os.environ.get(THREADS_ENV, "1")))
    except ValueError:
        return 1


def _batch_tables(code: int, n: int, words: Sequence[str]) -> np.ndarray:
    """State tables for many rules at once, shape (len(words), 2^n)."""
    size = 1 << n
    dtype = np.int32 if n < 31 else np.int64
    lidx = np.array([schedule(TemporalRule(w)).layer_index() for w in words], dtype=np.int16)
    bits = np.array([(code >> k) & 1 for k in range(8)], dtype=dtype)
    S = np.broadcast_to(np.arange(size, dtype=dtype), (len(words), size)).copy()
    shifts = [n - 1 - i for i in range(n)]
    for t in range(int(lidx.max()) + 1 if len(words) else 0):
        B = [(S >> s) & 1 for s in shifts]
        for i in range(n):
            rows = np.nonzero(lidx[:, i] == t)[0]
            if rows.size == 0:
                continue
            k = 4 * B[(i - 1) % n][rows] + 2 * B[i][rows] + B[(i + 1) % n][rows]
            mask = dtype(1 << shifts[i])
            S[rows] = (S[rows] & ~mask) | (bits[k] << shifts[i])
    return S


@lru_cache(maxsize=8)
def _cached_tables(code: int, n: int, words: tuple[str, ...], threads: int) -> np.ndarray:
    chunk = max(1, (1 << 22) // (1 << n))
    pieces = [words[i:i + chunk] for i in range(0, len(words), chunk)]
    if threads > 1 and len(pieces) > 1:
        with ThreadPoolExecutor(threads) as pool:
            parts = list(pool.map(lambda ws: _batch_tables(code, n, ws), pieces))
    else:
        parts = [_batch_tables(code, n, ws) for ws in pieces]
    out = np.concatenate(parts) if parts else np.zeros((0, 1 << n), dtype=np.int32)
    out.setflags(write=False)
    return out


def rule_tables(eca, n: int, rules: Sequence | None = None, threads: int | None = None) -> np.ndarray:
    """Read-only array of state tables, one row per rule (all of AS_n by default)."""
    if rules is None:
        words = tuple(r.symbols for r in enumerate_rules(n))
    else:
        words = tuple(parse(r).symbols for r in rules)
        if any(len(w) != n for w in words):
            raise DimensionMismatch(f"all rules must have {n} cells")
    return _cached_tables(as_rule(eca).code, n, words, threads or default_threads())


def state_map(eca, rule, n: int | None = None) -> StateMap:
    rule = parse(rule)
    if n is not None and n != rule.n:
        raise DimensionMismatch(f"rule has {rule.n} cells, expected {n}")
    return StateMap(rule.n, _batch_tables(as_rule(eca).code, rule.n, [rule.symbols])[0])


def compose(m1: StateMap, m2: StateMap) -> StateMap:
    """m1 first, then m2."""
    if m1.n != m2.n:
        raise DimensionMismatch(f"cannot compose maps on {m1.n} and {m2.n} cells")
    return StateMap(m1.n, m2.table[m1.table])


def sequence_map(eca, rules: Sequence, n: int) -> StateMap:
    out = np.arange(1 << n)
    for rule in rules:
        out = state_map(eca, rule, n).table[out]
    return StateMap(n, out)


@dataclass(frozen=True)
class OrbitInfo:
    preperiod: int
    period: int
    visited: frozenset[int]


def orbit(smap: StateMap, v: int) -> OrbitInfo:
    if not 0 <= v < (1 << smap.n):
        raise DomainError(f"state {v} out of range for n={smap.n}")
    first: dict[int, int] = {}
    x, t = int(v), 0
    table = smap.table
    while x not in first:
        first[x] = t
        x = int(table[x])
        t += 1
    return OrbitInfo(first[x], t - first[x], frozenset(first))
