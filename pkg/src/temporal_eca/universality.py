"""Pattern-universality properties (o)-(iii) and the (iv) impossibility check.

All searches work on the materialised state tables of every temporal rule,
never by re-simulating sweeps.

Time convention: reach sets use tau >= 1 by default, so a start state
counts only if some rule brings it back; ``include_start=True`` adds tau = 0.
The tau searches for (ii) and (iii) always start at tau = 1.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Iterable, Sequence

import numpy as np

from .engine import rule_tables
from .errors import DomainError
from .rulespace import as_rule, family_of
from .temporal import EQ, enumerate_rules

DEFAULT_TAU_MAX = 1000


def _rules(n: int, include_sync: bool) -> tuple[str, ...]:
    return tuple(
        r.symbols for r in enumerate_rules(n) if include_sync or set(r.symbols) != {EQ}
    )


def _tables(eca, n: int, include_sync: bool, threads: int | None = None) -> tuple[tuple[str, ...], np.ndarray]:
    if n < 3:
        raise DomainError("n must be at least 3")
    words = _rules(n, include_sync)
    return words, rule_tables(eca, n, words, threads=threads)


def _popcount_rows(packed: np.ndarray) -> np.ndarray:
    return np.unpackbits(packed, axis=-1).sum(axis=-1)


@lru_cache(maxsize=16)
def _reach_matrix(code: int, n: int, include_sync: bool, include_start: bool) -> np.ndarray:
    """Packed boolean matrix: bit (v, w) set iff some rule reaches w from v."""
    _, tables = _tables(code, n, include_sync)
    size = 1 << n
    eye = np.packbits(np.eye(size, dtype=bool), axis=1)
    # gather whole rows as 64-bit words when they are wide enough
    word = np.uint64 if eye.shape[1] % 8 == 0 else np.uint8
    eye_w = eye.view(word)
    total = np.zeros_like(eye_w)
    batch = max(1, (1 << 23) // eye.nbytes)
    for start in range(0, len(tables), batch):
        g = tables[start:start + batch].astype(np.int64)
        offset = (np.arange(len(g)) * size)[:, None]
        # R[r, v] starts as {f_r(v)} and doubles its horizon each round
        R = eye_w[g.ravel()]
        for _ in range(n):
            R |= R[(offset + g).ravel()]
            g = np.take_along_axis(g, g, axis=1)
        total |= np.bitwise_or.reduce(R.reshape(len(g), size, -1), axis=0)
    total = total.view(np.uint8)
    if include_start:
        total |= eye
    total.setflags(write=False)
    return total


def reach_set(eca, n: int, v: int, *, include_sync: bool = True, include_start: bool = False) -> frozenset[int]:
    """Union over all rules of the forward orbit of v."""
    if not 0 <= v < (1 << n):
        raise DomainError(f"state {v} out of range for n={n}")
    row = _reach_matrix(as_rule(eca).code, n, include_sync, include_start)[v]
    bits = np.unpackbits(row)[: 1 << n]
    return frozenset(int(w) for w in np.nonzero(bits)[0])


@dataclass(frozen=True)
class ReachReport:
    eca: int
    n: int
    property: str
    per_source: tuple[int, ...] = field(repr=False)
    max_count: int
    min_count: int
    max_witness: int
    min_witness: int

    @property
    def value(self) -> int:
        return self.max_count if self.property == "o" else self.min_count

    @property
    def witness(self) -> int:
        return self.max_witness if self.property == "o" else self.min_witness

    @property
    def holds(self) -> bool:
        return self.value == 1 << self.n


def _reach_report(eca, n: int, prop: str, include_sync: bool, include_start: bool) -> ReachReport:
    code = as_rule(eca).code
    counts = _popcount_rows(_reach_matrix(code, n, include_sync, include_start))
    return ReachReport(
        eca=code,
        n=n,
        property=prop,
        per_source=tuple(int(c) for c in counts),
        max_count=int(counts.max()),
        min_count=int(counts.min()),
        max_witness=int(np.argmax(counts)),
        min_witness=int(np.argmin(counts)),
    )


def property_o(eca, n: int, *, include_sync: bool = True, include_start: bool = False) -> ReachReport:
    """Largest reach set over all start states; (o) holds iff it is everything."""
    return _reach_report(eca, n, "o", include_sync, include_start)


def property_i(eca, n: int, *, include_sync: bool = True, include_start: bool = False) -> ReachReport:
    """Smallest reach set over all start states; (i) holds iff it is everything."""
    return _reach_report(eca, n, "i", include_sync, include_start)


def _coverage(cur: np.ndarray, size: int) -> np.ndarray:
    """Number of distinct states per column of ``cur``."""
    cols = cur.shape[1]
    hit = np.zeros(cols * size, dtype=bool)
    hit[(np.arange(cols) * size)[None, :] + cur] = True
    return hit.reshape(cols, size).sum(axis=1)


@dataclass(frozen=True)
class TauReport:
    property: str
    eca: int
    n: int
    tau_max: int
    per_source: tuple[int | None, ...] = ()
    tau: int | None = None

    @property
    def max_tau(self) -> int | None:
        """Largest per-source tau, or None if some source has none."""
        if not self.per_source or any(t is None for t in self.per_source):
            return None
        return max(self.per_source)


def _check_tau_max(tau_max: int) -> None:
    if tau_max < 1:
        raise DomainError("tau_max must be at least 1")


def property_ii_tau(eca, n: int, v: int, tau_max: int = DEFAULT_TAU_MAX, *, include_sync: bool = True) -> int | None:
    """Smallest tau >= 1 at which the rules send v onto every state."""
    _check_tau_max(tau_max)
    if not 0 <= v < (1 << n):
        raise DomainError(f"state {v} out of range for n={n}")
    _, tables = _tables(eca, n, include_sync)
    size = 1 << n
    rows = np.arange(len(tables))
    cur = np.full(len(tables), v, dtype=np.int64)
    for tau in range(1, tau_max + 1):
        cur = tables[rows, cur]
        if np.unique(cur).size == size:
            return tau
    return None


def property_ii(eca, n: int, tau_max: int = DEFAULT_TAU_MAX, *, include_sync: bool = True) -> TauReport:
    """Per-source smallest tau for property (ii), all sources at once."""
    _check_tau_max(tau_max)
    _, tables = _tables(eca, n, include_sync)
    size = 1 << n
    cur = np.broadcast_to(np.arange(size), tables.shape).astype(np.int64)
    found = np.zeros(size, dtype=np.int64)
    for tau in range(1, tau_max + 1):
        cur = np.take_along_axis(tables, cur, axis=1)
        full = _coverage(cur, size) == size
        found[(found == 0) & full] = tau
        if found.all():
            break
    return TauReport(
        "ii", as_rule(eca).code, n, tau_max,
        per_source=tuple(int(t) if t else None for t in found),
    )


def property_iii_tau(eca, n: int, tau_max: int = DEFAULT_TAU_MAX, *, include_sync: bool = True) -> int | None:
    """Smallest tau >= 1 that works for every source simultaneously."""
    _check_tau_max(tau_max)
    _, tables = _tables(eca, n, include_sync)
    size = 1 << n
    cur = np.broadcast_to(np.arange(size), tables.shape).astype(np.int64)
    for tau in range(1, tau_max + 1):
        cur = np.take_along_axis(tables, cur, axis=1)
        if (_coverage(cur, size) == size).all():
            return tau
    return None


def property_iii(eca, n: int, tau_max: int = DEFAULT_TAU_MAX, *, include_sync: bool = True) -> TauReport:
    tau = property_iii_tau(eca, n, tau_max, include_sync=include_sync)
    return TauReport("iii", as_rule(eca).code, n, tau_max, tau=tau)


@dataclass(frozen=True)
class PeriodCertificate:
    v: int
    per: int
    periods: dict[str, int] = field(repr=False)
    preperiodic_rules: tuple[str, ...] = field(repr=False)
    fixed_rules: tuple[str, ...]
    failing_taus: tuple[int, ...]
    verified: bool


def _returns_at(table: np.ndarray, v: int, tau: int, period: int | None) -> bool:
    """Whether tau sweeps bring v back to v, walking at most one period."""
    if period is None:
        # v is transient: the orbit never comes back
        return False
    x = v
    for _ in range(tau % period):
        x = int(table[x])
    return x == v


def period_certificate(eca, n: int, v: int, *, include_sync: bool = True) -> PeriodCertificate:
    """Show that v -> v fails at PER-1 and PER+1 for every non-fixed rule.

    PER is the lcm of the cycle lengths through v over the rules that have
    v on a cycle. Rules fixing v are reported separately; they reach v only.
    """
    if not 0 <= v < (1 << n):
        raise DomainError(f"state {v} out of range for n={n}")
    words, tables = _tables(eca, n, include_sync)
    periods: dict[str, int] = {}
    transient = []
    for word, table in zip(words, tables):
        first: dict[int, int] = {}
        x, t = v, 0
        while x not in first:
            first[x] = t
            x = int(table[x])
            t += 1
        if x == v:
            periods[word] = t
        else:
            transient.append(word)
    per = math.lcm(*periods.values()) if periods else 1
    fixed = tuple(w for w, p in periods.items() if p == 1)
    failing = (per - 1, per + 1) if per > 1 else ()
    ok = True
    for tau in failing:
        for word, table in zip(words, tables):
            if word in fixed:
                continue
            if _returns_at(table, v, tau, periods.get(word)):
                ok = False
    return PeriodCertificate(v, per, periods, tuple(transient), fixed, failing, ok)


@dataclass(frozen=True)
class TableRow:
    family: int
    n: int
    o_max: int
    i_min: int


def universality_table(ecas: Iterable, ns: Sequence[int], *, include_sync: bool = True,
                       include_start: bool = False) -> list[TableRow]:
    """(o) max-count and (i) min-count for each family representative and n."""
    rows = []
    for eca in ecas:
        rep = family_of(eca).canonical.code
        for n in ns:
            o = property_o(rep, n, include_sync=include_sync, include_start=include_start)
            rows.append(TableRow(rep, n, o.max_count, o.min_count))
    return rows
