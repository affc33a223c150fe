"""Permutation structure of state maps.

Permutations are tuples ``p`` with ``p[x]`` the image of ``x``. Products
read left to right: ``mul(p, q)`` applies ``p`` first, then ``q``.
"""

from __future__ import annotations

import itertools
import math
from collections import Counter
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .engine import StateMap, rule_tables
from .errors import DegreeTooLarge, DomainError, NonBijectiveGenerator
from .temporal import bijective_subset, enumerate_rules

DEFAULT_DEGREE_CAP = 1 << 7

Perm = tuple[int, ...]


def mul(p: Perm, q: Perm) -> Perm:
    return tuple(q[x] for x in p)


def inv(p: Perm) -> Perm:
    out = [0] * len(p)
    for x, y in enumerate(p):
        out[y] = x
    return tuple(out)


def identity(degree: int) -> Perm:
    return tuple(range(degree))


def cycles(p: Sequence[int]) -> list[tuple[int, ...]]:
    seen = [False] * len(p)
    out = []
    for start in range(len(p)):
        if seen[start]:
            continue
        cyc = []
        x = start
        while not seen[x]:
            seen[x] = True
            cyc.append(x)
            x = p[x]
        out.append(tuple(cyc))
    return out


def perm_order(p: Sequence[int]) -> int:
    return math.lcm(*(len(c) for c in cycles(p)))


def _table(m) -> np.ndarray:
    if isinstance(m, StateMap):
        return m.table
    return np.asarray(m, dtype=np.int64)


@dataclass(frozen=True)
class PermutationInfo:
    bijective: bool
    parity: str | None
    cycle_type: tuple[int, ...] | None

    @property
    def is_even(self) -> bool:
        return self.parity == "even"


def permutation_info(m) -> PermutationInfo:
    table = _table(m)
    if np.unique(table).size != table.size:
        return PermutationInfo(False, None, None)
    cyc = cycles(table.tolist())
    lengths = tuple(sorted((len(c) for c in cyc), reverse=True))
    parity = "even" if (table.size - len(cyc)) % 2 == 0 else "odd"
    return PermutationInfo(True, parity, lengths)


@dataclass(frozen=True)
class MultiplicityProfile:
    """Preimage counts of a function table.

    ``sharp`` maps each attained value w to #(w); ``at`` maps k to the
    number of values with exactly k preimages (k = 0 included when > 0).
    """

    size: int
    sharp: dict[int, int]
    at: dict[int, int]

    def count(self, w: int) -> int:
        return self.sharp.get(w, 0)

    @property
    def image_size(self) -> int:
        return len(self.sharp)

    @property
    def pair_sum(self) -> int:
        """Sum over w of floor(#(w) / 2)."""
        return sum(c // 2 for c in self.sharp.values())


def multiplicity_profile(m) -> MultiplicityProfile:
    table = _table(m)
    size = table.size
    counts = np.bincount(table, minlength=size)
    sharp = {int(w): int(c) for w, c in enumerate(counts) if c}
    at = dict(sorted(Counter(int(c) for c in counts).items()))
    if sum(k * a for k, a in at.items()) != size:
        raise AssertionError("multiplicities do not add up to the domain size")
    return MultiplicityProfile(size, sharp, at)


class StabilizerChain:
    """Deterministic Schreier-Sims: a base and strong generating set.

    Each level keeps its base point, the strong generators fixing all
    earlier base points, and an orbit transversal ``{point: u}`` with
    ``u[base] == point``. Transversals only ever grow, so a Schreier
    generator that sifted once keeps sifting and is never rechecked.
    """

    def __init__(self, generators: Iterable[Sequence[int]], degree: int):
        self.degree = degree
        self.base: list[int] = []
        self.gens: list[list[Perm]] = []
        self.trans: list[dict[int, Perm]] = []
        self._done: list[set[tuple[int, int]]] = []
        ident = identity(degree)
        gens = [tuple(int(x) for x in g) for g in generators]
        gens = [g for g in gens if g != ident]
        for g in gens:
            if len(g) != degree:
                raise DomainError("generator degree mismatch")
            if all(g[b] == b for b in self.base):
                self._new_level(g)
        for i in range(len(self.base)):
            self.gens[i] = [g for g in gens if all(g[b] == b for b in self.base[:i])]
            self._grow(i)
        self._schreier_sims()

    def _new_level(self, h: Perm) -> None:
        point = next(x for x in range(self.degree) if h[x] != x)
        self.base.append(point)
        self.gens.append([])
        self.trans.append({point: identity(self.degree)})
        self._done.append(set())

    def _grow(self, i: int) -> None:
        trans = self.trans[i]
        todo = list(trans)
        while todo:
            x = todo.pop()
            u = trans[x]
            for g in self.gens[i]:
                y = g[x]
                if y not in trans:
                    trans[y] = mul(u, g)
                    todo.append(y)

    def strip(self, g: Perm, start: int = 0) -> tuple[Perm, int]:
        for i in range(start, len(self.base)):
            x = g[self.base[i]]
            u = self.trans[i].get(x)
            if u is None:
                return g, i
            g = mul(g, inv(u))
        return g, len(self.base)

    def _schreier_sims(self) -> None:
        ident = identity(self.degree)
        i = len(self.base) - 1
        while i >= 0:
            moved = False
            for beta, u in list(self.trans[i].items()):
                for k, s in enumerate(self.gens[i]):
                    if (beta, k) in self._done[i]:
                        continue
                    gamma = s[beta]
                    sg = mul(mul(u, s), inv(self.trans[i][gamma]))
                    h, j = self.strip(sg, i + 1) if sg != ident else (ident, len(self.base))
                    if h == ident and j == len(self.base):
                        self._done[i].add((beta, k))
                        continue
                    if j == len(self.base):
                        self._new_level(h)
                    for level in range(i + 1, j + 1):
                        self.gens[level].append(h)
                        self._grow(level)
                    i = j
                    moved = True
                    break
                if moved:
                    break
            if not moved:
                i -= 1

    def order(self) -> int:
        return math.prod(len(t) for t in self.trans)

    def __contains__(self, g) -> bool:
        h, j = self.strip(tuple(int(x) for x in g))
        return j == len(self.base) and h == identity(self.degree)


@dataclass(frozen=True)
class GroupReport:
    generator_count: int
    degree: int
    order: int
    classification: str

    @property
    def contains_alternating(self) -> bool:
        return 2 * self.order >= math.factorial(self.degree)


def _perm_generators(generators, degree_cap: int) -> tuple[list[Perm], int]:
    tables = [_table(g) for g in generators]
    if not tables:
        raise DomainError("need at least one generator")
    degree = tables[0].size
    if any(t.size != degree for t in tables):
        raise DomainError("generators act on different sets")
    if degree > degree_cap:
        raise DegreeTooLarge(f"degree {degree} exceeds cap {degree_cap}")
    for t in tables:
        if np.unique(t).size != degree:
            raise NonBijectiveGenerator("generator is not a permutation")
    return [tuple(int(x) for x in t) for t in tables], degree


def classify(order: int, degree: int) -> str:
    full = math.factorial(degree)
    if order == full:
        return "symmetric"
    if 2 * order == full:
        return "alternating"
    return "other"


def group_order(generators, degree_cap: int = DEFAULT_DEGREE_CAP) -> GroupReport:
    perms, degree = _perm_generators(generators, degree_cap)
    order = StabilizerChain(perms, degree).order()
    return GroupReport(len(perms), degree, order, classify(order, degree))


def contains_alternating(generators, degree_cap: int = DEFAULT_DEGREE_CAP) -> bool:
    return group_order(generators, degree_cap).contains_alternating


GENERATOR_SETS = ("eq_free", "bijective")


def bijective_rule_maps(eca, n: int, generator_set: str = "bijective") -> tuple[list[str], np.ndarray]:
    """Rules used as group generators, with their tables.

    ``"bijective"``: every rule of AS_n whose state map is a permutation.
    ``"eq_free"``: only words over ``{<, >}``, which are permutations
    whenever the local rule is.
    """
    if generator_set == "bijective":
        words = [r.symbols for r in enumerate_rules(n)]
    elif generator_set == "eq_free":
        words = [r.symbols for r in bijective_subset(n)]
    else:
        raise DomainError(f"unknown generator set {generator_set!r}")
    tables = rule_tables(eca, n, words)
    size = 1 << n
    keep = [k for k, t in enumerate(tables) if np.unique(t).size == size]
    return [words[k] for k in keep], tables[keep]


def rule_group(eca, n: int, generator_set: str = "bijective",
               degree_cap: int = DEFAULT_DEGREE_CAP) -> GroupReport:
    words, tables = bijective_rule_maps(eca, n, generator_set)
    if not words:
        raise DomainError(f"no bijective rules for eca {eca} at n={n}")
    return group_order(list(tables), degree_cap)


def minimal_generating_triples(eca, n: int, budget: int = 10_000,
                               degree_cap: int = DEFAULT_DEGREE_CAP,
                               generator_set: str = "bijective") -> tuple[str, str, str] | None:
    """First triple of bijective rules whose group contains the alternating group."""
    if (1 << n) > degree_cap:
        raise DegreeTooLarge(f"degree {1 << n} exceeds cap {degree_cap}")
    words, tables = bijective_rule_maps(eca, n, generator_set)
    if len(words) < 3 or not contains_alternating(list(tables), degree_cap):
        return None
    for count, combo in enumerate(itertools.combinations(range(len(words)), 3)):
        if count >= budget:
            return None
        if contains_alternating([tables[k] for k in combo], degree_cap):
            return tuple(words[k] for k in combo)
    return None
