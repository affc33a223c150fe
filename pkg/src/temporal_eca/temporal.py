"""Temporal (asynchronicity) rules on the ring Z/nZ.

A temporal rule is a word ``as_0 ... as_{n-1}`` over ``<``, ``=``, ``>``.
Symbol ``as_i`` relates cell ``i`` to cell ``i+1 (mod n)``:

* ``<``  cell i updates after cell i+1,
* ``=``  both update simultaneously,
* ``>``  cell i updates before cell i+1.

``≡`` is accepted on input as an alias for ``=``; output always uses ``=``.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Iterable, Iterator, Sequence

from .errors import IllFormed, InvalidWord

LT, EQ, GT = "<", "=", ">"
_ALIASES = {"<": LT, "=": EQ, "≡": EQ, ">": GT}


def _sign(x: int) -> int:
    return (x > 0) - (x < 0)


def is_valid_word(word: str) -> bool:
    """Acyclicity test on an already normalised word."""
    return set(word) == {EQ} or (LT in word and GT in word)


@dataclass(frozen=True)
class TemporalRule:
    symbols: str

    @property
    def n(self) -> int:
        return len(self.symbols)

    @property
    def is_synchronous(self) -> bool:
        return set(self.symbols) == {EQ}

    @property
    def has_eq(self) -> bool:
        return EQ in self.symbols

    def __str__(self) -> str:
        return self.symbols

    def pretty(self) -> str:
        return self.symbols.replace(EQ, "≡")

    def __len__(self) -> int:
        return len(self.symbols)


def parse(word) -> TemporalRule:
    if isinstance(word, TemporalRule):
        return word
    if not isinstance(word, str):
        raise InvalidWord(f"temporal rule must be a string, got {type(word).__name__}")
    try:
        symbols = "".join(_ALIASES[ch] for ch in word)
    except KeyError as exc:
        raise InvalidWord(f"bad symbol {exc.args[0]!r} in temporal rule {word!r}") from None
    if len(symbols) < 3:
        raise InvalidWord(f"temporal rule {word!r} is shorter than 3 cells")
    if not is_valid_word(symbols):
        raise IllFormed(
            f"temporal rule {word!r} makes some cell update after itself; "
            "it needs both '<' and '>' unless it is all '='"
        )
    return TemporalRule(symbols)


def count_rules(n: int) -> int:
    """Number of valid words of length n."""
    if n < 3:
        raise InvalidWord("n must be at least 3")
    return 3**n - 2 ** (n + 1) + 2


def enumerate_rules(n: int) -> Iterator[TemporalRule]:
    """Every valid rule of length n, lexicographic with ``< = >``."""
    if n < 3:
        raise InvalidWord("n must be at least 3")
    for letters in itertools.product((LT, EQ, GT), repeat=n):
        word = "".join(letters)
        if is_valid_word(word):
            yield TemporalRule(word)


def bijective_subset(n: int) -> Iterator[TemporalRule]:
    """Rules over ``{<, >}`` only, i.e. without simultaneous neighbours."""
    if n < 3:
        raise InvalidWord("n must be at least 3")
    for letters in itertools.product((LT, GT), repeat=n):
        word = "".join(letters)
        if LT in word and GT in word:
            yield TemporalRule(word)


@dataclass(frozen=True)
class UpdateSchedule:
    """Ordered layers of cells; all cells of a layer update together."""

    layers: tuple[tuple[int, ...], ...]

    @property
    def n(self) -> int:
        return sum(len(layer) for layer in self.layers)

    def layer_index(self) -> list[int]:
        idx = [0] * self.n
        for k, layer in enumerate(self.layers):
            for i in layer:
                idx[i] = k
        return idx

    def __str__(self) -> str:
        return "(" + "|".join(",".join(map(str, layer)) for layer in self.layers) + ")"


def _as_schedule(layers) -> UpdateSchedule:
    if isinstance(layers, UpdateSchedule):
        return layers
    parts = tuple(tuple(sorted(int(i) for i in layer)) for layer in layers)
    cells = [i for layer in parts for i in layer]
    if any(not layer for layer in parts):
        raise InvalidWord("schedule layers must be non-empty")
    if sorted(cells) != list(range(len(cells))):
        raise InvalidWord(f"layers {parts} do not partition 0..{len(cells) - 1}")
    if len(cells) < 3:
        raise InvalidWord("a schedule needs at least 3 cells")
    return UpdateSchedule(parts)


def schedule(rule) -> UpdateSchedule:
    """Longest-path layering of the rule's precedence DAG."""
    rule = parse(rule)
    word, n = rule.symbols, rule.n
    if rule.is_synchronous:
        return UpdateSchedule((tuple(range(n)),))

    parent = list(range(n))

    def find(x: int) -> int:
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for i, sym in enumerate(word):
        if sym == EQ:
            parent[find(i)] = find((i + 1) % n)
    cls = [find(i) for i in range(n)]

    succ: dict[int, set[int]] = {c: set() for c in set(cls)}
    for i, sym in enumerate(word):
        a, b = cls[i], cls[(i + 1) % n]
        if sym == GT:
            succ[a].add(b)
        elif sym == LT:
            succ[b].add(a)

    indeg = {c: 0 for c in succ}
    for c in succ:
        for d in succ[c]:
            indeg[d] += 1
    rank = {c: 0 for c in succ}
    ready = sorted(c for c in succ if indeg[c] == 0)
    while ready:
        c = ready.pop()
        for d in succ[c]:
            rank[d] = max(rank[d], rank[c] + 1)
            indeg[d] -= 1
            if indeg[d] == 0:
                ready.append(d)
    depth = max(rank.values()) + 1
    layers = [[] for _ in range(depth)]
    for i in range(n):
        layers[rank[cls[i]]].append(i)
    return UpdateSchedule(tuple(tuple(layer) for layer in layers))


def from_partition(layers) -> TemporalRule:
    """The temporal rule induced by an ordered partition of the cells."""
    sched = _as_schedule(layers)
    idx = sched.layer_index()
    n = sched.n
    word = []
    for i in range(n):
        d = idx[i] - idx[(i + 1) % n]
        word.append(LT if d > 0 else EQ if d == 0 else GT)
    return TemporalRule("".join(word))


@dataclass(frozen=True)
class SignTriple:
    left_sign: int
    right_sign: int


def sign_triples(layers) -> tuple[SignTriple, ...]:
    """Per cell i: (sgn(layer(i-1) - layer(i)), sgn(layer(i) - layer(i+1)))."""
    sched = _as_schedule(layers)
    idx = sched.layer_index()
    n = sched.n
    return tuple(
        SignTriple(_sign(idx[i - 1] - idx[i]), _sign(idx[i] - idx[(i + 1) % n]))
        for i in range(n)
    )


def rules_from(words: Iterable) -> list[TemporalRule]:
    return [parse(w) for w in words]


def common_n(rules: Sequence[TemporalRule]) -> int | None:
    ns = {r.n for r in rules}
    return ns.pop() if len(ns) == 1 else None
