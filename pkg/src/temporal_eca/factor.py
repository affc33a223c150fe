"""Write permutations as words in a fixed set of generator permutations.

Works for any generating set whose group contains the alternating group
and a 3-cycle reachable by powering a short word. Words are lists of
generator indices applied left to right. Inverses never appear in the
output: ``g^-1`` is spelled ``g`` repeated ``order(g) - 1`` times.
"""

from __future__ import annotations

import math
from collections import deque
from typing import Sequence

from .algebra import Perm, cycles, identity, mul, perm_order
from .errors import DomainError, LimitsExceeded

Triple = tuple[int, int, int]


def _rotate_min(t: Triple) -> Triple:
    """Canonical form of the 3-cycle a->b->c->a."""
    a, b, c = t
    return min((a, b, c), (b, c, a), (c, a, b))


def apply_word(word: Sequence[int], gens: Sequence[Perm], degree: int) -> Perm:
    p = identity(degree)
    for k in word:
        p = mul(p, gens[k])
    return p


class Factorizer:
    """Factor permutations over ``gens``.

    ``search_budget`` bounds the number of distinct group elements
    examined while hunting for a 3-cycle.
    """

    def __init__(self, gens: Sequence[Sequence[int]], search_budget: int = 200_000, max_word: int = 4):
        self.gens = [tuple(int(x) for x in g) for g in gens]
        if not self.gens:
            raise LimitsExceeded("no generators")
        self.degree = len(self.gens[0])
        if self.degree < 5:
            raise LimitsExceeded("3-cycle factorisation needs at least 5 points")
        self.inverse_words = [[k] * (perm_order(g) - 1) for k, g in enumerate(self.gens)]
        self._seed = self._find_three_cycle(search_budget, max_word)
        self._tree = self._conjugation_tree()

    def _find_three_cycle(self, budget: int, max_word: int) -> tuple[Triple, list[int]]:
        best = None
        seen = {identity(self.degree)}
        layer = [((), identity(self.degree))]
        for _ in range(max_word):
            nxt = []
            for word, p in layer:
                for k, g in enumerate(self.gens):
                    q = mul(p, g)
                    if q in seen:
                        continue
                    seen.add(q)
                    w = word + (k,)
                    nxt.append((w, q))
                    lengths = [len(c) for c in cycles(q)]
                    if lengths.count(3) != 1 or any(l % 3 == 0 for l in lengths if l != 3):
                        continue
                    power = math.lcm(*(l for l in lengths if l != 3))
                    cost = len(w) * power
                    if best is None or cost < best[0]:
                        best = (cost, list(w) * power)
                    if len(seen) >= budget:
                        break
                if len(seen) >= budget:
                    break
            if best is not None or len(seen) >= budget or not nxt:
                break
            layer = nxt
        if best is None:
            raise LimitsExceeded("no 3-cycle found among short words")
        word = best[1]
        p = apply_word(word, self.gens, self.degree)
        (cyc,) = [c for c in cycles(p) if len(c) == 3]
        return _rotate_min(cyc), word

    def _conjugation_tree(self) -> dict[Triple, tuple[Triple | None, int]]:
        """BFS over 3-cycles: conjugating (a b c) by g gives (g(a) g(b) g(c))."""
        root = self._seed[0]
        tree: dict[Triple, tuple[Triple | None, int]] = {root: (None, -1)}
        todo = deque([root])
        while todo:
            t = todo.popleft()
            for k, g in enumerate(self.gens):
                u = _rotate_min((g[t[0]], g[t[1]], g[t[2]]))
                if u not in tree:
                    tree[u] = (t, k)
                    todo.append(u)
        return tree

    def three_cycle_word(self, t: Triple) -> list[int]:
        t = _rotate_min(t)
        if t not in self._tree:
            raise LimitsExceeded(f"3-cycle {t} is not reachable by conjugation")
        path = []
        while True:
            parent, k = self._tree[t]
            if parent is None:
                break
            path.append(k)
            t = parent
        word = list(self._seed[1])
        for k in reversed(path):
            word = self.inverse_words[k] + word + [k]
        return word

    def word(self, target: Sequence[int]) -> list[int]:
        """A word equal to an even permutation ``target``."""
        target = tuple(int(x) for x in target)
        if len(target) != self.degree or sorted(target) != list(range(self.degree)):
            raise DomainError("target is not a permutation of the generator points")
        if (self.degree - len(cycles(target))) % 2:
            raise DomainError("target is an odd permutation")
        r = target
        used: list[Triple] = []
        for i in range(self.degree):
            if r[i] == i:
                continue
            j = r[i]
            k = next(x for x in range(i + 1, self.degree) if x != j)
            c = (j, i, k)
            r = mul(r, _triple_perm(c, self.degree))
            used.append(c)
        out: list[int] = []
        for a, b, c in reversed(used):
            out.extend(self.three_cycle_word((a, c, b)))
        return out


def _triple_perm(t: Triple, degree: int) -> Perm:
    p = list(range(degree))
    a, b, c = t
    p[a], p[b], p[c] = b, c, a
    return tuple(p)
