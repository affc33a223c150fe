"""Slow, independent reference implementations used only by the tests."""

import itertools


def naive_valid(word: str) -> bool:
    """Some assignment of update times satisfies every adjacent constraint."""
    n = len(word)
    for times in itertools.product(range(n), repeat=n):
        if all(_holds(word[i], times[i], times[(i + 1) % n]) for i in range(n)):
            return True
    return False


def _holds(sym: str, a: int, b: int) -> bool:
    return {"<": a > b, "=": a == b, ">": a < b}[sym]


def collapsed_acyclic(word: str) -> bool:
    """Merge '='-linked cells, then check the strict order has no cycle."""
    n = len(word)
    parent = list(range(n))

    def find(x):
        while parent[x] != x:
            x = parent[x]
        return x

    for i, s in enumerate(word):
        if s == "=":
            parent[find(i)] = find((i + 1) % n)
    edges = set()
    for i, s in enumerate(word):
        a, b = find(i), find((i + 1) % n)
        if s == ">":
            edges.add((a, b))
        elif s == "<":
            edges.add((b, a))
    if any(a == b for a, b in edges):
        return False
    nodes = {find(i) for i in range(n)}
    while nodes:
        sources = [x for x in nodes if not any(b == x and a in nodes for a, b in edges)]
        if not sources:
            return False
        nodes -= set(sources)
    return True


def bits(value: int, n: int) -> list[int]:
    return [(value >> (n - 1 - i)) & 1 for i in range(n)]


def value(cells) -> int:
    out = 0
    for c in cells:
        out = 2 * out + c
    return out


def simulate_times(eca: int, times, v: int) -> int:
    """Update cells in increasing time; equal times read the same state."""
    n = len(times)
    cells = bits(v, n)
    for t in sorted(set(times)):
        old = list(cells)
        for i in range(n):
            if times[i] == t:
                k = 4 * old[(i - 1) % n] + 2 * old[i] + old[(i + 1) % n]
                cells[i] = (eca >> k) & 1
    return value(cells)


def word_from_times(times) -> str:
    n = len(times)
    out = []
    for i in range(n):
        a, b = times[i], times[(i + 1) % n]
        out.append(">" if a < b else "<" if a > b else "=")
    return "".join(out)


def group_closure_order(gens) -> int:
    """Size of the generated group by breadth-first closure."""
    ident = tuple(range(len(gens[0])))
    seen = {ident}
    todo = [ident]
    while todo:
        p = todo.pop()
        for g in gens:
            q = tuple(g[x] for x in p)
            if q not in seen:
                seen.add(q)
                todo.append(q)
    return len(seen)
