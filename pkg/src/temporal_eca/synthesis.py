"""Target functions, representability, and synthesis of rule sequences.

A certificate is an ordered list of temporal rules whose sweeps, applied
one after another, realise a target function on all 2^n configurations.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .algebra import bijective_rule_maps, multiplicity_profile, permutation_info
from .engine import rule_tables
from .errors import BadParams, LimitsExceeded, NotRepresentable
from .factor import Factorizer
from .rulespace import WolframRule, as_rule
from .temporal import TemporalRule, enumerate_rules, parse

DEFAULT_DEPTH = 6
DEFAULT_FRONTIER_CAP = 2_000_000
BFS_MAX_N = 4
CONSTRUCTIVE_MAX_N = 6
SUB_MODES = ("literal", "duplicated")


@dataclass(frozen=True, eq=False)
class FunctionTable:
    """A function on {0, .., 2^n - 1} given by its value table."""

    n: int
    table: np.ndarray

    def __post_init__(self):
        t = np.asarray(self.table, dtype=np.int64).copy()
        if self.n < 1 or t.shape != (1 << self.n,):
            raise BadParams(f"table must have {1 << self.n} entries")
        if t.size and (t.min() < 0 or t.max() >= 1 << self.n):
            raise BadParams("table entries must lie in [0, 2^n)")
        t.setflags(write=False)
        object.__setattr__(self, "table", t)

    @classmethod
    def from_values(cls, values: Sequence[int]) -> "FunctionTable":
        size = len(values)
        n = size.bit_length() - 1
        if size < 2 or 1 << n != size:
            raise BadParams(f"table length {size} is not a power of two")
        return cls(n, np.asarray(values))

    def __eq__(self, other):
        if not isinstance(other, FunctionTable):
            return NotImplemented
        return self.n == other.n and np.array_equal(self.table, other.table)

    def __hash__(self):
        return hash((self.n, self.table.tobytes()))

    def __call__(self, v: int) -> int:
        return int(self.table[v])

    def tolist(self) -> list[int]:
        return [int(x) for x in self.table]

    @property
    def is_identity(self) -> bool:
        return bool(np.array_equal(self.table, np.arange(1 << self.n)))


def _normalise_name(name: str) -> str:
    key = name.strip().upper().replace("-", "_")
    key = key.replace("'", "_PRIME")
    return {"MUL_K_BY_K": "MUL_KXK", "MUL_KBYK": "MUL_KXK", "MUL_2_BY_2": "MUL_KXK",
            "MUL_3_BY_3": "MUL_KXK", "CONST0": "ZERO", "ID": "IDENTITY"}.get(key, key)


BUILTINS = ("INC", "INC'", "MUL_BY_2", "MUL_BY_3", "MUL_kxk", "OR1", "OR2", "AND1", "AND2",
            "XOR1", "XOR2", "SUB", "SUB'", "NEG", "COMP", "IDENTITY", "ZERO")


def builtin(name: str, n: int, k: int | None = None, sub_mode: str = "literal") -> FunctionTable:
    """Named target function on n cells.

    Two-operand functions split v = a|b with a the high k = n/2 bits.
    ``MUL_2_BY_2`` and ``MUL_3_BY_3`` fix k from the name.
    """
    key = _normalise_name(name)
    if n < 1:
        raise BadParams("n must be positive")
    size = 1 << n
    v = np.arange(size, dtype=np.int64)
    mask = size - 1
    low = name.strip().upper().replace("-", "_")
    if key == "MUL_KXK" and low in ("MUL_2_BY_2", "MUL_3_BY_3"):
        named_k = int(low[4])
        if k is not None and k != named_k:
            raise BadParams(f"{name} fixes k={named_k}")
        k = named_k
    one_operand = {
        "INC": lambda: (v + 1) & mask,
        "INC_PRIME": lambda: np.where(v == mask, mask, (v + 1) % mask),
        "MUL_BY_2": lambda: (2 * v) & mask,
        "MUL_BY_3": lambda: (3 * v) & mask,
        "NEG": lambda: (-v) & mask,
        "COMP": lambda: v ^ mask,
        "IDENTITY": lambda: v,
        "ZERO": lambda: np.zeros_like(v),
    }
    if key in one_operand:
        return FunctionTable(n, one_operand[key]())
    two_operand = ("MUL_KXK", "OR1", "OR2", "AND1", "AND2", "XOR1", "XOR2", "SUB", "SUB_PRIME")
    if key not in two_operand:
        raise BadParams(f"unknown function {name!r}")
    if n % 2:
        raise BadParams(f"{name} needs an even number of cells, got n={n}")
    half = n // 2
    if k is None:
        k = half
    if k != half:
        raise BadParams(f"{name} needs n = 2k, got n={n}, k={k}")
    kmask = (1 << k) - 1
    a, b = v >> k, v & kmask
    if key == "MUL_KXK":
        out = a * b
    elif key in ("OR1", "AND1", "XOR1"):
        op = {"OR1": np.bitwise_or, "AND1": np.bitwise_and, "XOR1": np.bitwise_xor}[key]
        out = op(a, b)
    elif key in ("OR2", "AND2", "XOR2"):
        op = {"OR2": np.bitwise_or, "AND2": np.bitwise_and, "XOR2": np.bitwise_xor}[key]
        out = (a << k) | op(a, b)
    elif key == "SUB":
        if sub_mode not in SUB_MODES:
            raise BadParams(f"sub_mode must be one of {SUB_MODES}")
        if sub_mode == "literal":
            out = (a - b) & mask
        else:
            d = (a - b) & kmask
            out = (d << k) | d
    else:
        out = (a << k) | ((a - b) & kmask)
    return FunctionTable(n, out & mask)


@dataclass(frozen=True)
class RepresentabilityVerdict:
    case: str
    slack: int | None
    representable: bool
    n: int

    def as_dict(self) -> dict:
        return {"n": self.n, "case": self.case, "slack": self.slack,
                "representable": self.representable}


def representable(f: FunctionTable) -> RepresentabilityVerdict:
    """Whether ``f`` is a composition of eca-57 state maps on n >= 3 cells."""
    if f.n < 3:
        raise BadParams("representability is characterised for n >= 3")
    info = permutation_info(f.table)
    if info.bijective:
        ok = f.n == 3 or info.parity == "even"
        return RepresentabilityVerdict("bijective_" + info.parity, None, ok, f.n)
    slack = multiplicity_profile(f.table).pair_sum - (1 << (f.n - 3))
    case = "nonbijective_pass" if slack >= 0 else "nonbijective_fail"
    return RepresentabilityVerdict(case, slack, slack >= 0 and f.n >= 4, f.n)


def as_star(n: int) -> TemporalRule:
    """The merging rule '<=>...>' on n >= 4 cells."""
    if n < 4:
        raise BadParams("as* needs n >= 4")
    return parse("<=" + ">" * (n - 2))


@dataclass(frozen=True)
class SynthesisCertificate:
    eca: WolframRule
    rules: tuple[TemporalRule, ...]
    target: FunctionTable

    @property
    def words(self) -> list[str]:
        return [r.symbols for r in self.rules]


def _sequence_table(eca, words: Sequence[str], n: int) -> np.ndarray:
    out = np.arange(1 << n)
    if not words:
        return out
    distinct = sorted(set(words))
    tables = rule_tables(eca, n, distinct)
    index = {w: k for k, w in enumerate(distinct)}
    for w in words:
        out = tables[index[w]][out]
    return out


def verify_certificate(cert: SynthesisCertificate) -> bool:
    """Check the rule sequence against the target on every input."""
    n = cert.target.n
    if any(r.n != n for r in cert.rules):
        return False
    got = _sequence_table(cert.eca, [r.symbols for r in cert.rules], n)
    return bool(np.array_equal(got, cert.target.table))


def _bfs(eca, f: FunctionTable, depth: int, frontier_cap: int) -> list[str] | None:
    """Bidirectional search; returns rule words or None when limits run out."""
    n = f.n
    size = 1 << n
    words = [r.symbols for r in enumerate_rules(n)]
    tables = np.asarray(rule_tables(eca, n, words))
    dtype = np.uint8 if size <= 256 else np.uint16
    tables = tables.astype(dtype)
    bij = [k for k, t in enumerate(tables) if np.unique(t).size == size]
    inverses = np.zeros((len(bij), size), dtype=dtype)
    for row, k in enumerate(bij):
        inverses[row, tables[k]] = np.arange(size, dtype=dtype)

    start = np.arange(size, dtype=dtype)
    goal = f.table.astype(dtype)
    fwd: dict[bytes, tuple[bytes | None, int]] = {start.tobytes(): (None, -1)}
    bwd: dict[bytes, tuple[bytes | None, int]] = {goal.tobytes(): (None, -1)}
    if start.tobytes() in bwd:
        return []
    fwd_front = start[None, :]
    bwd_front = goal[None, :]
    fwd_depth = bwd_depth = 0

    def path(meet: bytes) -> list[str]:
        head, key = [], meet
        while fwd[key][0] is not None:
            parent, k = fwd[key]
            head.append(words[k])
            key = parent
        head.reverse()
        tail, key = [], meet
        while bwd[key][0] is not None:
            parent, k = bwd[key]
            tail.append(words[k])
            key = parent
        return head + tail

    while fwd_depth + bwd_depth < depth:
        grow_fwd = len(fwd_front) * len(tables) <= len(bwd_front) * max(len(bij), 1) or not bij
        if grow_fwd:
            nxt = tables[:, fwd_front]                    # (rules, frontier, size)
            own, other, gens = fwd, bwd, range(len(tables))
            front = fwd_front
        else:
            nxt = inverses[:, bwd_front]
            own, other, gens = bwd, fwd, bij
            front = bwd_front
        keep = []
        for r, k in enumerate(gens):
            for j in range(len(front)):
                row = nxt[r, j]
                key = row.tobytes()
                if key in own:
                    continue
                own[key] = (front[j].tobytes(), k)
                if key in other:
                    return path(key)
                keep.append(row)
                if len(fwd) + len(bwd) > frontier_cap:
                    return None
        if not keep:
            return None
        if grow_fwd:
            fwd_front, fwd_depth = np.array(keep), fwd_depth + 1
        else:
            bwd_front, bwd_depth = np.array(keep), bwd_depth + 1
    return None


class _Realiser:
    """Turns explicit permutations into rule words over the bijective rules."""

    def __init__(self, eca, n: int):
        self.n = n
        self.words, tables = bijective_rule_maps(eca, n)
        self.gens = [tuple(int(x) for x in t) for t in tables]
        self.factorizer = Factorizer(self.gens)
        self.odd = next((k for k, g in enumerate(self.gens)
                         if permutation_info(g).parity == "odd"), None)

    def word(self, perm: Sequence[int]) -> list[str]:
        perm = tuple(int(x) for x in perm)
        if perm == tuple(range(len(perm))):
            return []
        prefix = []
        if permutation_info(perm).parity == "odd":
            if self.odd is None:
                raise NotRepresentable("odd permutation with no odd generator")
            g = self.gens[self.odd]
            ginv = [0] * len(g)
            for x, y in enumerate(g):
                ginv[y] = x
            perm = tuple(perm[ginv[y]] for y in range(len(g)))
            prefix = [self.odd]
        idx = prefix + self.factorizer.word(perm)
        return [self.words[k] for k in idx]


def _complete_perm(partial: dict[int, int], size: int) -> list[int]:
    """Extend an injective partial map to a permutation of range(size)."""
    perm = [-1] * size
    used = set(partial.values())
    for x, y in partial.items():
        perm[x] = y
    free = iter(y for y in range(size) if y not in used)
    for x in range(size):
        if perm[x] < 0:
            perm[x] = next(free)
    return perm


def _make_even(perm: list[int], swap: tuple[int, int]) -> list[int]:
    """Compose with the transposition of two targets if ``perm`` is odd."""
    if permutation_info(perm).parity == "odd":
        a, b = swap
        perm = [b if y == a else a if y == b else y for y in perm]
    return perm


def _constructive_words(eca, f: FunctionTable, realiser: _Realiser) -> list[str]:
    """as* merges interleaved with even permutations, as in the merge argument."""
    n, size = f.n, 1 << f.n
    star = as_star(n)
    a = np.asarray(rule_tables(eca, n, [star.symbols])[0])
    seen: dict[int, int] = {}
    pairs = []
    for x, y in enumerate(a.tolist()):
        if y in seen:
            pairs.append((seen[y], x))
        else:
            seen[y] = x
    quota = len(pairs)
    blocks_of: dict[int, list[list[int]]] = {}
    for v, w in enumerate(f.table.tolist()):
        blocks_of.setdefault(w, []).append([v])

    # h: current function as a table; block value = h of its members
    h = list(range(size))
    out: list[str] = []
    first = True
    while True:
        merges = []
        for w, blocks in blocks_of.items():
            while len(blocks) >= 2 and len(merges) < quota:
                merges.append((blocks.pop(), blocks.pop(), w))
            if len(merges) >= quota:
                break
        if not merges:
            break
        if first and len(merges) < quota:
            raise NotRepresentable("not enough pairs for the first merge")
        first = False
        partial: dict[int, int] = {}
        for (b1, b2, w), (p1, p2) in zip(merges, pairs):
            partial[h[b1[0]]] = p1
            partial[h[b2[0]]] = p2
        spare = iter(x for x in range(size) if x not in set(partial.values())
                     and not any(x == p2 for p1, p2 in pairs[len(merges):]))
        for w, blocks in blocks_of.items():
            for b in blocks:
                partial[h[b[0]]] = next(spare)
        perm = _make_even(_complete_perm(partial, size), pairs[0])
        out += realiser.word(perm) + [star.symbols]
        h = [int(a[perm[x]]) for x in h]
        for b1, b2, w in merges:
            blocks_of[w].append(b1 + b2)
    final: dict[int, int] = {}
    for v in range(size):
        final[h[v]] = int(f.table[v])
    perm = _complete_perm(final, size)
    holes = [y for y in range(size) if y not in set(f.table.tolist())]
    perm = _make_even(perm, (holes[0], holes[1]))
    out += realiser.word(perm)
    return out


def synthesize(f: FunctionTable, eca=57, *, depth: int = DEFAULT_DEPTH,
               frontier_cap: int = DEFAULT_FRONTIER_CAP,
               constructive_max_n: int = CONSTRUCTIVE_MAX_N) -> SynthesisCertificate:
    """Find a rule sequence realising ``f``.

    Small n use bidirectional search over state maps. When that runs out
    of budget, or n > 4, the merge construction is used for eca 57.
    Every result is checked before it is returned.
    """
    eca = as_rule(eca)
    if f.is_identity:
        return SynthesisCertificate(eca, (), f)
    if eca.code == 57:
        verdict = representable(f)
        if not verdict.representable:
            raise NotRepresentable(f"{verdict.case} target is not representable at n={f.n}")
    words = None
    if f.n <= BFS_MAX_N:
        words = _bfs(eca, f, depth, frontier_cap)
    if words is None:
        if eca.code != 57:
            raise LimitsExceeded("search limits exhausted")
        if f.n > constructive_max_n:
            raise LimitsExceeded(f"construction is capped at n={constructive_max_n}")
        realiser = _Realiser(eca, f.n)
        if permutation_info(f.table).bijective:
            words = realiser.word(f.table)
        else:
            words = _constructive_words(eca, f, realiser)
    cert = SynthesisCertificate(eca, tuple(parse(w) for w in words), f)
    if not verify_certificate(cert):
        raise AssertionError("synthesised sequence failed verification")
    return cert


@dataclass(frozen=True)
class ConstructionPlan:
    """Counts for the as*-merge construction of a target.

    ``applications`` follows the one-merge-per-later-application rule;
    ``batched_applications`` lets each later application merge up to
    2^(n-3) pairs at once.
    """

    n: int
    applications: int
    first_merges: int
    later_merges: int
    batched_applications: int
    pair_sum: int


def merge_plan(f: FunctionTable) -> ConstructionPlan:
    """Count as* applications needed to reach the preimage sizes of ``f``.

    Bijections need none. Raises NotRepresentable when the pair test fails.
    """
    if f.n < 4:
        raise NotRepresentable("the merge construction needs n >= 4")
    prof = multiplicity_profile(f.table)
    if prof.image_size == 1 << f.n:
        return ConstructionPlan(f.n, 0, 0, 0, 0, 0)
    verdict = representable(f)
    if not verdict.representable:
        raise NotRepresentable(f"{verdict.case} target")
    quota = 1 << (f.n - 3)
    later = (1 << f.n) - prof.image_size - quota
    # batched: within each fiber, blocks halve per round when the quota allows
    counts = sorted(prof.sharp.values(), reverse=True)
    blocks = []
    budget = quota
    for c in counts:
        take = min(c // 2, budget)
        budget -= take
        blocks.append(c - take)
    rounds = 0
    while any(b > 1 for b in blocks):
        budget = quota
        for i, b in enumerate(blocks):
            take = min(b // 2, budget)
            budget -= take
            blocks[i] = b - take
        rounds += 1
    return ConstructionPlan(f.n, 1 + later, quota, later, 1 + rounds, prof.pair_sum)


def _encode(tables: np.ndarray) -> np.ndarray:
    shifts = 3 * np.arange(8, dtype=np.int64)
    return (tables.astype(np.int64) << shifts).sum(axis=1)


def _decode(codes: np.ndarray) -> np.ndarray:
    shifts = 3 * np.arange(8, dtype=np.int64)
    return (codes[:, None] >> shifts) & 7


def closure_size(eca, n: int = 3, cap: int | None = None) -> int:
    """Number of distinct maps realised by non-empty rule sequences.

    Breadth-first composition to a fixpoint over all rule maps; the
    identity counts only when some sequence produces it. Raises
    LimitsExceeded once more than ``cap`` maps are found.
    """
    if n != 3:
        raise BadParams("closure sizes are computed for n = 3 only")
    gens = np.asarray(rule_tables(eca, 3), dtype=np.int64)
    seen = np.zeros(1 << 24, dtype=bool)
    front = np.unique(_encode(gens))
    seen[front] = True
    total = front.size
    while front.size:
        tabs = _decode(front)
        new = np.unique(np.concatenate([_encode(g[tabs]) for g in gens]))
        new = new[~seen[new]]
        seen[new] = True
        total += new.size
        if cap is not None and total > cap:
            raise LimitsExceeded(f"closure exceeds {cap} maps")
        front = new
    return int(total)
