"""Elementary CA rules and their mirror/complement symmetry classes."""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

from .errors import DomainError


def _check_code(code: int) -> int:
    if not 0 <= int(code) <= 255:
        raise DomainError(f"Wolfram code must be in 0..255, got {code}")
    return int(code)


@dataclass(frozen=True, order=True)
class WolframRule:
    """An 8-bit local update table.

    ``bits[k]`` is the new value of a cell whose neighbourhood
    ``(left, center, right)`` reads ``k = 4*left + 2*center + right``.
    """

    code: int

    def __post_init__(self) -> None:
        _check_code(self.code)

    @property
    def bits(self) -> tuple[int, ...]:
        return tuple((self.code >> k) & 1 for k in range(8))

    @classmethod
    def from_bits(cls, bits) -> "WolframRule":
        bits = list(bits)
        if len(bits) != 8 or any(b not in (0, 1) for b in bits):
            raise DomainError("need exactly 8 bits")
        return cls(sum(b << k for k, b in enumerate(bits)))

    def __int__(self) -> int:
        return self.code


def as_rule(rule) -> WolframRule:
    """Accept a WolframRule or a plain integer code."""
    if isinstance(rule, WolframRule):
        return rule
    return WolframRule(_check_code(rule))


def local_update(rule, left: int, center: int, right: int) -> int:
    code = as_rule(rule).code
    return (code >> (4 * left + 2 * center + right)) & 1


def mirror(rule) -> WolframRule:
    """Swap the roles of the left and right neighbour."""
    code = as_rule(rule).code
    out = 0
    for a in (0, 1):
        for b in (0, 1):
            for c in (0, 1):
                out |= ((code >> (4 * c + 2 * b + a)) & 1) << (4 * a + 2 * b + c)
    return WolframRule(out)


def complement(rule) -> WolframRule:
    """Swap the roles of the states 0 and 1."""
    code = as_rule(rule).code
    out = 0
    for k in range(8):
        out |= (1 - ((code >> (7 - k)) & 1)) << k
    return WolframRule(out)


@dataclass(frozen=True)
class FamilyRecord:
    canonical: WolframRule
    members: frozenset[int]

    def __contains__(self, code) -> bool:
        return int(code) in self.members


@lru_cache(maxsize=None)
def _closure(code: int) -> frozenset[int]:
    seen = {code}
    todo = [code]
    while todo:
        c = todo.pop()
        for img in (mirror(c).code, complement(c).code):
            if img not in seen:
                seen.add(img)
                todo.append(img)
    return frozenset(seen)


def family_of(rule) -> FamilyRecord:
    members = _closure(as_rule(rule).code)
    return FamilyRecord(WolframRule(min(members)), members)


@lru_cache(maxsize=1)
def enumerate_families() -> tuple[FamilyRecord, ...]:
    """All symmetry classes, sorted by canonical (smallest) code."""
    out = {}
    for code in range(256):
        rec = family_of(code)
        out.setdefault(rec.canonical.code, rec)
    return tuple(out[c] for c in sorted(out))
