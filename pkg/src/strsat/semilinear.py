"""Finite unions of arithmetic progressions (offset, period).

Used for the length abstraction of automata: the set denoted by
``{(a, p), ...}`` is the union of ``{a + p*k | k >= 0}``; period 0 denotes
the singleton ``{a}``.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import gcd

# pairwise sums switch to a (sound) overapproximation beyond this table size
_EXACT_SUM_CAP = 4096


@dataclass(frozen=True)
class Semilinear:
    progressions: tuple[tuple[int, int], ...]

    @staticmethod
    def of(pairs) -> "Semilinear":
        return Semilinear(tuple(sorted(set((int(a), int(p)) for a, p in pairs))))

    @staticmethod
    def empty() -> "Semilinear":
        return Semilinear(())

    @staticmethod
    def singleton(n: int) -> "Semilinear":
        return Semilinear(((n, 0),))

    def is_empty(self) -> bool:
        return not self.progressions

    def contains(self, n: int) -> bool:
        for a, p in self.progressions:
            if p == 0:
                if n == a:
                    return True
            elif n >= a and (n - a) % p == 0:
                return True
        return False

    def min_value(self) -> int:
        assert self.progressions
        return min(a for a, _ in self.progressions)

    def union(self, other: "Semilinear") -> "Semilinear":
        return Semilinear.of(self.progressions + other.progressions)

    def add(self, other: "Semilinear") -> "Semilinear":
        """Pointwise sum.  Exact for small periods; falls back to a sound
        overapproximation (coarser period lattice) for large ones."""
        out: list[tuple[int, int]] = []
        for a, p in self.progressions:
            for b, q in other.progressions:
                out.extend(_sum_pair(a, p, b, q))
        return Semilinear.of(out)

    def intersects(self, other: "Semilinear") -> bool:
        for a, p in self.progressions:
            for b, q in other.progressions:
                if _pair_intersects(a, p, b, q):
                    return True
        return False


def _sum_pair(a: int, p: int, b: int, q: int):
    base = a + b
    if p == 0 and q == 0:
        return [(base, 0)]
    if p == 0:
        return [(base, q)]
    if q == 0:
        return [(base, p)]
    g = gcd(p, q)
    pp, qq = p // g, q // g
    limit = pp * qq
    if limit > _EXACT_SUM_CAP:
        return [(base, g)]  # overapproximation: full g-lattice
    # numerical semigroup generated by pp and qq: all m >= (pp-1)(qq-1)
    # are representable; enumerate the smaller ones explicitly
    reachable = [False] * (limit + 1)
    reachable[0] = True
    for m in range(limit + 1):
        if reachable[m]:
            if m + pp <= limit:
                reachable[m + pp] = True
            if m + qq <= limit:
                reachable[m + qq] = True
    out = [(base + m * g, 0) for m in range(limit) if reachable[m]]
    out.append((base + limit * g, g))
    return out


def _pair_intersects(a: int, p: int, b: int, q: int) -> bool:
    if p == 0 and q == 0:
        return a == b
    if p == 0:
        return a >= b and (a - b) % q == 0
    if q == 0:
        return b >= a and (b - a) % p == 0
    g = gcd(p, q)
    for k in range(q // g):
        if (a + p * k - b) % q == 0:
            return True
    return False
