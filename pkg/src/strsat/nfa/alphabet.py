"""Finite-alphabet reduction.

The solver never works over full Unicode.  The effective alphabet of a
solve call consists of the code points that appear explicitly in the input
formula plus a small number of *dummy* symbols, each standing for a
distinct code point that the formula does not mention.  All regexes treat
the dummies identically, so one dummy is enough for equations and regular
constraints; disequations can force pairwise-distinct unmentioned
characters, which is why the table may carry several dummies.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import chain

MAX_CODE_POINT = 0x2FFFF  # SMT-LIB string characters are in [0, 0x2FFFF]
NUM_CODE_POINTS = MAX_CODE_POINT + 1


@dataclass(frozen=True)
class SymbolTable:
    """Maps symbol codes 0..num_symbols-1 to code-point classes.

    Codes < len(codes) are the explicit code points (sorted); the remaining
    ``n_dummies`` codes are dummies.  The table is fixed per solve call.
    """

    codes: tuple[int, ...]
    n_dummies: int = 1

    def __post_init__(self):
        assert list(self.codes) == sorted(set(self.codes))
        assert self.n_dummies <= self.unmentioned_total

    @property
    def num_symbols(self) -> int:
        return len(self.codes) + self.n_dummies

    @property
    def unmentioned_total(self) -> int:
        return NUM_CODE_POINTS - len(self.codes)

    def symbols(self) -> range:
        return range(self.num_symbols)

    def is_dummy(self, sym: int) -> bool:
        return sym >= len(self.codes)

    def symbol_of(self, code_point: int) -> int | None:
        """Symbol for an explicit code point, or None if unmentioned."""
        lo, hi = 0, len(self.codes)
        while lo < hi:
            mid = (lo + hi) // 2
            if self.codes[mid] < code_point:
                lo = mid + 1
            else:
                hi = mid
        if lo < len(self.codes) and self.codes[lo] == code_point:
            return lo
        return None

    def word_to_symbols(self, word: tuple[int, ...]) -> tuple[int, ...]:
        out = []
        for cp in word:
            sym = self.symbol_of(cp)
            if sym is None:
                raise KeyError(f"code point {cp} not in symbol table")
            out.append(sym)
        return tuple(out)

    def symbols_in_range(self, lo: int, hi: int) -> list[int]:
        """Symbols denoting code points in [lo, hi].

        Dummies are included when the range covers at least one unmentioned
        code point (the standard reduction maps all unmentioned points to
        the dummies).
        """
        if lo > hi:
            return []
        explicit = [i for i, cp in enumerate(self.codes) if lo <= cp <= hi]
        result = explicit[:]
        span = min(hi, MAX_CODE_POINT) - max(lo, 0) + 1
        if span > len(explicit):
            result.extend(range(len(self.codes), self.num_symbols))
        return result

    def concretize(self, sym: int) -> int:
        """A concrete code point for a symbol; dummies map to distinct
        unmentioned code points, chosen deterministically."""
        if not self.is_dummy(sym):
            return self.codes[sym]
        want = sym - len(self.codes)
        mentioned = set(self.codes)
        # prefer printable letters for readable models; lazy chain, the
        # tail range is huge and almost never reached
        count = 0
        for cp in chain(
            range(0x61, 0x7B),
            range(0x41, 0x5B),
            range(0x30, 0x3A),
            range(0x21, NUM_CODE_POINTS),
        ):
            if cp in mentioned:
                continue
            if count == want:
                return cp
            count += 1
        raise AssertionError("no unmentioned code point left")

    def concretize_word(self, syms: tuple[int, ...]) -> tuple[int, ...]:
        return tuple(self.concretize(s) for s in syms)

    @staticmethod
    def build(code_points, n_disequations: int = 0) -> "SymbolTable":
        codes = tuple(sorted(set(code_points)))
        # one dummy always; disequations may need pairwise-distinct
        # unmentioned characters, one extra dummy per disequation (capped)
        want = 1 + min(int(n_disequations), 5)
        n_dummies = min(want, NUM_CODE_POINTS - len(codes))
        return SymbolTable(codes, n_dummies)
