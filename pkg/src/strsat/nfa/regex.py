"""Extended regular expressions and their compilation to NFAs.

The AST mirrors the SMT-LIB regex constructors (including intersection,
complement and difference).  Compilation works over a fixed SymbolTable;
complement subtrees are kept as minimal DFAs, everything else is
simulation-reduced eagerly.
"""

from __future__ import annotations

from dataclasses import dataclass

from strsat.nfa.alphabet import SymbolTable
from strsat.nfa.automaton import Nfa


class Regex:
    __slots__ = ()


@dataclass(frozen=True)
class RNone(Regex):
    pass


@dataclass(frozen=True)
class RAll(Regex):
    pass


@dataclass(frozen=True)
class RAllChar(Regex):
    pass


@dataclass(frozen=True)
class RLit(Regex):
    word: tuple[int, ...]  # code points


@dataclass(frozen=True)
class RConcat(Regex):
    parts: tuple[Regex, ...]


@dataclass(frozen=True)
class RUnion(Regex):
    parts: tuple[Regex, ...]


@dataclass(frozen=True)
class RInter(Regex):
    parts: tuple[Regex, ...]


@dataclass(frozen=True)
class RComp(Regex):
    arg: Regex


@dataclass(frozen=True)
class RStar(Regex):
    arg: Regex


@dataclass(frozen=True)
class RPlus(Regex):
    arg: Regex


@dataclass(frozen=True)
class ROpt(Regex):
    arg: Regex


@dataclass(frozen=True)
class RRange(Regex):
    lo: int
    hi: int


@dataclass(frozen=True)
class RLoop(Regex):
    lo: int
    hi: int
    arg: Regex


@dataclass(frozen=True)
class RDiff(Regex):
    lhs: Regex
    rhs: Regex


def regex_code_points(r: Regex, acc: set[int]) -> None:
    """Collect the code points mentioned by a regex (literals and range
    endpoints)."""
    if isinstance(r, RLit):
        acc.update(r.word)
    elif isinstance(r, RRange):
        if r.lo <= r.hi:
            acc.add(r.lo)
            acc.add(r.hi)
    elif isinstance(r, (RConcat, RUnion, RInter)):
        for p in r.parts:
            regex_code_points(p, acc)
    elif isinstance(r, (RComp, RStar, RPlus, ROpt)):
        regex_code_points(r.arg, acc)
    elif isinstance(r, RLoop):
        regex_code_points(r.arg, acc)
    elif isinstance(r, RDiff):
        regex_code_points(r.lhs, acc)
        regex_code_points(r.rhs, acc)


def compile_regex(r: Regex, table: SymbolTable) -> Nfa:
    nfa = _compile(r, table)
    return nfa.trim()


def _reduce(nfa: Nfa) -> Nfa:
    return nfa.trim().reduce_simulation()


def _compile(r: Regex, table: SymbolTable) -> Nfa:
    k = table.num_symbols
    if isinstance(r, RNone):
        return Nfa.empty(k)
    if isinstance(r, RAll):
        return Nfa.universal(k)
    if isinstance(r, RAllChar):
        return Nfa.one_of(range(k), k)
    if isinstance(r, RLit):
        return Nfa.from_word(table.word_to_symbols(r.word), k)
    if isinstance(r, RRange):
        syms = table.symbols_in_range(r.lo, r.hi)
        if not syms:
            return Nfa.empty(k)
        return Nfa.one_of(syms, k)
    if isinstance(r, RConcat):
        out = Nfa.epsilon(k)
        for p in r.parts:
            out = _reduce(out.concat(_compile(p, table)))
        return out
    if isinstance(r, RUnion):
        out = Nfa.empty(k)
        for p in r.parts:
            out = _reduce(out.union(_compile(p, table)))
        return out
    if isinstance(r, RInter):
        out = Nfa.universal(k)
        for p in r.parts:
            out = _reduce(out.intersect(_compile(p, table)))
        return out
    if isinstance(r, RComp):
        inner = _compile(r.arg, table)
        return inner.complement().minimize_dfa()
    if isinstance(r, RStar):
        return _reduce(_compile(r.arg, table).star())
    if isinstance(r, RPlus):
        return _reduce(_compile(r.arg, table).plus())
    if isinstance(r, ROpt):
        return _reduce(_compile(r.arg, table).opt())
    if isinstance(r, RLoop):
        if r.lo > r.hi or r.lo < 0:
            return Nfa.empty(k)
        inner = _compile(r.arg, table)
        out = Nfa.epsilon(k)
        for _ in range(r.lo):
            out = _reduce(out.concat(inner))
        tail = Nfa.epsilon(k)
        for _ in range(r.hi - r.lo):
            tail = _reduce(inner.concat(tail).opt())
        return _reduce(out.concat(tail))
    if isinstance(r, RDiff):
        lhs = _compile(r.lhs, table)
        rhs_c = _compile(r.rhs, table).complement().minimize_dfa()
        return _reduce(lhs.intersect(rhs_c))
    raise TypeError(f"unknown regex node {r!r}")


def match_regex(r: Regex, word: tuple[int, ...]) -> bool:
    """Reference matcher by direct recursion over true code points.

    Independent of the NFA engine and of the finite-alphabet reduction;
    used as an oracle in tests and for model verification.
    """
    word = tuple(word)
    memo: dict = {}

    def m(rx: Regex, i: int, j: int) -> bool:
        key = (rx, i, j)
        got = memo.get(key)
        if got is None:
            got = _m(rx, i, j)
            memo[key] = got
        return got

    def mstar(arg: Regex, i: int, j: int) -> bool:
        key = ("*", arg, i, j)
        got = memo.get(key)
        if got is None:
            if i == j:
                got = True
            else:
                # nonempty first chunk guarantees progress
                got = any(
                    m(arg, i, s) and mstar(arg, s, j)
                    for s in range(i + 1, j + 1)
                )
            memo[key] = got
        return got

    def mloop(arg: Regex, lo: int, hi: int, i: int, j: int, done: int) -> bool:
        if i == j:
            return done >= lo or m(arg, i, i)
        if done >= hi:
            return False
        return any(
            m(arg, i, s) and mloop(arg, lo, hi, s, j, done + 1)
            for s in range(i + 1, j + 1)
        )

    def mseq(parts, i, j) -> bool:
        if not parts:
            return i == j
        head = parts[0]
        rest = parts[1:]
        return any(m(head, i, s) and mseq(rest, s, j) for s in range(i, j + 1))

    def _m(rx: Regex, i: int, j: int) -> bool:
        if isinstance(rx, RNone):
            return False
        if isinstance(rx, RAll):
            return True
        if isinstance(rx, RAllChar):
            return j - i == 1
        if isinstance(rx, RLit):
            return word[i:j] == rx.word
        if isinstance(rx, RRange):
            return j - i == 1 and rx.lo <= word[i] <= rx.hi
        if isinstance(rx, RConcat):
            return mseq(rx.parts, i, j)
        if isinstance(rx, RUnion):
            return any(m(p, i, j) for p in rx.parts)
        if isinstance(rx, RInter):
            return all(m(p, i, j) for p in rx.parts)
        if isinstance(rx, RComp):
            return not m(rx.arg, i, j)
        if isinstance(rx, RStar):
            return mstar(rx.arg, i, j)
        if isinstance(rx, RPlus):
            return any(
                m(rx.arg, i, s) and mstar(rx.arg, s, j)
                for s in range(i + 1, j + 1)
            ) or m(rx.arg, i, j)
        if isinstance(rx, ROpt):
            return i == j or m(rx.arg, i, j)
        if isinstance(rx, RLoop):
            if rx.lo > rx.hi or rx.lo < 0:
                return False
            return mloop(rx.arg, rx.lo, rx.hi, i, j, 0)
        if isinstance(rx, RDiff):
            return m(rx.lhs, i, j) and not m(rx.rhs, i, j)
        raise TypeError(f"unknown regex node {rx!r}")

    return m(r, 0, len(word))
