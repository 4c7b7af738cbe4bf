"""Typed terms, atoms and formulas.

String terms in the core are flattened concatenations of variables and
literals.  Items are plain tuples: ``('v', name)`` for a variable and
``('lit', word)`` for a nonempty literal, ``word`` being a tuple of code
points.  Integer terms are kept in linear form (constant plus coefficient
map over integer variables and length variables).
"""

from __future__ import annotations

from dataclasses import dataclass

from strsat.nfa.regex import Regex, match_regex, regex_code_points

# ---------------------------------------------------------------------------
# string sides

Item = tuple
Side = tuple  # tuple of Items


def lit(text) -> Item:
    word = tuple(ord(c) for c in text) if isinstance(text, str) else tuple(text)
    return ("lit", word)


def var(name: str) -> Item:
    return ("v", name)


def norm_side(items) -> Side:
    """Flatten and literal-normalize a concatenation."""
    out: list[Item] = []
    for it in items:
        kind = it[0]
        if kind == "lit":
            if not it[1]:
                continue
            if out and out[-1][0] == "lit":
                out[-1] = ("lit", out[-1][1] + it[1])
            else:
                out.append(it)
        else:
            out.append(it)
    return tuple(out)


def side_vars(side: Side):
    return [it[1] for it in side if it[0] == "v"]


def side_is_ground(side: Side) -> bool:
    return all(it[0] == "lit" for it in side)


def side_word(side: Side) -> tuple[int, ...]:
    assert side_is_ground(side)
    out: tuple[int, ...] = ()
    for it in side:
        out += it[1]
    return out


def side_value(side: Side, smodel: dict) -> tuple[int, ...]:
    out: tuple[int, ...] = ()
    for it in side:
        out += it[1] if it[0] == "lit" else smodel[it[1]]
    return out


def subst_side(side: Side, name: str, replacement: Side) -> Side:
    out: list[Item] = []
    for it in side:
        if it[0] == "v" and it[1] == name:
            out.extend(replacement)
        else:
            out.append(it)
    return norm_side(out)


# ---------------------------------------------------------------------------
# linear integer terms


@dataclass(frozen=True)
class Lin:
    """const + sum of coeff*key; keys are ('iv', name) or ('len', name)."""

    const: int = 0
    terms: tuple = ()  # tuple of (key, coeff), sorted, coeff != 0

    @staticmethod
    def of(const=0, coeffs=None) -> "Lin":
        acc: dict = {}
        for key, c in (coeffs or {}).items():
            if c:
                acc[key] = acc.get(key, 0) + c
        return Lin(int(const), tuple(sorted((k, c) for k, c in acc.items() if c)))

    @staticmethod
    def intvar(name: str) -> "Lin":
        return Lin(0, ((("iv", name), 1),))

    @staticmethod
    def lenvar(name: str) -> "Lin":
        return Lin(0, ((("len", name), 1),))

    @staticmethod
    def const_of(k: int) -> "Lin":
        return Lin(int(k), ())

    def add(self, other: "Lin") -> "Lin":
        acc = dict(self.terms)
        for k, c in other.terms:
            acc[k] = acc.get(k, 0) + c
        return Lin.of(self.const + other.const, acc)

    def scale(self, k: int) -> "Lin":
        if k == 0:
            return Lin(0, ())
        return Lin(self.const * k, tuple((key, c * k) for key, c in self.terms))

    def sub(self, other: "Lin") -> "Lin":
        return self.add(other.scale(-1))

    def is_const(self) -> bool:
        return not self.terms

    def keys(self):
        return [k for k, _ in self.terms]

    def evaluate(self, values: dict) -> int:
        return self.const + sum(c * values[k] for k, c in self.terms)


def side_len(side: Side) -> Lin:
    const = 0
    coeffs: dict = {}
    for it in side:
        if it[0] == "lit":
            const += len(it[1])
        else:
            key = ("len", it[1])
            coeffs[key] = coeffs.get(key, 0) + 1
    return Lin.of(const, coeffs)


# ---------------------------------------------------------------------------
# atoms and formulas


class Formula:
    __slots__ = ()


@dataclass(frozen=True)
class Top(Formula):
    pass


@dataclass(frozen=True)
class Bottom(Formula):
    pass


TRUE = Top()
FALSE = Bottom()


class Atom(Formula):
    __slots__ = ()


@dataclass(frozen=True)
class WordEq(Atom):
    lhs: Side
    rhs: Side

    @staticmethod
    def of(lhs, rhs) -> "WordEq":
        a, b = norm_side(lhs), norm_side(rhs)
        if b < a:
            a, b = b, a
        return WordEq(a, b)


@dataclass(frozen=True)
class InRe(Atom):
    items: Side
    regex: Regex

    @staticmethod
    def of(items, regex) -> "InRe":
        return InRe(norm_side(items), regex)


@dataclass(frozen=True)
class RegexEq(Atom):
    lhs: Regex
    rhs: Regex


@dataclass(frozen=True)
class LinLe(Atom):
    lin: Lin  # lin <= 0


@dataclass(frozen=True)
class LinEq(Atom):
    lin: Lin  # lin == 0

    @staticmethod
    def of(lin: Lin) -> "LinEq":
        # canonical sign
        lead = lin.terms[0][1] if lin.terms else lin.const
        if lead < 0:
            lin = lin.scale(-1)
        return LinEq(lin)


@dataclass(frozen=True)
class Contains(Atom):
    hay: Side
    needle: Side


@dataclass(frozen=True)
class PrefixOf(Atom):
    pre: Side
    full: Side


@dataclass(frozen=True)
class SuffixOf(Atom):
    suf: Side
    full: Side


@dataclass(frozen=True)
class SubstrIs(Atom):
    """res = substr(s, i, n) under SMT-LIB semantics (out of range -> '')."""

    res: str
    s: Side
    i: Lin
    n: Lin


@dataclass(frozen=True)
class ReplaceIs(Atom):
    """res = hay with its first occurrence of needle replaced by repl."""

    res: str
    hay: Side
    needle: Side
    repl: Side


@dataclass(frozen=True)
class IndexOfIs(Atom):
    """res (integer variable) = indexof(hay, needle, start); -1 if absent."""

    res: str
    hay: Side
    needle: Side
    start: Lin


@dataclass(frozen=True)
class Not(Formula):
    arg: Formula


@dataclass(frozen=True)
class And(Formula):
    args: tuple


@dataclass(frozen=True)
class Or(Formula):
    args: tuple


def fand(args) -> Formula:
    flat = []
    for a in args:
        if isinstance(a, Top):
            continue
        if isinstance(a, Bottom):
            return FALSE
        if isinstance(a, And):
            flat.extend(a.args)
        else:
            flat.append(a)
    if not flat:
        return TRUE
    if len(flat) == 1:
        return flat[0]
    return And(tuple(flat))


def for_(args) -> Formula:
    flat = []
    for a in args:
        if isinstance(a, Bottom):
            continue
        if isinstance(a, Top):
            return TRUE
        if isinstance(a, Or):
            flat.extend(a.args)
        else:
            flat.append(a)
    if not flat:
        return FALSE
    if len(flat) == 1:
        return flat[0]
    return Or(tuple(flat))


def fnot(a: Formula) -> Formula:
    if isinstance(a, Top):
        return FALSE
    if isinstance(a, Bottom):
        return TRUE
    if isinstance(a, Not):
        return a.arg
    return Not(a)


def nnf(f: Formula, positive: bool = True) -> Formula:
    """Negation normal form: negation only directly above atoms."""
    if isinstance(f, Top):
        return TRUE if positive else FALSE
    if isinstance(f, Bottom):
        return FALSE if positive else TRUE
    if isinstance(f, Not):
        return nnf(f.arg, not positive)
    if isinstance(f, And):
        parts = [nnf(a, positive) for a in f.args]
        return fand(parts) if positive else for_(parts)
    if isinstance(f, Or):
        parts = [nnf(a, positive) for a in f.args]
        return for_(parts) if positive else fand(parts)
    assert isinstance(f, Atom)
    return f if positive else Not(f)


def atoms_of(f: Formula) -> list:
    seen = []
    seen_set = set()

    def walk(g):
        if isinstance(g, (Top, Bottom)):
            return
        if isinstance(g, Not):
            walk(g.arg)
        elif isinstance(g, (And, Or)):
            for a in g.args:
                walk(a)
        else:
            if g not in seen_set:
                seen_set.add(g)
                seen.append(g)

    walk(f)
    return seen


def formula_vars(f: Formula):
    """(string variables, integer variables) occurring in a formula."""
    svars: set[str] = set()
    ivars: set[str] = set()

    def lin_vars(lin: Lin):
        for (kind, name), _c in lin.terms:
            (svars if kind == "len" else ivars).add(name)

    for a in atoms_of(f):
        if isinstance(a, WordEq):
            svars.update(side_vars(a.lhs) + side_vars(a.rhs))
        elif isinstance(a, InRe):
            svars.update(side_vars(a.items))
        elif isinstance(a, (LinLe, LinEq)):
            lin_vars(a.lin)
        elif isinstance(a, Contains):
            svars.update(side_vars(a.hay) + side_vars(a.needle))
        elif isinstance(a, PrefixOf):
            svars.update(side_vars(a.pre) + side_vars(a.full))
        elif isinstance(a, SuffixOf):
            svars.update(side_vars(a.suf) + side_vars(a.full))
        elif isinstance(a, SubstrIs):
            svars.add(a.res)
            svars.update(side_vars(a.s))
            lin_vars(a.i)
            lin_vars(a.n)
        elif isinstance(a, ReplaceIs):
            svars.add(a.res)
            svars.update(side_vars(a.hay) + side_vars(a.needle) + side_vars(a.repl))
        elif isinstance(a, IndexOfIs):
            ivars.add(a.res)
            svars.update(side_vars(a.hay) + side_vars(a.needle))
            lin_vars(a.start)
    return svars, ivars


def formula_code_points(f: Formula) -> set[int]:
    acc: set[int] = set()

    def side_points(side):
        for it in side:
            if it[0] == "lit":
                acc.update(it[1])

    for a in atoms_of(f):
        if isinstance(a, WordEq):
            side_points(a.lhs)
            side_points(a.rhs)
        elif isinstance(a, InRe):
            side_points(a.items)
            regex_code_points(a.regex, acc)
        elif isinstance(a, RegexEq):
            regex_code_points(a.lhs, acc)
            regex_code_points(a.rhs, acc)
        elif isinstance(a, Contains):
            side_points(a.hay)
            side_points(a.needle)
        elif isinstance(a, PrefixOf):
            side_points(a.pre)
            side_points(a.full)
        elif isinstance(a, SuffixOf):
            side_points(a.suf)
            side_points(a.full)
        elif isinstance(a, SubstrIs):
            side_points(a.s)
        elif isinstance(a, ReplaceIs):
            side_points(a.hay)
            side_points(a.needle)
            side_points(a.repl)
        elif isinstance(a, IndexOfIs):
            side_points(a.hay)
            side_points(a.needle)
    return acc


# ---------------------------------------------------------------------------
# direct evaluation (reference semantics; used for model verification)


def eval_atom(a: Atom, smodel: dict, imodel: dict) -> bool:
    values = _int_env(smodel, imodel)
    if isinstance(a, WordEq):
        return side_value(a.lhs, smodel) == side_value(a.rhs, smodel)
    if isinstance(a, InRe):
        return match_regex(a.regex, side_value(a.items, smodel))
    if isinstance(a, RegexEq):
        raise ValueError("ground regex equations are folded before evaluation")
    if isinstance(a, LinLe):
        return a.lin.evaluate(values) <= 0
    if isinstance(a, LinEq):
        return a.lin.evaluate(values) == 0
    if isinstance(a, Contains):
        hay = side_value(a.hay, smodel)
        needle = side_value(a.needle, smodel)
        return _contains(hay, needle)
    if isinstance(a, PrefixOf):
        pre = side_value(a.pre, smodel)
        full = side_value(a.full, smodel)
        return full[: len(pre)] == pre
    if isinstance(a, SuffixOf):
        suf = side_value(a.suf, smodel)
        full = side_value(a.full, smodel)
        return len(suf) <= len(full) and full[len(full) - len(suf):] == suf
    if isinstance(a, SubstrIs):
        s = side_value(a.s, smodel)
        return smodel[a.res] == substr_value(
            s, a.i.evaluate(values), a.n.evaluate(values)
        )
    if isinstance(a, ReplaceIs):
        hay = side_value(a.hay, smodel)
        needle = side_value(a.needle, smodel)
        repl = side_value(a.repl, smodel)
        return smodel[a.res] == replace_value(hay, needle, repl)
    if isinstance(a, IndexOfIs):
        hay = side_value(a.hay, smodel)
        needle = side_value(a.needle, smodel)
        return imodel[a.res] == indexof_value(hay, needle, a.start.evaluate(values))
    raise TypeError(f"unknown atom {a!r}")


def substr_value(s, i: int, n: int):
    if 0 <= i < len(s) and n > 0:
        return s[i : i + n]
    return ()


def replace_value(s, t, r):
    if not t:
        return r + s
    for j in range(len(s) - len(t) + 1):
        if s[j : j + len(t)] == t:
            return s[:j] + r + s[j + len(t):]
    return s


def indexof_value(s, t, i: int) -> int:
    if i < 0 or i > len(s):
        return -1
    for j in range(i, len(s) - len(t) + 1):
        if s[j : j + len(t)] == t:
            return j
    return -1


def _contains(hay, needle) -> bool:
    if not needle:
        return True
    return any(
        hay[i : i + len(needle)] == needle
        for i in range(len(hay) - len(needle) + 1)
    )


def _int_env(smodel: dict, imodel: dict) -> dict:
    env = {("iv", n): v for n, v in imodel.items()}
    for n, w in smodel.items():
        env[("len", n)] = len(w)
    return env


def eval_formula(f: Formula, smodel: dict, imodel: dict) -> bool:
    if isinstance(f, Top):
        return True
    if isinstance(f, Bottom):
        return False
    if isinstance(f, Not):
        return not eval_formula(f.arg, smodel, imodel)
    if isinstance(f, And):
        return all(eval_formula(a, smodel, imodel) for a in f.args)
    if isinstance(f, Or):
        return any(eval_formula(a, smodel, imodel) for a in f.args)
    return eval_atom(f, smodel, imodel)
