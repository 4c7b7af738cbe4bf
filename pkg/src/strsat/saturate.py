"""Axiom saturation: predicate rewrites and length-aware axioms.

The input formula is put into negation normal form and every predicate
or purified-function atom is rewritten, polarity-aware, into the core
language of word (dis)equations, regular constraints and linear length
constraints.  Length axioms (equation length agreement, nonnegativity of
lengths) are conjoined afterwards.

Negated ``contains`` with a non-literal needle has no finite rewrite in
this fragment; the atom is kept and the theory layer reports unknown if
it becomes relevant.
"""

from __future__ import annotations

from strsat.errors import Unsupported
from strsat.ir import (
    And,
    Atom,
    Bottom,
    Contains,
    FALSE,
    Formula,
    IndexOfIs,
    InRe,
    Lin,
    LinEq,
    LinLe,
    Not,
    Or,
    PrefixOf,
    RegexEq,
    ReplaceIs,
    SubstrIs,
    SuffixOf,
    TRUE,
    Top,
    WordEq,
    atoms_of,
    eval_atom,
    fand,
    fnot,
    for_,
    formula_vars,
    indexof_value,
    lit,
    replace_value,
    nnf,
    side_is_ground,
    side_len,
    side_word,
    substr_value,
    var,
)
from strsat.nfa.regex import RAll, RAllChar, RComp, RConcat, RLit, RPlus


class _Namer:
    def __init__(self, used):
        self.used = set(used)
        self.n = 0

    def fresh(self, hint: str) -> str:
        while True:
            name = f"%g{hint}{self.n}"
            self.n += 1
            if name not in self.used:
                self.used.add(name)
                return name


def saturate(f: Formula) -> Formula:
    svars, ivars = formula_vars(f)
    namer = _Namer(svars | ivars)
    g = _rewrite(_fold_ground(nnf(f)), True, namer)
    g = _fold_ground(g)
    lemmas = []
    for a in atoms_of(g):
        if isinstance(a, WordEq):
            diff = side_len(a.lhs).sub(side_len(a.rhs))
            if diff.terms or diff.const:
                lemmas.append(for_([fnot(a), LinEq.of(diff)]))
    seen_len = set()
    for h in [g, *lemmas]:
        for a in atoms_of(h):
            for key in _len_keys(a):
                if key not in seen_len:
                    seen_len.add(key)
                    lemmas.append(LinLe(Lin.of(0, {key: -1})))
    return fand([g, *lemmas])


def _len_keys(a: Atom):
    if isinstance(a, (LinLe, LinEq)):
        return [k for k in a.lin.keys() if k[0] == "len"]
    return []


# ---------------------------------------------------------------------------
# polarity-aware rewrites


def _rewrite(f: Formula, positive: bool, namer: _Namer) -> Formula:
    # f is in NNF, so Not only wraps atoms; fresh variables introduced by
    # the rewrites are existential and therefore polarity must be handled
    # by dedicated positive/negative tables, never by double negation.
    assert positive
    if isinstance(f, (Top, Bottom)):
        return f
    if isinstance(f, Not):
        assert isinstance(f.arg, Atom)
        return _neg(f.arg, namer)
    if isinstance(f, And):
        return fand([_rewrite(a, positive, namer) for a in f.args])
    if isinstance(f, Or):
        return for_([_rewrite(a, positive, namer) for a in f.args])
    assert isinstance(f, Atom)
    return _pos(f, namer)


def _pos(a: Atom, namer: _Namer) -> Formula:
    if isinstance(a, Contains):
        p = var(namer.fresh("p"))
        q = var(namer.fresh("q"))
        return WordEq.of(a.hay, (p, *a.needle, q))
    if isinstance(a, PrefixOf):
        q = var(namer.fresh("q"))
        return WordEq.of(a.full, (*a.pre, q))
    if isinstance(a, SuffixOf):
        p = var(namer.fresh("p"))
        return WordEq.of(a.full, (p, *a.suf))
    if isinstance(a, SubstrIs):
        return _substr(a, namer)
    if isinstance(a, ReplaceIs):
        return _replace(a, namer)
    if isinstance(a, IndexOfIs):
        return _indexof(a, namer)
    return a


def _neg(a: Atom, namer: _Namer) -> Formula:
    """A formula equivalent to the negation of ``a``."""
    if isinstance(a, Contains):
        if side_is_ground(a.needle):
            w = side_word(a.needle)
            if not w:
                return FALSE  # every string contains the empty string
            return fnot(InRe.of(a.hay, _occurs(w)))
        return fnot(a)  # kept; theory reports unknown if relevant
    if isinstance(a, PrefixOf):
        if side_is_ground(a.pre):
            w = side_word(a.pre)
            return fnot(InRe.of(a.full, RConcat((RLit(w), RAll()))))
        return _neg_prefix(a.pre, a.full, namer)
    if isinstance(a, SuffixOf):
        if side_is_ground(a.suf):
            w = side_word(a.suf)
            return fnot(InRe.of(a.full, RConcat((RAll(), RLit(w)))))
        return _neg_suffix(a.suf, a.full, namer)
    if isinstance(a, SubstrIs):
        return _neq_string_fun(a, namer)
    if isinstance(a, ReplaceIs):
        return _neq_string_fun(a, namer)
    if isinstance(a, IndexOfIs):
        return _neq_int_fun(a, namer)
    return fnot(a)


def _occurs(w) -> RConcat:
    return RConcat((RAll(), RLit(w), RAll()))


def _neg_prefix(pre, full, namer) -> Formula:
    """not prefixof(pre, full): pre is too long, or the aligned prefix of
    full differs from pre."""
    p = var(namer.fresh("p"))
    q = var(namer.fresh("q"))
    too_long = _le0(side_len(full).sub(side_len(pre)).add(Lin.const_of(1)))
    differs = fand(
        [
            WordEq.of(full, (p, q)),
            LinEq.of(Lin.lenvar(p[1]).sub(side_len(pre))),
            fnot(WordEq.of((p,), pre)),
        ]
    )
    return for_([too_long, differs])


def _neg_suffix(suf, full, namer) -> Formula:
    p = var(namer.fresh("p"))
    q = var(namer.fresh("q"))
    too_long = _le0(side_len(full).sub(side_len(suf)).add(Lin.const_of(1)))
    differs = fand(
        [
            WordEq.of(full, (p, q)),
            LinEq.of(Lin.lenvar(q[1]).sub(side_len(suf))),
            fnot(WordEq.of((q,), suf)),
        ]
    )
    return for_([too_long, differs])


def _le0(lin: Lin) -> Formula:
    return LinLe(lin)


def _substr(a: SubstrIs, namer) -> Formula:
    res = (var(a.res),)
    s_len = side_len(a.s)
    r_len = side_len(res)
    i, n = a.i, a.n
    p = var(namer.fresh("p"))
    q = var(namer.fresh("q"))
    in_range = fand(
        [
            _le0(i.scale(-1)),  # i >= 0
            _le0(i.sub(s_len).add(Lin.const_of(1))),  # i < |s|
            _le0(n.scale(-1).add(Lin.const_of(1))),  # n > 0
        ]
    )
    common = fand([_le0(Lin.lenvar(p[1]).sub(i)), _le0(i.sub(Lin.lenvar(p[1])))])
    # n fits: |res| = n, a tail may remain
    fits = fand(
        [
            in_range,
            _le0(n.sub(s_len).add(i)),  # n <= |s| - i
            WordEq.of(a.s, (p, *res, q)),
            common,
            LinEq.of(r_len.sub(n)),
        ]
    )
    # n overshoots: res runs to the end of s
    overshoot = fand(
        [
            in_range,
            _le0(s_len.sub(i).sub(n).add(Lin.const_of(1))),  # |s| - i < n
            WordEq.of(a.s, (p, *res)),
            common,
        ]
    )
    degenerate = fand(
        [
            for_(
                [
                    _le0(i.add(Lin.const_of(1))),  # i < 0
                    _le0(s_len.sub(i)),  # i >= |s|
                    _le0(n),  # n <= 0
                ]
            ),
            WordEq.of(res, ()),
        ]
    )
    return for_([fits, overshoot, degenerate])


def _replace(a: ReplaceIs, namer) -> Formula:
    if not side_is_ground(a.needle):
        raise Unsupported("str.replace with a non-literal pattern")
    t = side_word(a.needle)
    res = (var(a.res),)
    if not t:
        return WordEq.of(res, (*a.repl, *a.hay))
    p = var(namer.fresh("p"))
    q = var(namer.fresh("q"))
    hit = fand(
        [
            WordEq.of(a.hay, (p, lit(t), q)),
            WordEq.of(res, (p, *a.repl, q)),
            # first occurrence: no earlier hit inside p.t
            InRe.of((p, lit(t)), RComp(RConcat((RAll(), RLit(t), RPlus(RAllChar()))))),
        ]
    )
    miss = fand(
        [
            fnot(InRe.of(a.hay, _occurs(t))),
            WordEq.of(res, a.hay),
        ]
    )
    return for_([hit, miss])


def _indexof(a: IndexOfIs, namer) -> Formula:
    if not side_is_ground(a.needle):
        raise Unsupported("str.indexof with a non-literal pattern")
    t = side_word(a.needle)
    k = Lin.intvar(a.res)
    h_len = side_len(a.hay)
    start = a.start
    invalid = fand(
        [
            for_(
                [
                    _le0(start.add(Lin.const_of(1))),  # start < 0
                    _le0(h_len.sub(start).add(Lin.const_of(1))),  # start > |hay|
                ]
            ),
            LinEq.of(k.add(Lin.const_of(1))),
        ]
    )
    valid_range = fand(
        [_le0(start.scale(-1)), _le0(start.sub(h_len))]  # 0 <= start <= |hay|
    )
    if not t:
        found = fand([valid_range, LinEq.of(k.sub(start))])
        return for_([invalid, found])
    p1 = var(namer.fresh("p"))
    p2 = var(namer.fresh("p"))
    q = var(namer.fresh("q"))
    missing = fand(
        [
            valid_range,
            LinEq.of(k.add(Lin.const_of(1))),
            WordEq.of(a.hay, (p1, q)),
            LinEq.of(Lin.lenvar(p1[1]).sub(start)),
            fnot(InRe.of((q,), _occurs(t))),
        ]
    )
    found = fand(
        [
            valid_range,
            WordEq.of(a.hay, (p1, p2, lit(t), q)),
            LinEq.of(Lin.lenvar(p1[1]).sub(start)),
            LinEq.of(Lin.lenvar(p1[1]).add(Lin.lenvar(p2[1])).sub(k)),
            # no hit between start and k
            InRe.of((p2, lit(t)), RComp(RConcat((RAll(), RLit(t), RPlus(RAllChar()))))),
        ]
    )
    return for_([invalid, missing, found])


def _neq_string_fun(a, namer) -> Formula:
    """res != f(args), via a fresh variable bound to the function value."""
    v = namer.fresh("v")
    if isinstance(a, SubstrIs):
        pos = _substr(SubstrIs(v, a.s, a.i, a.n), namer)
    else:
        pos = _replace(ReplaceIs(v, a.hay, a.needle, a.repl), namer)
    return fand([pos, fnot(WordEq.of((var(a.res),), (var(v),)))])


def _neq_int_fun(a: IndexOfIs, namer) -> Formula:
    v = namer.fresh("j")
    pos = _indexof(IndexOfIs(v, a.hay, a.needle, a.start), namer)
    return fand(
        [pos, fnot(LinEq.of(Lin.intvar(a.res).sub(Lin.intvar(v))))]
    )


# ---------------------------------------------------------------------------
# ground folding


def _fold_ground(f: Formula) -> Formula:
    if isinstance(f, (Top, Bottom)):
        return f
    if isinstance(f, Not):
        return fnot(_fold_ground(f.arg))
    if isinstance(f, And):
        return fand([_fold_ground(a) for a in f.args])
    if isinstance(f, Or):
        return for_([_fold_ground(a) for a in f.args])
    assert isinstance(f, Atom)
    if isinstance(f, RegexEq):
        return f  # decided by the driver with automata
    if isinstance(f, (LinLe, LinEq)):
        if f.lin.is_const():
            ok = f.lin.const <= 0 if isinstance(f, LinLe) else f.lin.const == 0
            return TRUE if ok else FALSE
        return f
    if isinstance(f, WordEq) and side_is_ground(f.lhs) and side_is_ground(f.rhs):
        return TRUE if side_word(f.lhs) == side_word(f.rhs) else FALSE
    if isinstance(f, InRe) and side_is_ground(f.items):
        return TRUE if eval_atom(f, {}, {}) else FALSE
    if (
        isinstance(f, Contains)
        and side_is_ground(f.hay)
        and side_is_ground(f.needle)
    ):
        return TRUE if eval_atom(f, {}, {}) else FALSE
    if (
        isinstance(f, PrefixOf)
        and side_is_ground(f.pre)
        and side_is_ground(f.full)
    ):
        return TRUE if eval_atom(f, {}, {}) else FALSE
    if (
        isinstance(f, SuffixOf)
        and side_is_ground(f.suf)
        and side_is_ground(f.full)
    ):
        return TRUE if eval_atom(f, {}, {}) else FALSE
    # purified string functions over ground arguments collapse to a plain
    # binding of the result variable
    if isinstance(f, SubstrIs) and side_is_ground(f.s):
        if f.i.is_const() and f.n.is_const():
            w = substr_value(side_word(f.s), f.i.const, f.n.const)
            return WordEq.of((var(f.res),), (lit(w),))
        return f
    if (
        isinstance(f, ReplaceIs)
        and side_is_ground(f.hay)
        and side_is_ground(f.needle)
        and side_is_ground(f.repl)
    ):
        w = replace_value(
            side_word(f.hay), side_word(f.needle), side_word(f.repl)
        )
        return WordEq.of((var(f.res),), (lit(w),))
    if (
        isinstance(f, IndexOfIs)
        and side_is_ground(f.hay)
        and side_is_ground(f.needle)
        and f.start.is_const()
    ):
        k = indexof_value(side_word(f.hay), side_word(f.needle), f.start.const)
        return LinEq.of(Lin.intvar(f.res).sub(Lin.const_of(k)))
    return f
