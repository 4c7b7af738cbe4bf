"""Per-procedure preprocessing of conjunctive systems.

Ordered rule pipeline run to fixpoint: epsilon propagation, variable
propagation, ground-equation-to-regular conversion, common-affix
trimming and aligned splits, disequation reduction, and early
unsatisfiability patterns.  Underapproximating rules are not applied;
every transformation is equisatisfiability-preserving.

Substitutions eliminate variables, so the applied substitution log is
returned for model reconstruction.
"""

from __future__ import annotations

from strsat.ir import (
    And,
    Formula,
    Lin,
    LinEq,
    LinLe,
    Not,
    Or,
    side_is_ground,
    side_word,
)
from strsat.nfa.automaton import Nfa
from strsat.semilinear import Semilinear
from strsat.system import ConjunctiveSystem, substitute

_MAX_ROUNDS = 100

_PIPELINES = {
    "stabilization": (1, 2, 3, 4, 5, 6),
    "nielsen": (1, 2, 5, 6),
    "regex-eq": (),
}


def preprocess(sys: ConjunctiveSystem, target: str):
    """Returns ('unsat', reason) or ('ok', sys, subst_log)."""
    rules = _PIPELINES[target]
    log: list = []
    for _ in range(_MAX_ROUNDS):
        changed = False
        for rule in rules:
            res = _RULES[rule](sys, log)
            if res == "unsat":
                return ("unsat", f"preprocess rule {rule}")
            changed = changed or res
        if not changed:
            break
    return ("ok", sys, log)


def _apply_subst(sys, log, name, replacement) -> None:
    substitute(sys, name, replacement)
    log.append((name, replacement))


def _rule_epsilon(sys: ConjunctiveSystem, log):
    for idx, (lhs, rhs) in enumerate(sys.equations):
        empty, other = (lhs, rhs) if not lhs else (rhs, lhs)
        if empty:
            continue
        for it in other:
            if it[0] == "lit":
                return "unsat"
        del sys.equations[idx]
        for name in {it[1] for it in other}:
            sys.ensure_var(name)
            if not sys.regular[name].accepts(()):
                return "unsat"
            sys.regular.pop(name)
            sys.lia.append(LinEq.of(Lin.lenvar(name)))
            _apply_subst(sys, log, name, ())
        return True
    return False


def _rule_varprop(sys: ConjunctiveSystem, log):
    for idx, (lhs, rhs) in enumerate(sys.equations):
        if (
            len(lhs) == 1
            and len(rhs) == 1
            and lhs[0][0] == "v"
            and rhs[0][0] == "v"
        ):
            x, y = lhs[0][1], rhs[0][1]
            del sys.equations[idx]
            if x == y:
                return True
            sys.ensure_var(x)
            sys.ensure_var(y)
            sys.constrain(x, sys.regular.pop(y))
            _apply_subst(sys, log, y, ((("v", x)),))
            _rename_len_var(sys, y, x)
            if y in sys.len_vars:
                sys.len_vars.discard(y)
                sys.len_vars.add(x)
            return True
    return False


def _rename_len_var(sys: ConjunctiveSystem, old: str, new: str):
    okey, nkey = ("len", old), ("len", new)

    def ren_lin(lin: Lin) -> Lin:
        coeffs = dict(lin.terms)
        if okey not in coeffs:
            return lin
        c = coeffs.pop(okey)
        coeffs[nkey] = coeffs.get(nkey, 0) + c
        return Lin.of(lin.const, coeffs)

    def ren(f: Formula) -> Formula:
        if isinstance(f, Not):
            return Not(ren(f.arg))
        if isinstance(f, And):
            return And(tuple(ren(a) for a in f.args))
        if isinstance(f, Or):
            return Or(tuple(ren(a) for a in f.args))
        if isinstance(f, LinLe):
            return LinLe(ren_lin(f.lin))
        if isinstance(f, LinEq):
            return LinEq(ren_lin(f.lin))
        return f

    sys.lia = [ren(f) for f in sys.lia]


def _rule_to_regular(sys: ConjunctiveSystem, log):
    for idx, (lhs, rhs) in enumerate(sys.equations):
        for a, b in ((lhs, rhs), (rhs, lhs)):
            if len(a) == 1 and a[0][0] == "v" and side_is_ground(b):
                name = a[0][1]
                word = side_word(b)
                del sys.equations[idx]
                syms = sys.table.word_to_symbols(word)
                sys.constrain(name, Nfa.from_word(syms, sys.table.num_symbols))
                return True
    return False


def _rule_split(sys: ConjunctiveSystem, log):
    for idx, (lhs, rhs) in enumerate(sys.equations):
        trimmed = _trim_affixes(lhs, rhs)
        if trimmed == "unsat":
            return "unsat"
        if trimmed is not None:
            sys.equations[idx] = trimmed
            return True
        # aligned leading variables with equal fixed lengths split off
        if (
            lhs
            and rhs
            and lhs[0][0] == "v"
            and rhs[0][0] == "v"
            and lhs[0][1] != rhs[0][1]
        ):
            la = _fixed_length(sys, lhs[0][1])
            lb = _fixed_length(sys, rhs[0][1])
            if la is not None and la == lb:
                sys.equations[idx] = (lhs[1:], rhs[1:])
                sys.equations.append(((lhs[0],), (rhs[0],)))
                return True
    return False


def _fixed_length(sys: ConjunctiveSystem, name: str):
    sys.ensure_var(name)
    ls = sys.regular[name].length_set()
    if len(ls) == 1 and ls[0][1] == 0:
        return ls[0][0]
    return None


def _trim_affixes(lhs, rhs):
    """Cancel equal prefixes/suffixes of two sides; 'unsat' on a literal
    clash, None when nothing changes."""
    l, r = list(lhs), list(rhs)
    changed = False
    while l and r:
        a, b = l[0], r[0]
        if a == b:
            l.pop(0)
            r.pop(0)
            changed = True
        elif a[0] == "lit" and b[0] == "lit":
            wa, wb = a[1], b[1]
            k = min(len(wa), len(wb))
            if wa[:k] != wb[:k]:
                return "unsat"
            l.pop(0)
            r.pop(0)
            if len(wa) > k:
                l.insert(0, ("lit", wa[k:]))
            if len(wb) > k:
                r.insert(0, ("lit", wb[k:]))
            changed = True
        else:
            break
    while l and r:
        a, b = l[-1], r[-1]
        if a == b:
            l.pop()
            r.pop()
            changed = True
        elif a[0] == "lit" and b[0] == "lit":
            wa, wb = a[1], b[1]
            k = min(len(wa), len(wb))
            if (wa[len(wa) - k:] if k else ()) != (wb[len(wb) - k:] if k else ()):
                return "unsat"
            l.pop()
            r.pop()
            if len(wa) > k:
                l.append(("lit", wa[: len(wa) - k]))
            if len(wb) > k:
                r.append(("lit", wb[: len(wb) - k]))
            changed = True
        else:
            break
    if not changed:
        return None
    return (tuple(l), tuple(r))


def side_length_set(sys: ConjunctiveSystem, side) -> Semilinear:
    total = Semilinear.singleton(0)
    for it in side:
        if it[0] == "lit":
            total = total.add(Semilinear.singleton(len(it[1])))
        else:
            sys.ensure_var(it[1])
            total = total.add(Semilinear.of(sys.regular[it[1]].length_set()))
    return total


def _rule_disequations(sys: ConjunctiveSystem, log):
    for idx, (lhs, rhs) in enumerate(sys.disequations):
        if lhs == rhs:
            return "unsat"
        if side_is_ground(lhs) and side_is_ground(rhs):
            if side_word(lhs) == side_word(rhs):
                return "unsat"
            del sys.disequations[idx]
            return True
        if not side_length_set(sys, lhs).intersects(side_length_set(sys, rhs)):
            # sides can never have equal lengths: trivially true
            del sys.disequations[idx]
            return True
        for a, b in ((lhs, rhs), (rhs, lhs)):
            # var != ground word is a regular constraint, no case split
            if len(a) == 1 and a[0][0] == "v" and side_is_ground(b):
                name = a[0][1]
                sys.ensure_var(name)
                m = sys.regular[name].num_symbols
                word = sys.table.word_to_symbols(side_word(b))
                avoid = Nfa.from_word(word, m).complement()
                sys.constrain(name, avoid)
                del sys.disequations[idx]
                return True
    return False


def _side_census(side):
    """(variable multiset, literal symbol counter) of a side."""
    names: list = []
    counts: dict = {}
    for it in side:
        if it[0] == "v":
            names.append(it[1])
        else:
            for c in it[1]:
                counts[c] = counts.get(c, 0) + 1
    names.sort()
    return names, counts


def _rule_unsat_patterns(sys: ConjunctiveSystem, log):
    for name, nfa in sys.regular.items():
        if nfa.is_empty():
            return "unsat"
    for lhs, rhs in sys.equations:
        if side_is_ground(lhs) and side_is_ground(rhs):
            if side_word(lhs) != side_word(rhs):
                return "unsat"
        elif not side_length_set(sys, lhs).intersects(side_length_set(sys, rhs)):
            return "unsat"
        else:
            # identical variable multisets force identical literal
            # letter counts (counting each symbol's occurrences)
            lv, lc = _side_census(lhs)
            rv, rc = _side_census(rhs)
            if lv == rv and lc != rc:
                return "unsat"
    # drop discharged ground equations
    before = len(sys.equations)
    sys.equations = [
        (l, r)
        for l, r in sys.equations
        if not (side_is_ground(l) and side_is_ground(r))
    ]
    return len(sys.equations) != before


_RULES = {
    1: _rule_epsilon,
    2: _rule_varprop,
    3: _rule_to_regular,
    4: _rule_split,
    5: _rule_disequations,
    6: _rule_unsat_patterns,
}
