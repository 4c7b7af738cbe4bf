"""Conjunctive theory systems: what one Boolean assignment means.

A ConjunctiveSystem collects word equations, disequations, per-variable
regular constraints (as NFAs over the run's SymbolTable) and the linear
integer part.  It is the input handed to the decision procedures.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from strsat.errors import Unsupported
from strsat.ir import (
    Contains,
    InRe,
    LinEq,
    LinLe,
    PrefixOf,
    RegexEq,
    Side,
    SuffixOf,
    WordEq,
    fnot,
    norm_side,
    side_vars,
    subst_side,
    var,
)
from strsat.nfa.alphabet import SymbolTable
from strsat.nfa.automaton import Nfa
from strsat.nfa.regex import compile_regex


@dataclass
class ConjunctiveSystem:
    table: SymbolTable
    equations: list = field(default_factory=list)  # (Side, Side)
    disequations: list = field(default_factory=list)
    regular: dict = field(default_factory=dict)  # var -> Nfa
    lia: list = field(default_factory=list)  # conjunction of LIA formulas
    len_vars: set = field(default_factory=set)

    def variables(self) -> set:
        out = set(self.regular)
        for lhs, rhs in self.equations + self.disequations:
            out.update(side_vars(lhs))
            out.update(side_vars(rhs))
        return out

    def ensure_var(self, name: str):
        if name not in self.regular:
            self.regular[name] = Nfa.universal(self.table.num_symbols)

    def constrain(self, name: str, nfa: Nfa):
        self.ensure_var(name)
        self.regular[name] = self.regular[name].intersect(nfa)

    def has_nontrivial_regular(self) -> bool:
        return any(
            not a.is_universal() for a in self.regular.values()
        )

    def copy(self) -> "ConjunctiveSystem":
        return ConjunctiveSystem(
            self.table,
            list(self.equations),
            list(self.disequations),
            dict(self.regular),
            list(self.lia),
            set(self.len_vars),
        )


def assignment_to_system(literals, table: SymbolTable) -> ConjunctiveSystem:
    """Build the theory problem for a list of (atom, sign) pairs.

    Raises Unsupported for negated predicates without a rewrite (negated
    contains with a variable needle).
    """
    sys = ConjunctiveSystem(table)
    fresh_n = 0

    def fresh() -> str:
        nonlocal fresh_n
        name = f"%m{fresh_n}"
        fresh_n += 1
        sys.ensure_var(name)
        return name

    def add_membership(items: Side, nfa: Nfa):
        items = norm_side(items)
        if len(items) == 1 and items[0][0] == "v":
            sys.constrain(items[0][1], nfa)
        else:
            name = fresh()
            sys.equations.append(((var(name),), items))
            sys.constrain(name, nfa)

    for atom, sign in literals:
        if isinstance(atom, WordEq):
            target = sys.equations if sign else sys.disequations
            target.append((atom.lhs, atom.rhs))
        elif isinstance(atom, InRe):
            nfa = compile_regex(atom.regex, table)
            if not sign:
                nfa = nfa.complement()
            add_membership(atom.items, nfa)
        elif isinstance(atom, (LinLe, LinEq)):
            sys.lia.append(atom if sign else fnot(atom))
            sys.len_vars.update(
                name for kind, name in atom.lin.keys() if kind == "len"
            )
        elif isinstance(atom, Contains):
            if sign:
                p, q = fresh(), fresh()
                sys.equations.append(
                    (atom.hay, norm_side((var(p), *atom.needle, var(q))))
                )
            else:
                raise Unsupported("negated str.contains with a variable pattern")
        elif isinstance(atom, PrefixOf):
            if sign:
                q = fresh()
                sys.equations.append(
                    (atom.full, norm_side((*atom.pre, var(q))))
                )
            else:
                raise Unsupported("negated str.prefixof outside the rewrite table")
        elif isinstance(atom, SuffixOf):
            if sign:
                p = fresh()
                sys.equations.append(
                    (atom.full, norm_side((var(p), *atom.suf)))
                )
            else:
                raise Unsupported("negated str.suffixof outside the rewrite table")
        elif isinstance(atom, RegexEq):
            raise Unsupported("regex equation inside a theory system")
        else:
            raise Unsupported(f"theory atom {type(atom).__name__}")

    for lhs, rhs in sys.equations + sys.disequations:
        for name in side_vars(lhs) + side_vars(rhs):
            sys.ensure_var(name)
    return sys


def substitute(sys: ConjunctiveSystem, name: str, replacement: Side):
    """Replace a variable by a concatenation in all sides, in place."""
    sys.equations = [
        (subst_side(l, name, replacement), subst_side(r, name, replacement))
        for l, r in sys.equations
    ]
    sys.disequations = [
        (subst_side(l, name, replacement), subst_side(r, name, replacement))
        for l, r in sys.disequations
    ]
