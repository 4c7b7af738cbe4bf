"""DPLL(T) driver: Boolean search, theory checks, verdicts.

The saturated formula's Boolean skeleton is enumerated by the SAT
layer; every full assignment over the theory atoms is converted into a
conjunctive system and dispatched to a decision procedure.  Theory
conflicts are shrunk by deletion-based minimization before they are
returned as blocking clauses.  Sat verdicts always carry a model that
has been verified against the original formula by direct evaluation.
"""

from __future__ import annotations

import logging
import time
from dataclasses import dataclass, field

from strsat.errors import (
    InternalInconsistency,
    ResourceExceeded,
    Unsupported,
)
from strsat.ir import (
    Bottom,
    FALSE,
    Formula,
    Lin,
    LinEq,
    LinLe,
    Not,
    RegexEq,
    TRUE,
    Top,
    And,
    Or,
    atoms_of,
    eval_formula,
    fand,
    fnot,
    for_,
    formula_code_points,
    formula_vars,
    side_len,
    side_value,
)
from strsat.lia import lia_check
from strsat.nfa.alphabet import SymbolTable
from strsat.nfa.automaton import Nfa
from strsat.nfa.regex import compile_regex
from strsat.preprocess import preprocess
from strsat.saturate import saturate
from strsat.sat import SkeletonSolver, tseitin_encode
from strsat.smtlib import Script, parse_script
from strsat.system import ConjunctiveSystem, assignment_to_system
from strsat import nielsen as nl
from strsat import stabilize as st

log = logging.getLogger("strsat")

_MODEL_RETRY = 20
_THEORY_SLICE = 1.0
_FIXLEN_SLICE = 1.0
_FIXLEN_RETRY = 4


@dataclass
class Options:
    timeout: float = 120.0
    procedure: str = "auto"
    seed: int = 0


@dataclass
class Verdict:
    status: str  # sat | unsat | unknown
    smodel: dict = field(default_factory=dict)  # var -> str
    imodel: dict = field(default_factory=dict)  # var -> int
    reason: str = ""


# ---------------------------------------------------------------------------
# public entry points


def solve_text(text: str, options: Options = None):
    return solve_script(parse_script(text), options)


def solve_script(script: Script, options: Options = None):
    options = options or Options()
    verdicts = []
    pending = []
    for cmd in script.commands:
        if cmd[0] == "assert":
            pending.append(cmd[1])
        elif cmd[0] == "check-sat":
            verdicts.append(_check(fand(pending), script, options))
    return verdicts


def _check(f: Formula, script: Script, options: Options) -> Verdict:
    deadline = time.monotonic() + options.timeout
    try:
        return _check_inner(f, script, options, deadline)
    except Unsupported as e:
        log.info("unsupported: %s", e)
        return Verdict("unknown", reason=str(e))
    except ResourceExceeded as e:
        log.info("resource limit: %s", e)
        return Verdict("unknown", reason=str(e))


def _check_inner(f, script, options, deadline) -> Verdict:
    sat_f = saturate(f)
    points = formula_code_points(sat_f)
    table = SymbolTable.build(points, _count_diseqs(sat_f))
    sat_f = _fold_regex_eqs(sat_f, table)
    # regex equations are decided here, not evaluated on words, so the
    # verification target folds them the same way
    ver_f = _fold_regex_eqs(f, table)
    log.debug("saturated formula over %d symbols", table.num_symbols)

    if isinstance(sat_f, Bottom):
        return Verdict("unsat")
    if isinstance(sat_f, Top):
        return _finish_sat(ver_f, script, {}, {})

    clauses, var_of_atom, n_vars = tseitin_encode(sat_f)
    solver = SkeletonSolver(n_vars, clauses)
    saw_unknown = None
    deferred = []
    while True:
        if time.monotonic() > deadline:
            return Verdict("unknown", reason="timeout")
        assignment = solver.solve()
        if assignment is None:
            break
        literals = [(a, assignment[v]) for a, v in var_of_atom.items()]
        # a soft per-assignment slice keeps one hard branch from starving
        # the rest of the Boolean search; sliced-out branches are retried
        # with the remaining time once everything else is exhausted
        slice_deadline = min(deadline, time.monotonic() + _THEORY_SLICE)
        res = _theory_check(literals, table, options, slice_deadline)
        if res[0] == "sat":
            return _finish_sat(ver_f, script, res[1], res[2])
        if res[0] == "unsat":
            core = _minimize_conflict(literals, table, options, slice_deadline)
            solver.add_clause(
                [-var_of_atom[a] if sign else var_of_atom[a] for a, sign in core]
            )
        else:
            saw_unknown = res[1]
            deferred.append(literals)
            solver.add_clause(
                [-v if assignment[v] else v for v in var_of_atom.values()]
            )
    if saw_unknown is None:
        return Verdict("unsat")
    for literals in deferred:
        if time.monotonic() > deadline:
            return Verdict("unknown", reason="timeout")
        res = _theory_check(literals, table, options, deadline)
        if res[0] == "sat":
            return _finish_sat(ver_f, script, res[1], res[2])
        if res[0] == "unknown":
            return Verdict("unknown", reason=res[1])
    return Verdict("unsat")


def _count_diseqs(f: Formula) -> int:
    """Word disequations in an NNF formula; they drive how many distinct
    unmentioned characters the symbol table must provide."""
    from strsat.ir import WordEq

    if isinstance(f, Not):
        return 1 if isinstance(f.arg, WordEq) else 0
    if isinstance(f, (And, Or)):
        return sum(_count_diseqs(a) for a in f.args)
    return 0


def _fold_regex_eqs(f: Formula, table: SymbolTable) -> Formula:
    if isinstance(f, (Top, Bottom)):
        return f
    if isinstance(f, Not):
        return fnot(_fold_regex_eqs(f.arg, table))
    if isinstance(f, And):
        return fand([_fold_regex_eqs(a, table) for a in f.args])
    if isinstance(f, Or):
        from strsat.ir import for_

        return for_([_fold_regex_eqs(a, table) for a in f.args])
    if isinstance(f, RegexEq):
        return TRUE if decide_regex_eq(f.lhs, f.rhs, table) else FALSE
    return f


def decide_regex_eq(lhs, rhs, table: SymbolTable) -> bool:
    return compile_regex(lhs, table).is_equivalent(compile_regex(rhs, table))


def select_procedure(csys: ConjunctiveSystem) -> str:
    if nl.is_quadratic(csys) and csys.equations:
        return "nielsen"
    return "stabilization"


# ---------------------------------------------------------------------------
# theory layer


def _theory_check(literals, table, options, deadline, budget_scale=1.0):
    try:
        csys = assignment_to_system(literals, table)
    except Unsupported as e:
        return ("unknown", str(e))
    try:
        return theory_check(csys, options, deadline, budget_scale)
    except Unsupported as e:
        return ("unknown", str(e))
    except ResourceExceeded as e:
        return ("unknown", str(e))


def theory_check(csys: ConjunctiveSystem, options: Options, deadline, budget_scale=1.0):
    """('sat', smodel, imodel) | ('unsat', None) | ('unknown', reason)."""
    proc = options.procedure
    if proc == "auto":
        proc = select_procedure(csys)
    elif proc == "nielsen" and not nl.is_quadratic(csys):
        proc = "stabilization"
    elif proc == "regex-eq":
        # regex (dis)equations are folded before the theory; the residue
        # is a plain conjunctive system
        proc = "stabilization"
    if proc == "nielsen":
        res = _nielsen_check(csys, deadline, budget_scale)
        if res is not None and res[0] != "unknown":
            return res
        # the length abstraction was inconclusive; stabilization may still
        # decide the system
        try:
            return _stabilization_check(csys, deadline, budget_scale)
        except (Unsupported, ResourceExceeded):
            if res is not None:
                return res
            raise
    return _stabilization_check(csys, deadline, budget_scale)


def _nielsen_check(csys, deadline, budget_scale):
    """A verdict, or None to fall back to stabilization."""
    pre = preprocess(csys.copy(), "nielsen")
    if pre[0] == "unsat":
        return ("unsat", None)
    _, sys2, subst_log = pre
    if not nl.is_quadratic(sys2):
        return None
    node = nl.system_to_node(sys2)
    try:
        graph = nl.build_graph(node, int(nl.NODE_CAP * budget_scale) or 64)
    except ResourceExceeded:
        return None
    if not nl.decide_sat(graph):
        return ("unsat", None)
    variables = sorted(
        sys2.variables()
        | {n for f in sys2.lia for (k, n) in _lia_len_keys(f)}
    )
    lemmas, complete = nl.length_lemmas(graph, variables)
    hedged = False
    for lemma in lemmas:
        if time.monotonic() > deadline:
            return ("unknown", "timeout")
        try:
            res = lia_check(fand([*sys2.lia, lemma.formula]), deadline=deadline)
        except ResourceExceeded:
            hedged = True
            continue
        if res[0] != "sat":
            continue
        model = res[1]
        smodel = nl.replay_model(lemma, model, variables, csys.table)
        imodel = {
            name: v for (kind, name), v in model.items() if kind == "iv"
        }
        if _system_holds(sys2, smodel, imodel):
            _apply_subst_log(subst_log, smodel)
            return ("sat", smodel, imodel)
        hedged = True
    if hedged or not complete:
        return ("unknown", "nielsen length abstraction incomplete")
    return ("unsat", None)


def _lia_len_keys(f: Formula):
    out = []
    for a in atoms_of(f):
        out.extend(k for k in a.lin.keys() if k[0] == "len")
    return out


def _system_holds(csys: ConjunctiveSystem, smodel, imodel) -> bool:
    for lhs, rhs in csys.equations:
        if side_value(lhs, smodel) != side_value(rhs, smodel):
            return False
    for lhs, rhs in csys.disequations:
        if side_value(lhs, smodel) == side_value(rhs, smodel):
            return False
    for f in csys.lia:
        if not eval_formula(f, smodel, imodel):
            return False
    return True


def _stabilization_check(csys, deadline, budget_scale):
    pre = preprocess(csys.copy(), "stabilization")
    if pre[0] == "unsat":
        return ("unsat", None)
    _, sys2, subst_log = pre
    # equation sides must agree in length; saturation normally supplies
    # these axioms, deriving them here keeps direct theory calls honest
    for lhs, rhs in sys2.equations:
        sys2.lia.append(LinEq.of(side_len(lhs).sub(side_len(rhs))))
    # an inconsistent integer part dooms every alternative; noodling
    # cannot detect that, so test it first
    try:
        if sys2.lia:
            res = lia_check(fand(sys2.lia), deadline=deadline)
            if res[0] != "sat":
                return ("unsat", None)
            # lengths the integer part fixes outright become regular
            # constraints, which sharpens noodling considerably
            _pin_lengths(sys2, res[1], deadline)
    except ResourceExceeded:
        pass
    alternatives = st.expand_disequations(sys2)
    budget = max(16, int(st.STEP_BUDGET * budget_scale))
    hedged = None
    for eqs, reg, lia in alternatives:
        if time.monotonic() > deadline:
            return ("unknown", "timeout")
        alt = sys2.copy()
        alt.disequations = []
        alt.equations = alt.equations + eqs
        for name, nfa in reg.items():
            alt.constrain(name, nfa)
        alt.lia = alt.lia + lia
        try:
            res = _solve_conjunctive(alt, deadline, budget)
        except ResourceExceeded as e:
            hedged = str(e)
            continue
        if res[0] == "sat":
            smodel, imodel = res[1], res[2]
            _apply_subst_log(subst_log, smodel)
            return ("sat", smodel, imodel)
        if res[0] == "unknown":
            hedged = res[1]
    if hedged is not None:
        return ("unknown", hedged)
    return ("unsat", None)


_PIN_MAX = 6


def _pin_lengths(sys2: ConjunctiveSystem, model, deadline) -> None:
    """Constrain every variable whose length is entailed to a single
    small value to words of exactly that length."""
    base = fand(sys2.lia)
    for name in sorted(sys2.regular):
        c = model.get(("len", name), 0)
        if c > _PIN_MAX:
            continue
        lv = Lin.lenvar(name)
        off_value = for_(
            [
                LinLe(lv.sub(Lin.const_of(c - 1))),  # |name| < c
                LinLe(Lin.const_of(c + 1).sub(lv)),  # |name| > c
            ]
        )
        if lia_check(base, assumptions=(off_value,), deadline=deadline)[0] == "sat":
            continue
        m = sys2.regular[name].num_symbols
        exact = Nfa(
            c + 1,
            m,
            [(i, a, i + 1) for i in range(c) for a in range(m)],
            (0,),
            (c,),
        )
        sys2.constrain(name, exact)


def _solve_conjunctive(csys: ConjunctiveSystem, deadline, budget):
    incl = st.build_system(csys)
    hedged = None
    try:
        for stable in st.stable_systems(incl, budget, deadline):
            lengths = st.generate_lengths(stable)
            blocked: list = []
            for _try in range(_MODEL_RETRY):
                try:
                    res = lia_check(
                        fand([*csys.lia, lengths, *blocked]), deadline=deadline
                    )
                except ResourceExceeded as e:
                    hedged = str(e)
                    break
                if res[0] != "sat":
                    break
                model = res[1]
                smodel = st.extract_model(stable, csys.equations, model)
                if smodel is not None:
                    imodel = {
                        name: v
                        for (kind, name), v in model.items()
                        if kind == "iv"
                    }
                    return ("sat", smodel, imodel)
                blocked.append(_block_lengths(stable, model))
            else:
                hedged = "model reconstruction retries exhausted"
    except ResourceExceeded as e:
        hedged = str(e)
    if hedged is not None:
        # last resort: enumerate concrete length vectors, where the cell
        # propagation of extract_model is an exhaustive check per vector
        res = _fixed_length_search(incl, csys, deadline)
        if res is not None:
            return res
        return ("unknown", hedged)
    return ("unsat", None)


def _fixed_length_search(incl, csys: ConjunctiveSystem, deadline):
    """('sat', smodel, imodel) | ('unsat', None) | None when inconclusive.

    Blocking length vectors cannot refute structural conflicts, so this
    phase keeps its own small time and retry budget and hands anything
    inconclusive to the stabilization loop.
    """
    lengths = st.generate_lengths(incl)
    deadline = min(deadline, time.monotonic() + _FIXLEN_SLICE)
    blocked: list = []
    for _try in range(_FIXLEN_RETRY):
        if time.monotonic() > deadline:
            return None
        try:
            res = lia_check(fand([*csys.lia, lengths, *blocked]), deadline=deadline)
        except ResourceExceeded:
            return None
        if res[0] != "sat":
            # every feasible length vector was individually refuted
            return ("unsat", None)
        model = res[1]
        smodel = st.extract_model(incl, csys.equations, model)
        if smodel is not None:
            imodel = {
                name: v for (kind, name), v in model.items() if kind == "iv"
            }
            return ("sat", smodel, imodel)
        blocked.append(_block_lengths(incl, model))
    return None


def _block_lengths(stable, model) -> Formula:
    parts = []
    for name in sorted(stable.assignment):
        if name in stable.literal_vars:
            continue
        key = ("len", name)
        if key in model:
            parts.append(LinEq.of(Lin.lenvar(name).sub(Lin.const_of(model[key]))))
    return fnot(fand(parts))


def _apply_subst_log(subst_log, smodel: dict):
    for name, repl in reversed(subst_log):
        smodel[name] = side_value(repl, smodel)


# ---------------------------------------------------------------------------
# conflict minimization (relevancy approximation)


def _minimize_conflict(literals, table, options, deadline):
    core = list(literals)
    i = 0
    while i < len(core):
        if time.monotonic() > deadline:
            break
        trial = core[:i] + core[i + 1:]
        res = _theory_check(trial, table, options, deadline, budget_scale=0.05)
        if res[0] == "unsat":
            core = trial
        else:
            i += 1
    return core


# ---------------------------------------------------------------------------
# final model assembly and verification


def _finish_sat(f: Formula, script: Script, smodel, imodel) -> Verdict:
    svars, ivars = formula_vars(f)
    for cmd in script.commands:
        if cmd[0] == "declare-fun":
            (svars if cmd[2] == "String" else ivars).add(cmd[1])
    full_s = {v: tuple(smodel.get(v, ())) for v in svars}
    full_i = {v: int(imodel.get(v, 0)) for v in ivars}
    if not eval_formula(f, full_s, full_i):
        raise InternalInconsistency("model fails to verify against the input")
    out_s = {v: "".join(chr(c) for c in w) for v, w in full_s.items()}
    return Verdict("sat", out_s, full_i)
