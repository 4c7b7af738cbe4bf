"""Stabilization decision procedure.

Word equations become pairs of language inclusions over a per-variable
NFA assignment.  Unstable inclusions are refined by noodlification:
slicing the product of the left side's concatenation with the right
side's automaton at every viable border, one noodle per border-state
selection.  Stable systems yield a semilinear length formula; the
driver tests it against the integer part and extracts a model.

Disequations are expanded beforehand into conjunctive alternatives:
either the sides differ in length, or they differ at some position,
witnessed by a single-symbol mismatch pair.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field

from strsat.errors import ResourceExceeded
from strsat.ir import Formula, Lin, LinEq, LinLe, fand, for_, side_len, var
from strsat.nfa.automaton import Nfa
from strsat.system import ConjunctiveSystem

STEP_BUDGET = 10_000
_DISEQ_ALTERNATIVE_CAP = 4096
_MAX_MODEL_CELLS = 200_000
_STATE_CAP = 600
_NOODLE_CAP = 2000


@dataclass
class InclusionSystem:
    table: object
    inclusions: list  # (lhs: tuple of var names, rhs: tuple of var names)
    assignment: dict  # var -> Nfa
    literal_vars: set = field(default_factory=set)

    def copy(self) -> "InclusionSystem":
        return InclusionSystem(
            self.table, list(self.inclusions), dict(self.assignment),
            self.literal_vars,
        )


# ---------------------------------------------------------------------------
# disequation expansion


def expand_disequations(csys: ConjunctiveSystem):
    """All conjunctive alternatives of the system's disequations.

    Returns a list of (equations, regular, lia) extension triples; their
    product with the equations of csys covers exactly the original
    semantics.  Raises ResourceExceeded past the alternative cap.
    """
    alts = [([], {}, [])]
    fresh = [0]

    def fv(prefix):
        fresh[0] += 1
        return f"%d{prefix}{fresh[0]}"

    num_symbols = csys.table.num_symbols
    for lhs, rhs in csys.disequations:
        branches = []
        llen, rlen = side_len(lhs), side_len(rhs)
        branches.append(([], {}, [LinLe(llen.sub(rlen).add(Lin.const_of(1)))]))
        branches.append(([], {}, [LinLe(rlen.sub(llen).add(Lin.const_of(1)))]))
        for sym in range(num_symbols):
            p1, s1 = fv("p"), fv("s")
            p2, s2 = fv("p"), fv("s")
            c1, c2 = fv("c"), fv("c")
            eqs = [
                (lhs, (var(p1), var(c1), var(s1))),
                (rhs, (var(p2), var(c2), var(s2))),
            ]
            reg = {
                c1: Nfa.one_of([sym], num_symbols),
                c2: Nfa.one_of(
                    [s for s in range(num_symbols) if s != sym], num_symbols
                ),
            }
            lia = [LinEq.of(Lin.lenvar(p1).sub(Lin.lenvar(p2)))]
            branches.append((eqs, reg, lia))
        new_alts = []
        for eqs0, reg0, lia0 in alts:
            for eqs1, reg1, lia1 in branches:
                new_alts.append((eqs0 + eqs1, {**reg0, **reg1}, lia0 + lia1))
                if len(new_alts) > _DISEQ_ALTERNATIVE_CAP:
                    raise ResourceExceeded("disequation alternative cap")
        alts = new_alts
    return alts


# ---------------------------------------------------------------------------
# system construction


def build_system(csys: ConjunctiveSystem) -> InclusionSystem:
    """Inclusion pairs from the equations, literals freshened into
    singleton-language variables, one direction dropped where the other
    side's variables are globally unique."""
    assignment = dict(csys.regular)
    table = csys.table
    literal_vars = set()
    lit_n = [0]

    def lit_var(word) -> str:
        name = f"%lit{lit_n[0]}"
        lit_n[0] += 1
        syms = table.word_to_symbols(word)
        assignment[name] = Nfa.from_word(syms, table.num_symbols)
        literal_vars.add(name)
        return name

    sides = []
    occurrences: dict = {}
    for lhs, rhs in csys.equations:
        pair = []
        for side in (lhs, rhs):
            names = tuple(
                it[1] if it[0] == "v" else lit_var(it[1]) for it in side
            )
            for nm in names:
                occurrences[nm] = occurrences.get(nm, 0) + 1
            pair.append(names)
        sides.append(pair)
    for name in csys.variables():
        if name not in assignment:
            assignment[name] = Nfa.universal(table.num_symbols)

    inclusions = []
    for s, t in sides:
        drop_ts = all(occurrences[nm] == 1 for nm in t) and t
        inclusions.append((s, t))
        if not drop_ts:
            inclusions.append((t, s))
    return InclusionSystem(table, inclusions, assignment, literal_vars)


def _concat_all(nfas, num_symbols) -> Nfa:
    out = Nfa.epsilon(num_symbols)
    for a in nfas:
        out = out.concat(a)
    return out


def is_stable(s: InclusionSystem) -> bool:
    return all(_inclusion_holds(s, inc) for inc in s.inclusions)


def _inclusion_holds(s: InclusionSystem, inc) -> bool:
    lhs, rhs = inc
    num = s.table.num_symbols
    a = _concat_all([s.assignment[x] for x in lhs], num)
    b = _concat_all([s.assignment[x] for x in rhs], num)
    return a.is_included(b)


# ---------------------------------------------------------------------------
# noodlification


def noodlify(lhs_names, lhs_nfas, rhs_nfa):
    """All refinements of the left-side languages against the right side.

    A noodle picks one rhs state per border cut; segment i is then the
    product of lhs_nfas[i] with the rhs fragment between consecutive
    picks.  Repeated left-side variables get their occurrence languages
    intersected.  Returns a list of dicts var -> refined Nfa.
    """
    n = len(lhs_names)
    if n == 0:
        return []
    num = rhs_nfa.num_symbols

    def fragment(nfa_i, q_from, q_to) -> Nfa:
        frag = Nfa(
            rhs_nfa.n,
            num,
            rhs_nfa.trans,
            frozenset(q_from),
            frozenset(q_to),
        )
        return nfa_i.intersect(frag)

    noodles = []

    def rec(i, q, segments):
        if len(noodles) > _NOODLE_CAP:
            raise ResourceExceeded("noodlification fan-out cap")
        if i == n - 1:
            seg = fragment(lhs_nfas[i], [q], rhs_nfa.final)
            if not seg.is_empty():
                noodles.append(segments + [seg])
            return
        for q2 in range(rhs_nfa.n):
            seg = fragment(lhs_nfas[i], [q], [q2])
            if not seg.is_empty():
                rec(i + 1, q2, segments + [seg])

    for q0 in rhs_nfa.initial:
        rec(0, q0, [])

    out = []
    seen = set()
    for segs in noodles:
        refined: dict = {}
        dead = False
        for name, seg in zip(lhs_names, segs):
            if name in refined:
                refined[name] = refined[name].intersect(seg).trim()
            else:
                refined[name] = seg.trim()
            if refined[name].is_empty():
                dead = True
                break
        if dead:
            continue
        refined = {k: v.reduce_simulation() for k, v in refined.items()}
        sig = tuple(sorted((k, _nfa_sig(v)) for k, v in refined.items()))
        if sig in seen:
            continue
        seen.add(sig)
        out.append(refined)
    out.sort(key=lambda r: (sum(a.n for a in r.values()), _dict_sig(r)))
    return out


def _nfa_sig(a: Nfa):
    return (a.n, a.trans, tuple(sorted(a.initial)), tuple(sorted(a.final)))


def _dict_sig(r: dict):
    return tuple(sorted((k, _nfa_sig(v)) for k, v in r.items()))


# ---------------------------------------------------------------------------
# the stabilization loop


def stable_systems(s: InclusionSystem, budget=STEP_BUDGET, deadline=None):
    """Yields stable refinements of ``s`` lazily, depth first.

    Raises ResourceExceeded when the step budget runs out.
    """
    steps = [budget]
    seen: set = set()
    stack = [s]
    while stack:
        if deadline is not None and time.monotonic() > deadline:
            raise ResourceExceeded("timeout")
        cur = stack.pop()
        if sum(a.n for a in cur.assignment.values()) > _STATE_CAP:
            raise ResourceExceeded("stabilization state cap")
        sig = _dict_sig(cur.assignment)
        if sig in seen:
            continue
        seen.add(sig)
        unstable = None
        for inc in cur.inclusions:
            if not _inclusion_holds(cur, inc):
                unstable = inc
                break
        if unstable is None:
            yield cur
            continue
        if steps[0] <= 0:
            raise ResourceExceeded("stabilization step budget")
        steps[0] -= 1
        lhs, rhs = unstable
        num = cur.table.num_symbols
        rhs_nfa = _concat_all([cur.assignment[x] for x in rhs], num).trim()
        if not lhs:
            continue  # epsilon not accepted by rhs: dead branch
        if rhs_nfa.is_empty():
            continue
        noodles = noodlify(lhs, [cur.assignment[x] for x in lhs], rhs_nfa)
        # DFS explores the first (smallest) noodle first
        for refined in reversed(noodles):
            nxt = cur.copy()
            for name, nfa in refined.items():
                nxt.assignment[name] = nfa
            stack.append(nxt)


def generate_lengths(s: InclusionSystem) -> Formula:
    """Length abstraction of a stable system, over every variable."""
    parts = []
    kn = [0]

    def fresh_k() -> Lin:
        kn[0] += 1
        return Lin.intvar(f"%k{kn[0]}")

    for name in sorted(s.assignment):
        lv = Lin.lenvar(name)
        parts.append(LinLe(lv.scale(-1)))
        progressions = s.assignment[name].length_set()
        opts = []
        for a, p in progressions:
            if p == 0:
                opts.append(LinEq.of(lv.sub(Lin.const_of(a))))
            else:
                k = fresh_k()
                opts.append(
                    fand(
                        [
                            LinLe(k.scale(-1)),
                            LinEq.of(lv.sub(Lin.const_of(a)).sub(k.scale(p))),
                        ]
                    )
                )
        parts.append(for_(opts))
    for lhs, rhs in s.inclusions:
        sl = Lin.const_of(0)
        for nm in lhs:
            sl = sl.add(Lin.lenvar(nm))
        for nm in rhs:
            sl = sl.sub(Lin.lenvar(nm))
        parts.append(LinEq.of(sl))
    return fand(parts)


# ---------------------------------------------------------------------------
# model extraction


def extract_model(s: InclusionSystem, equations, lia_model):
    """A word per variable consistent with the stable assignment, the
    equations and the fixed lengths, or None if these lengths admit no
    model.

    ``equations`` are the original (side, side) equations, literals
    inline.  ``lia_model`` maps ('len', x) keys to lengths.  Cells of
    all variables are union-found through the equations at fixed
    lengths, then words are chosen variable by variable with pattern
    propagation and backtracking.
    """
    names = sorted(n for n in s.assignment if n not in s.literal_vars)
    lengths = {}
    total = 0
    for n in names:
        l = lia_model.get(("len", n), 0)
        if l < 0:
            return None
        lengths[n] = l
        total += l
    if total > _MAX_MODEL_CELLS:
        return None

    parent: dict = {}

    def find(c):
        while parent.get(c, c) != c:
            parent[c] = parent.get(parent[c], parent[c])
            c = parent[c]
        return c

    def union(c1, c2):
        r1, r2 = find(c1), find(c2)
        if r1 != r2:
            parent[r1] = r2

    forced: dict = {}  # class root -> symbol

    def cells_of(side):
        out = []
        for it in side:
            if it[0] == "lit":
                out.extend(("#", sym) for sym in s.table.word_to_symbols(it[1]))
            else:
                nm = it[1]
                out.extend((nm, i) for i in range(lengths.get(nm, 0)))
        return out

    for lhs, rhs in equations:
        cl, cr = cells_of(lhs), cells_of(rhs)
        if len(cl) != len(cr):
            return None
        for c1, c2 in zip(cl, cr):
            if c1[0] == "#" and c2[0] == "#":
                if c1[1] != c2[1]:
                    return None
            elif c1[0] == "#":
                union(c2, c2)
                root = find(c2)
                if forced.get(root, c1[1]) != c1[1]:
                    return None
                forced[root] = c1[1]
            elif c2[0] == "#":
                root = find(c1)
                if forced.get(root, c2[1]) != c2[1]:
                    return None
                forced[root] = c2[1]
            else:
                r1, r2 = find(c1), find(c2)
                if r1 != r2:
                    v1, v2 = forced.get(r1), forced.get(r2)
                    if v1 is not None and v2 is not None and v1 != v2:
                        return None
                    parent[r1] = r2
                    if v1 is not None:
                        forced[r2] = v1

    chosen: dict = {}  # class root -> symbol (search state)

    def pinned(nm, i):
        root = find((nm, i))
        if root in forced:
            return forced[root]
        return chosen.get(root)

    def assign(k) -> bool:
        if k == len(names):
            return True
        nm = names[k]
        nfa = s.assignment[nm]
        length = lengths[nm]
        for word in _enum_words(nfa, length, lambda i: pinned(nm, i)):
            touched = []
            ok = True
            for i, sym in enumerate(word):
                root = find((nm, i))
                cur = forced.get(root, chosen.get(root))
                if cur is None:
                    chosen[root] = sym
                    touched.append(root)
                elif cur != sym:
                    ok = False
                    break
            if ok and assign(k + 1):
                return True
            for root in touched:
                del chosen[root]
        return False

    if not assign(0):
        return None
    model = {}
    for nm in names:
        syms = tuple(pinned(nm, i) for i in range(lengths[nm]))
        model[nm] = tuple(s.table.concretize(sym) for sym in syms)
    return model


def _enum_words(nfa: Nfa, length: int, pin):
    """Generate words of the given length accepted by ``nfa`` whose
    position i matches pin(i) when pin(i) is not None."""
    ok = [set() for _ in range(length + 1)]
    ok[length] = set(nfa.final)
    pred = nfa.pred
    for i in range(length - 1, -1, -1):
        acc = set()
        for q in ok[i + 1]:
            for _sym, srcs in pred.get(q, {}).items():
                acc.update(srcs)
        ok[i] = acc
    start = set(nfa.initial) & ok[0]
    if not start:
        return
    succ = nfa.succ

    def step(states, sym, layer):
        out = set()
        for p in states:
            out.update(succ.get(p, {}).get(sym, ()))
        return out & ok[layer]

    word: list = []

    def rec(states, i):
        if i == length:
            if states & nfa.final:
                yield tuple(word)
            return
        want = pin(i)
        symbols = [want] if want is not None else range(nfa.num_symbols)
        for sym in symbols:
            nxt = step(states, sym, i + 1)
            if nxt:
                word.append(sym)
                yield from rec(nxt, i + 1)
                word.pop()

    yield from rec(start, 0)
