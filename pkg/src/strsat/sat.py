"""Minimal SAT layer: Tseitin encoding plus a DPLL enumerator.

The Boolean skeletons this solver meets are small, so the search is a
plain DPLL with unit propagation and chronological backtracking; blocking
clauses added between calls make repeated ``solve`` calls enumerate
theory-distinct assignments.
"""

from __future__ import annotations

from strsat.ir import And, Atom, Bottom, Formula, Not, Or, Top, atoms_of


def tseitin_encode(f: Formula):
    """CNF encoding; returns (clauses, var_of_atom, n_vars).

    Variables are 1-based; atom variables come first, auxiliary variables
    after.  The returned CNF is equisatisfiable with ``f`` and satisfying
    assignments project onto satisfying assignments of ``f``.
    """
    atoms = atoms_of(f)
    var_of_atom = {a: i + 1 for i, a in enumerate(atoms)}
    n = len(atoms)
    clauses: list[list[int]] = []

    def fresh():
        nonlocal n
        n += 1
        return n

    def encode(g) -> int:
        nonlocal n
        if isinstance(g, Atom):
            return var_of_atom[g]
        if isinstance(g, Not):
            return -encode(g.arg)
        if isinstance(g, (And, Or)):
            lits = [encode(a) for a in g.args]
            v = fresh()
            if isinstance(g, And):
                for l in lits:
                    clauses.append([-v, l])
                clauses.append([v] + [-l for l in lits])
            else:
                for l in lits:
                    clauses.append([-l, v])
                clauses.append([-v] + lits)
            return v
        raise TypeError(f"cannot encode {g!r}")

    if isinstance(f, Top):
        pass
    elif isinstance(f, Bottom):
        clauses.append([])
    else:
        clauses.append([encode(f)])
    return clauses, var_of_atom, n


class SkeletonSolver:
    """DPLL with unit propagation; supports adding clauses between calls."""

    def __init__(self, n_vars: int, clauses):
        self.n_vars = n_vars
        self.clauses = [list(c) for c in clauses]

    def add_clause(self, clause):
        self.clauses.append(list(clause))

    def solve(self):
        """Returns a full assignment dict var -> bool, or None.

        Unit propagation uses two watched literals per clause; watches are
        rebuilt per call, which keeps added blocking clauses cheap."""
        assign: dict[int, bool] = {}
        trail: list[int] = []
        queue: list[int] = []
        clauses = self.clauses
        watches: dict[int, list[int]] = {}
        units = []
        for i, c in enumerate(clauses):
            if not c:
                return None
            if len(c) == 1:
                units.append(c[0])
            else:
                watches.setdefault(c[0], []).append(i)
                watches.setdefault(c[1], []).append(i)

        def lit_val(l):
            v = assign.get(l if l > 0 else -l)
            if v is None:
                return None
            return v if l > 0 else not v

        def enqueue(l) -> bool:
            v = l if l > 0 else -l
            want = l > 0
            cur = assign.get(v)
            if cur is not None:
                return cur == want
            assign[v] = want
            trail.append(v)
            queue.append(l)
            return True

        def propagate() -> bool:
            while queue:
                fl = -queue.pop()  # literal that just became false
                ws = watches.get(fl)
                if not ws:
                    continue
                i = 0
                while i < len(ws):
                    ci = ws[i]
                    c = clauses[ci]
                    if c[0] == fl:
                        c[0], c[1] = c[1], c[0]
                    other = c[0]
                    if lit_val(other) is True:
                        i += 1
                        continue
                    for j in range(2, len(c)):
                        if lit_val(c[j]) is not False:
                            c[1], c[j] = c[j], c[1]
                            watches.setdefault(c[1], []).append(ci)
                            ws[i] = ws[-1]
                            ws.pop()
                            break
                    else:
                        # no replacement watch: unit or conflict
                        if lit_val(other) is False or not enqueue(other):
                            queue.clear()
                            return False
                        i += 1
            return True

        for u in units:
            if not enqueue(u):
                return None
        if not propagate():
            return None

        def pick():
            for v in range(1, self.n_vars + 1):
                if v not in assign:
                    return v
            return None

        # decision stack: (var, tried_second_value) with trail marks
        stack: list[tuple[int, bool]] = []
        marks: list[int] = []
        while True:
            v = pick()
            if v is None:
                return dict(assign)
            stack.append((v, False))
            marks.append(len(trail))
            ok = enqueue(v) and propagate()
            while not ok:
                while True:
                    if not stack:
                        return None
                    var_, flipped = stack.pop()
                    mark = marks.pop()
                    while len(trail) > mark:
                        del assign[trail.pop()]
                    if not flipped:
                        stack.append((var_, True))
                        marks.append(len(trail))
                        ok = enqueue(-var_) and propagate()
                        break
