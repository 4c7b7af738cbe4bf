"""Quantifier-free linear integer arithmetic backend.

Formulas are Boolean combinations of ``LinLe``/``LinEq`` atoms over
integer and length variables; all free variables are existential, so
generated lemmas need no explicit quantifier machinery (fresh variables
stand for the inner existentials).

The decision procedure enumerates propositionally consistent cubes with
the shared SAT skeleton, propagates unit-coefficient equalities, and
decides the rest by branch-and-bound over an exact rational simplex
relaxation boxed by an a-priori small-model bound.
"""

from __future__ import annotations

import time
from fractions import Fraction
from math import gcd

from strsat.errors import ResourceExceeded
from strsat.ir import (
    And,
    Atom,
    Bottom,
    Formula,
    Lin,
    LinEq,
    LinLe,
    Not,
    Top,
    fand,
    nnf,
)
from strsat.sat import SkeletonSolver, tseitin_encode

_BOX_CAP = 10**24
_BB_NODE_CAP = 50_000


def lia_check(f: Formula, assumptions=(), deadline=None):
    """Returns ('sat', model) with a full integer model, or ('unsat', None).

    Length variables (keys ``('len', x)``) are implicitly nonnegative.
    Raises ResourceExceeded past the optional deadline.
    """
    f = nnf(fand([f, *assumptions]))
    cube = _as_cube(f)
    if cube is not None:
        return _check_cube(cube, deadline)
    clauses, var_of_atom, n = tseitin_encode(f)
    solver = SkeletonSolver(n, clauses)
    while True:
        if deadline is not None and time.monotonic() > deadline:
            raise ResourceExceeded("lia deadline")
        m = solver.solve()
        if m is None:
            return ("unsat", None)
        cube = [(a, m[v]) for a, v in var_of_atom.items()]
        res = _check_cube(cube, deadline)
        if res[0] == "sat":
            return res
        solver.add_clause([-v if m[v] else v for _a, v in var_of_atom.items()])


def lia_equiv_on_box(f: Formula, g: Formula, box: dict) -> bool:
    """True iff f and g agree on every integer point of the box.

    ``box`` maps variable keys to inclusive (lo, hi) ranges; variables of
    f/g outside the box are treated as existential.
    """
    keys = sorted(box)

    def points(idx, acc):
        if idx == len(keys):
            yield dict(acc)
            return
        k = keys[idx]
        lo, hi = box[k]
        for v in range(lo, hi + 1):
            acc[k] = v
            yield from points(idx + 1, acc)

    for point in points(0, {}):
        fv = _eval_at(f, point)
        gv = _eval_at(g, point)
        if fv != gv:
            return False
    return True


def _eval_at(f: Formula, point: dict) -> bool:
    sub = _substitute(f, point)
    sub = nnf(sub)
    if isinstance(sub, Top):
        return True
    if isinstance(sub, Bottom):
        return False
    return lia_check(sub)[0] == "sat"


def _substitute(f: Formula, point: dict) -> Formula:
    if isinstance(f, (Top, Bottom)):
        return f
    if isinstance(f, Not):
        return Not(_substitute(f.arg, point))
    if isinstance(f, And):
        return And(tuple(_substitute(a, point) for a in f.args))
    from strsat.ir import Or

    if isinstance(f, Or):
        return Or(tuple(_substitute(a, point) for a in f.args))
    assert isinstance(f, (LinLe, LinEq))
    lin = f.lin
    const = lin.const
    terms = []
    for key, c in lin.terms:
        if key in point:
            const += c * point[key]
        else:
            terms.append((key, c))
    newlin = Lin.of(const, dict(terms))
    if newlin.is_const():
        if isinstance(f, LinLe):
            return TRUE_IF(newlin.const <= 0)
        return TRUE_IF(newlin.const == 0)
    return LinLe(newlin) if isinstance(f, LinLe) else LinEq(newlin)


def TRUE_IF(b: bool) -> Formula:
    from strsat.ir import FALSE, TRUE

    return TRUE if b else FALSE


# ---------------------------------------------------------------------------
# cube solving


def _as_cube(f: Formula):
    """If f is a conjunction of literals, return [(atom, sign)], else None."""
    lits = []
    parts = f.args if isinstance(f, And) else (f,)
    for p in parts:
        if isinstance(p, Atom):
            lits.append((p, True))
        elif isinstance(p, Not) and isinstance(p.arg, Atom):
            lits.append((p.arg, False))
        elif isinstance(p, Top):
            continue
        elif isinstance(p, Bottom):
            return [(None, False)]  # sentinel: unsatisfiable cube
        else:
            return None
    return lits


def _check_cube(cube, deadline=None):
    leqs: list[Lin] = []  # lin <= 0
    eqs: list[Lin] = []  # lin == 0
    neqs: list[Lin] = []  # lin != 0
    lenkeys: set = set()
    for atom, sign in cube:
        if atom is None:
            return ("unsat", None)
        lenkeys.update(k for k in atom.lin.keys() if k[0] == "len")
        if isinstance(atom, LinLe):
            if sign:
                leqs.append(atom.lin)
            else:
                leqs.append(atom.lin.scale(-1).add(Lin.const_of(1)))
        else:
            assert isinstance(atom, LinEq)
            if sign:
                eqs.append(atom.lin)
            else:
                neqs.append(atom.lin)
    for k in sorted(lenkeys):
        leqs.append(Lin.of(0, {k: -1}))  # -len <= 0
    return _solve(leqs, eqs, neqs, deadline)


def _solve(leqs, eqs, neqs, deadline=None):
    # split disequalities lazily: solve without them and only branch on
    # one the model actually violates, so independent neqs cost nothing
    res = _solve_eqs(leqs, eqs, deadline)
    if res[0] != "sat":
        return res
    model = res[1]
    for i, lin in enumerate(neqs):
        val = lin.const + sum(c * model.get(k, 0) for k, c in lin.terms)
        if val == 0:
            rest = neqs[:i] + neqs[i + 1 :]
            # lin != 0  ->  lin <= -1  or  lin >= 1
            r = _solve(leqs + [lin.add(Lin.const_of(1))], eqs, rest, deadline)
            if r[0] == "sat":
                return r
            return _solve(
                leqs + [lin.scale(-1).add(Lin.const_of(1))], eqs, rest, deadline
            )
    return res


def _solve_eqs(leqs, eqs, deadline=None):
    # equality elimination: unit-coefficient propagation plus Euclidean
    # coefficient reduction, so every equality either eliminates a
    # variable or exposes a divisibility contradiction
    substitutions: list[tuple, Lin] = []
    eqs = list(eqs)
    leqs = list(leqs)
    fresh_n = 0
    while True:
        pick = None
        for i, eq in enumerate(eqs):
            for key, c in eq.terms:
                if c in (1, -1):
                    pick = (i, key, c)
                    break
            if pick:
                break
        if pick:
            i, key, c = pick
            eq = eqs.pop(i)
            # key = -(eq - c*key)/c
            rest = Lin.of(eq.const, {k: v for k, v in eq.terms if k != key})
            repl = rest.scale(-1) if c == 1 else rest
            substitutions.append((key, repl))
            eqs = [_subst_lin(l, key, repl) for l in eqs]
            leqs = [_subst_lin(l, key, repl) for l in leqs]
            continue
        progressed = False
        for i, eq in enumerate(eqs):
            if not eq.terms:
                continue
            g = 0
            for _k, c in eq.terms:
                g = gcd(g, abs(c))
            if eq.const % g != 0:
                return ("unsat", None)
            if g > 1:
                eqs[i] = Lin.of(
                    eq.const // g, {k: c // g for k, c in eq.terms}
                )
                progressed = True
                break
            # gcd 1, no unit coefficient: a Euclid step on the two
            # smallest coefficients shrinks one of them
            terms = sorted(eq.terms, key=lambda kv: (abs(kv[1]), kv[0]))
            key_k, a_k = terms[0]
            key_j = None
            for kj, aj in terms[1:]:
                if aj % a_k != 0:
                    key_j, a_j = kj, aj
                    break
            assert key_j is not None
            q = a_j // a_k
            fresh_n += 1
            u = ("iv", f"%le{fresh_n}")
            # x_k = u - q*x_j is unimodular, so integer solutions map
            # one-to-one; coefficient of x_j drops to a_j mod a_k
            repl = Lin.of(0, {u: 1, key_j: -q})
            substitutions.append((key_k, repl))
            eqs = [_subst_lin(l, key_k, repl) for l in eqs]
            leqs = [_subst_lin(l, key_k, repl) for l in leqs]
            progressed = True
            break
        if not progressed:
            break

    for eq in eqs:
        leqs.append(eq)
        leqs.append(eq.scale(-1))

    ground_ok = True
    active = []
    for l in leqs:
        if l.is_const():
            if l.const > 0:
                ground_ok = False
                break
        else:
            active.append(l)
    if not ground_ok:
        return ("unsat", None)

    model = _ilp_feasible(active, deadline)
    if model is None:
        return ("unsat", None)
    # back-substitute eliminated keys (reverse order); variables dropped
    # from every remaining row are unconstrained, zero works
    for key, repl in reversed(substitutions):
        for k, _c in repl.terms:
            model.setdefault(k, 0)
        model[key] = repl.evaluate(model)
    return ("sat", model)


def _subst_lin(lin: Lin, key, repl: Lin) -> Lin:
    coeff = dict(lin.terms).get(key)
    if not coeff:
        return lin
    rest = Lin.of(lin.const, {k: v for k, v in lin.terms if k != key})
    return rest.add(repl.scale(coeff))


# ---------------------------------------------------------------------------
# integer feasibility of a conjunction of inequalities


def _ilp_feasible(leqs, deadline=None):
    """Some integer point satisfying all ``lin <= 0``, or None."""
    keys = sorted({k for l in leqs for k in l.keys()})
    if not keys:
        return {}
    box = _small_model_bound(leqs, keys)
    if box > _BOX_CAP:
        raise ResourceExceeded("small-model box exceeds magnitude cap")
    rows = []
    rhs = []
    for l in leqs:
        coeffs = dict(l.terms)
        row = [coeffs.get(k, 0) for k in keys]
        b = -l.const
        g = 0
        for c in row:
            g = gcd(g, abs(c))
        if g > 1:
            # Chvatal rounding: sum (a_i/g) x_i <= floor(b/g)
            row = [c // g for c in row]
            b = b // g
        rows.append(row)
        rhs.append(b)
    # box constraints guarantee branch-and-bound termination
    for j, k in enumerate(keys):
        unit = [0] * len(keys)
        unit[j] = 1
        rows.append(unit[:])
        rhs.append(box)
        unit = [0] * len(keys)
        unit[j] = -1
        rows.append(unit)
        rhs.append(box)

    budget = [_BB_NODE_CAP]
    point = _branch_and_bound(rows, rhs, budget, deadline)
    if point is None:
        return None
    return {k: point[j] for j, k in enumerate(keys)}


def _small_model_bound(leqs, keys) -> int:
    amax = 1
    cmax = 1
    for l in leqs:
        for _k, c in l.terms:
            amax = max(amax, abs(c))
        cmax = max(cmax, abs(l.const))
    n = len(keys)
    m = len(leqs)
    # classical bound: feasible systems have solutions with polynomially
    # bounded (in the coefficient magnitudes) component size
    return (n + m + 1) * ((n + 1) * amax * (cmax + 1)) ** (min(n, m) + 1)


def _branch_and_bound(rows, rhs, budget, deadline=None):
    if budget[0] <= 0:
        raise ResourceExceeded("branch-and-bound node budget exhausted")
    if deadline is not None and time.monotonic() > deadline:
        raise ResourceExceeded("lia deadline")
    budget[0] -= 1
    point = _lp_feasible(rows, rhs)
    if point is None:
        return None
    frac_j = -1
    frac_dist = Fraction(0)
    for j, v in enumerate(point):
        d = abs(v - round(v))
        if d > frac_dist:
            frac_dist = d
            frac_j = j
    if frac_j < 0:
        return [int(v) for v in point]
    v = point[frac_j]
    floor_v = v.numerator // v.denominator
    n = len(point)
    lo_row = [0] * n
    lo_row[frac_j] = 1
    res = _branch_and_bound(rows + [lo_row], rhs + [floor_v], budget, deadline)
    if res is not None:
        return res
    hi_row = [0] * n
    hi_row[frac_j] = -1
    return _branch_and_bound(
        rows + [hi_row], rhs + [-(floor_v + 1)], budget, deadline
    )


def _lp_feasible(rows, rhs):
    """A rational point x with rows*x <= rhs, or None (exact simplex).

    Free variables are split into nonnegative pairs; feasibility is decided
    by phase-1 simplex with a single artificial column and Bland's rule.
    """
    m = len(rows)
    n = len(rows[0]) if m else 0
    if m == 0:
        return []
    # y = [x+, x-, slacks]; columns 0..2n-1 variables, 2n..2n+m-1 slacks
    ncols = 2 * n + m + 1  # last column: artificial x0
    art = ncols - 1
    tab = []
    for i in range(m):
        row = [Fraction(0)] * (ncols + 1)
        for j in range(n):
            row[j] = Fraction(rows[i][j])
            row[n + j] = Fraction(-rows[i][j])
        row[2 * n + i] = Fraction(1)
        row[art] = Fraction(-1)
        row[ncols] = Fraction(rhs[i])
        tab.append(row)
    basis = [2 * n + i for i in range(m)]
    # phase 1: minimize the artificial variable
    if not all(tab[i][ncols] >= 0 for i in range(m)):
        # pivot artificial in on the most negative row
        piv = min(range(m), key=lambda i: (tab[i][ncols], i))
        _pivot(tab, basis, piv, art)
        cost = [Fraction(0)] * ncols
        cost[art] = Fraction(1)
        _minimize(tab, basis, cost, m, ncols, banned=())
        # value of artificial
        if art in basis:
            i = basis.index(art)
            if tab[i][ncols] != 0:
                return None
            # try to pivot artificial out on any nonzero column
            for j in range(ncols - 1):
                if tab[i][j] != 0:
                    _pivot(tab, basis, i, j)
                    break
        if art in basis:
            return None
    # phase 2: minimize sum |x| = sum of the split columns, pulling the
    # vertex toward the origin; keeps branch-and-bound off distant corners
    cost = [Fraction(1)] * ncols
    for j in range(2 * n, ncols):
        cost[j] = Fraction(0)
    _minimize(tab, basis, cost, m, ncols, banned=(art,))
    x = [Fraction(0)] * n
    vals = {b: tab[i][ncols] for i, b in enumerate(basis)}
    for j in range(n):
        x[j] = vals.get(j, Fraction(0)) - vals.get(n + j, Fraction(0))
    return x


def _minimize(tab, basis, cost, m, ncols, banned):
    """Bland's-rule simplex loop on an already feasible tableau."""
    while True:
        red = cost[:]
        for i, b in enumerate(basis):
            if cost[b]:
                cb = cost[b]
                for j in range(ncols):
                    red[j] -= cb * tab[i][j]
        enter = -1
        for j in range(ncols):
            if j not in banned and red[j] < 0:
                enter = j
                break
        if enter < 0:
            return
        leave = -1
        best = None
        for i in range(m):
            if tab[i][enter] > 0:
                ratio = tab[i][ncols] / tab[i][enter]
                if best is None or ratio < best or (
                    ratio == best and basis[i] < basis[leave]
                ):
                    best = ratio
                    leave = i
        if leave < 0:
            return  # unbounded; cannot happen for our bounded-below costs
        _pivot(tab, basis, leave, enter)


def _pivot(tab, basis, row, col):
    ncols = len(tab[0]) - 1
    pv = tab[row][col]
    tab[row] = [v / pv for v in tab[row]]
    for i in range(len(tab)):
        if i != row and tab[i][col]:
            f = tab[i][col]
            tab[i] = [tab[i][j] - f * tab[row][j] for j in range(ncols + 1)]
    basis[row] = col
