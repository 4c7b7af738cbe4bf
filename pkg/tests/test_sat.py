import itertools
import random

from strsat.ir import And, Bottom, Lin, LinEq, Not, Or, Top, fand, fnot, for_
from strsat.sat import SkeletonSolver, tseitin_encode


def atom(i):
    return LinEq.of(Lin.intvar(f"p{i}").sub(Lin.const_of(1)))


def beval(f, env):
    if isinstance(f, Top):
        return True
    if isinstance(f, Bottom):
        return False
    if isinstance(f, Not):
        return not beval(f.arg, env)
    if isinstance(f, And):
        return all(beval(a, env) for a in f.args)
    if isinstance(f, Or):
        return any(beval(a, env) for a in f.args)
    return env[f]


def random_formula(rng, atoms, depth):
    if depth == 0:
        return rng.choice(atoms)
    kind = rng.randrange(3)
    if kind == 0:
        return fnot(random_formula(rng, atoms, depth - 1))
    parts = [
        random_formula(rng, atoms, depth - 1)
        for _ in range(rng.randint(2, 3))
    ]
    return fand(parts) if kind == 1 else for_(parts)


def cnf_sat_with(clauses, n_vars, units):
    s = SkeletonSolver(n_vars, list(clauses) + [[u] for u in units])
    return s.solve() is not None


def test_tseitin_truth_table():
    rng = random.Random(67)
    for _ in range(120):
        n = rng.randint(1, 4)
        atoms = [atom(i) for i in range(n)]
        f = random_formula(rng, atoms, rng.randint(1, 3))
        clauses, var_of_atom, n_vars = tseitin_encode(f)
        used = [a for a in atoms if a in var_of_atom]
        for bits in itertools.product([False, True], repeat=len(used)):
            env = dict(zip(used, bits))
            units = [
                var_of_atom[a] if v else -var_of_atom[a]
                for a, v in env.items()
            ]
            want = beval(f, env)
            assert cnf_sat_with(clauses, n_vars, units) == want


def test_tseitin_example_disjunction():
    a, b, c = atom(0), atom(1), atom(2)
    f = for_([a, fand([b, c])])
    clauses, var_of_atom, n_vars = tseitin_encode(f)
    # projections of CNF solutions satisfy f
    s = SkeletonSolver(n_vars, clauses)
    count = 0
    while count < 32:
        m = s.solve()
        if m is None:
            break
        env = {x: m[v] for x, v in var_of_atom.items()}
        assert beval(f, env)
        s.add_clause([-v if m[v] else v for v in range(1, n_vars + 1)])
        count += 1
    assert count > 0


def test_solver_blocking_enumerates_all():
    # 2 free atom vars, tautology: exactly 4 assignments over the atoms
    a, b = atom(0), atom(1)
    f = for_([a, fnot(a), b])
    clauses, var_of_atom, n_vars = tseitin_encode(f)
    s = SkeletonSolver(n_vars, clauses)
    seen = set()
    while True:
        m = s.solve()
        if m is None:
            break
        seen.add((m[var_of_atom[a]], m[var_of_atom[b]]))
        s.add_clause(
            [-v if m[v] else v for v in var_of_atom.values()]
        )
    assert seen == {(False, False), (False, True), (True, False), (True, True)}


def test_unsat_cnf():
    s = SkeletonSolver(1, [[1], [-1]])
    assert s.solve() is None
