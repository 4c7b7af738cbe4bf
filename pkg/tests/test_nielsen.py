import random

import pytest

from oracle import word_eq_models
from strsat.errors import ResourceExceeded
from strsat.ir import LinEq, Lin, fand, lit, var
from strsat.lia import lia_check
from strsat.nfa.alphabet import SymbolTable
from strsat.nielsen import (
    build_graph,
    canonical,
    decide_sat,
    is_quadratic,
    length_lemmas,
    replay_model,
    system_to_node,
)
from strsat.system import ConjunctiveSystem


A, B = ord("a"), ord("b")


def node_of(equations):
    s = ConjunctiveSystem(SymbolTable((A, B), 1))
    s.equations = list(equations)
    for lhs, rhs in equations:
        for it in lhs + rhs:
            if it[0] == "v":
                s.ensure_var(it[1])
    return s, system_to_node(s)


def test_canonical_trims_and_orders():
    eq = ((("c", A), ("v", "x")), (("c", A), ("v", "y")))
    (out,) = canonical([eq])
    assert out == ((("v", "x"),), (("v", "y"),))
    # identical sides vanish
    assert canonical([((("v", "x"),), (("v", "x"),))]) == ()
    # side order is normalized
    a = canonical([((("v", "y"),), (("v", "x"),))])
    b = canonical([((("v", "x"),), (("v", "y"),))])
    assert a == b


def test_is_quadratic():
    s, _ = node_of([((var("x"), var("x")), (var("y"), lit((A,))))])
    assert is_quadratic(s)
    s, _ = node_of([((var("x"), var("x")), (var("x"), lit((A,))))])
    assert not is_quadratic(s)
    s, _ = node_of([((var("x"),), (lit((A,)),))])
    s.disequations = [((var("x"),), (lit((B,)),))]
    assert not is_quadratic(s)


def test_unsat_example():
    # x.a = b.x has no solution
    _, node = node_of([((var("x"), lit((A,))), (lit((B,)), var("x")))])
    assert not decide_sat(build_graph(node))


def test_sat_ground_example():
    _, node = node_of([((var("x"),), (lit((A, A)),))])
    g = build_graph(node)
    assert decide_sat(g)
    lemmas, complete = length_lemmas(g, ["x"])
    assert complete and lemmas
    # the lemma disjunction fixes |x| = 2 exactly
    for target in range(5):
        want = target == 2
        got = any(
            lia_check(
                fand(
                    [
                        lem.formula,
                        LinEq.of(Lin.lenvar("x").sub(Lin.const_of(target))),
                    ]
                )
            )[0]
            == "sat"
            for lem in lemmas
        )
        assert got == want


def test_replay_model():
    _, node = node_of([((var("x"),), (lit((A, A)),))])
    g = build_graph(node)
    lemmas, _ = length_lemmas(g, ["x"])
    for lem in lemmas:
        status, model = lia_check(lem.formula)
        if status != "sat":
            continue
        vals = replay_model(lem, model, ["x"], SymbolTable((A, B), 1))
        assert vals["x"] == (A, A)
        return
    pytest.fail("no satisfiable lemma")


def test_commutation_lengths():
    # x.y = y.x admits solutions of every length pair with a common root
    _, node = node_of([((var("x"), var("y")), (var("y"), var("x")))])
    g = build_graph(node)
    assert decide_sat(g)
    lemmas, _ = length_lemmas(g, ["x", "y"])
    sat_pair = lambda lx, ly: any(
        lia_check(
            fand(
                [
                    lem.formula,
                    LinEq.of(Lin.lenvar("x").sub(Lin.const_of(lx))),
                    LinEq.of(Lin.lenvar("y").sub(Lin.const_of(ly))),
                ]
            )
        )[0]
        == "sat"
        for lem in lemmas
    )
    assert sat_pair(0, 3) and sat_pair(2, 0)


def test_node_cap():
    _, node = node_of(
        [((var("x"), var("y")), (var("y"), lit((A,)), var("x")))]
    )
    with pytest.raises(ResourceExceeded):
        build_graph(node, node_cap=1)


def random_quadratic(rng):
    """A random system with <= 2 variables, <= 2 occurrences each."""
    budget = {"x": 2, "y": 2}
    eqs = []
    for _ in range(rng.randint(1, 2)):
        sides = []
        for _ in range(2):
            items = []
            for _ in range(rng.randint(0, 3)):
                if rng.random() < 0.5:
                    v = rng.choice(["x", "y"])
                    if budget[v] > 0:
                        budget[v] -= 1
                        items.append(var(v))
                else:
                    items.append(lit((rng.choice([A, B]),)))
            sides.append(tuple(items))
        eqs.append((sides[0], sides[1]))
    return eqs


def test_random_quadratic_vs_brute_force():
    rng = random.Random(3)
    checked_unsat = 0
    for _ in range(120):
        eqs = random_quadratic(rng)
        s, node = node_of(eqs)
        assert is_quadratic(s)
        g = build_graph(node)
        verdict = decide_sat(g)
        names = sorted(
            {it[1] for l, r in eqs for it in l + r if it[0] == "v"}
        )
        # remap code points onto oracle symbols 0 and 1
        sym = {A: 0, B: 1}

        def oside(side):
            return tuple(
                it if it[0] == "v" else ("lit", tuple(sym[c] for c in it[1]))
                for it in side
            )

        brute = bool(
            word_eq_models(
                [(oside(l), oside(r)) for l, r in eqs], names, 2, 4
            )
        )
        if brute:
            assert verdict
        if not verdict:
            assert not brute
            checked_unsat += 1
    assert checked_unsat > 5
