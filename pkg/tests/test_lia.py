import itertools
import random

from strsat.ir import Lin, LinEq, LinLe, fand, fnot, for_
from strsat.lia import lia_check, lia_equiv_on_box


def iv(name):
    return Lin.intvar(name)


def le(lin):
    return LinLe(lin)


def eq(lin):
    return LinEq.of(lin)


def random_lin(rng, names):
    lin = Lin.const_of(rng.randint(-4, 4))
    for n in names:
        if rng.random() < 0.7:
            lin = lin.add(iv(n).scale(rng.randint(-3, 3)))
    return lin


def random_lia(rng, names, depth):
    if depth == 0:
        a = random_lin(rng, names)
        pick = rng.randrange(3)
        if pick == 0:
            return le(a)
        if pick == 1:
            return eq(a)
        return fnot(eq(a))
    parts = [random_lia(rng, names, depth - 1) for _ in range(rng.randint(2, 3))]
    return fand(parts) if rng.random() < 0.5 else for_(parts)


def brute_sat(f, names, lo, hi):
    from strsat.ir import eval_formula

    for vals in itertools.product(range(lo, hi + 1), repeat=len(names)):
        imodel = dict(zip(names, vals))
        if eval_formula(f, {}, imodel):
            return dict(imodel)
    return None


def test_simple_sat_and_model():
    # x + y = 5, x >= 2, y >= 2
    f = fand(
        [
            eq(iv("x").add(iv("y")).sub(Lin.const_of(5))),
            le(Lin.const_of(2).sub(iv("x"))),
            le(Lin.const_of(2).sub(iv("y"))),
        ]
    )
    status, model = lia_check(f)
    assert status == "sat"
    x, y = model[("iv", "x")], model[("iv", "y")]
    assert x + y == 5 and x >= 2 and y >= 2


def test_infeasible():
    f = fand([le(Lin.const_of(1).sub(iv("x"))), le(iv("x"))])
    # x >= 1 and x <= 0
    assert lia_check(f)[0] == "unsat"


def test_parity_gap():
    # 2x = 2y + 1 has no integer solution
    f = eq(iv("x").scale(2).sub(iv("y").scale(2)).sub(Lin.const_of(1)))
    assert lia_check(f)[0] == "unsat"


def test_neq_splits():
    f = fand(
        [
            le(iv("x").scale(-1)),
            le(iv("x").sub(Lin.const_of(0))),
            fnot(eq(iv("x"))),
        ]
    )
    # 0 <= x <= 0 and x != 0
    assert lia_check(f)[0] == "unsat"


def test_len_vars_are_nonnegative():
    # implicit |s| >= 0 makes |s| <= -1 infeasible
    f = le(Lin.lenvar("s").add(Lin.const_of(1)))
    assert lia_check(f)[0] == "unsat"
    g = le(Lin.const_of(3).sub(Lin.lenvar("s")))
    status, model = lia_check(g)
    assert status == "sat" and model[("len", "s")] >= 3


def test_random_vs_bounded_brute_force():
    rng = random.Random(71)
    names = ["a", "b", "c"]
    agree_sat = 0
    for _ in range(250):
        f = random_lia(rng, names, rng.randint(0, 2))
        brute = brute_sat(f, names, -6, 6)
        status, model = lia_check(f)
        if brute is not None:
            # bounded witness exists, solver must agree
            assert status == "sat"
            agree_sat += 1
        if status == "unsat":
            assert brute is None
        if status == "sat":
            from strsat.ir import eval_formula

            imodel = {n: model.get(("iv", n), 0) for n in names}
            assert eval_formula(f, {}, imodel)
    assert agree_sat > 50


def test_assumptions():
    f = le(iv("x").scale(-1))  # x >= 0
    extra = le(iv("x").sub(Lin.const_of(-1)))  # x <= -1
    assert lia_check(f)[0] == "sat"
    assert lia_check(f, assumptions=(extra,))[0] == "unsat"


def test_equiv_on_box():
    f = eq(iv("x").sub(iv("y")))
    g = fand([le(iv("x").sub(iv("y"))), le(iv("y").sub(iv("x")))])
    box = {("iv", "x"): (0, 6), ("iv", "y"): (0, 6)}
    assert lia_equiv_on_box(f, g, box)
    h = le(iv("x").sub(iv("y")))
    assert not lia_equiv_on_box(f, h, box)
