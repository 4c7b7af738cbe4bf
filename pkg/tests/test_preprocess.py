from strsat.ir import Lin, LinEq, lit, var
from strsat.nfa.alphabet import SymbolTable
from strsat.nfa.automaton import Nfa
from strsat.preprocess import preprocess, side_length_set
from strsat.system import ConjunctiveSystem


A, B = ord("a"), ord("b")


def table():
    return SymbolTable((A, B), 1)


def csys(**kw):
    s = ConjunctiveSystem(table())
    for k, v in kw.items():
        setattr(s, k, v)
    for lhs, rhs in s.equations + s.disequations:
        for it in lhs + rhs:
            if it[0] == "v":
                s.ensure_var(it[1])
    return s


def test_epsilon_propagation_unsat():
    # x = eps propagated into x = a.x leaves eps = a
    s = csys(
        equations=[
            ((var("x"),), ()),
            ((var("x"),), (lit((A,)), var("x"))),
        ]
    )
    assert preprocess(s, "stabilization")[0] == "unsat"


def test_epsilon_propagation_records_substitution():
    s = csys(equations=[((var("x"),), ()), ((var("y"),), (var("x"), lit((A,))))])
    status, out, log = preprocess(s, "stabilization")
    assert status == "ok"
    assert ("x", ()) in log


def test_epsilon_against_literal_is_unsat():
    s = csys(equations=[((), (lit((A,)),))])
    assert preprocess(s, "stabilization")[0] == "unsat"


def test_variable_propagation_intersects_regular():
    s = csys(equations=[((var("x"),), (var("y"),))])
    a_star = Nfa(1, 3, [(0, 0, 0)], (0,), (0,))
    b_star = Nfa(1, 3, [(0, 1, 0)], (0,), (0,))
    s.constrain("x", a_star)
    s.constrain("y", b_star)
    status, out, log = preprocess(s, "stabilization")
    assert status == "ok"
    assert not out.equations
    (survivor,) = out.regular
    # a* /\ b* is just the empty word
    assert out.regular[survivor].is_equivalent(Nfa.epsilon(3))


def test_ground_equation_to_regular():
    s = csys(equations=[((var("x"),), (lit((A, B)),))])
    status, out, _ = preprocess(s, "stabilization")
    assert status == "ok"
    assert not out.equations
    assert out.regular["x"].is_equivalent(Nfa.from_word((0, 1), 3))


def test_affix_trimming_conflict():
    s = csys(equations=[((lit((A,)), var("x")), (lit((B,)), var("x")))])
    assert preprocess(s, "stabilization")[0] == "unsat"


def test_affix_trimming_cancels():
    s = csys(
        equations=[((lit((A,)), var("x")), (lit((A,)), var("y"), lit((B,))))]
    )
    status, out, _ = preprocess(s, "stabilization")
    assert status == "ok"
    # leading a cancelled on both sides
    for lhs, rhs in out.equations:
        assert lhs[:1] != (("lit", (A,)),) or rhs[:1] != (("lit", (A,)),)


def test_ground_disequation_evaluates():
    s = csys(disequations=[((lit((A,)),), (lit((B,)),))])
    status, out, _ = preprocess(s, "stabilization")
    assert status == "ok" and not out.disequations
    s = csys(disequations=[((lit((A,)),), (lit((A,)),))])
    assert preprocess(s, "stabilization")[0] == "unsat"


def test_length_incompatible_disequation_dropped():
    s = csys(disequations=[((var("x"),), (var("y"),))])
    s.constrain("x", Nfa.from_word((0,), 3))
    s.constrain("y", Nfa.from_word((0, 0), 3))
    status, out, _ = preprocess(s, "stabilization")
    assert status == "ok" and not out.disequations


def test_empty_language_unsat():
    s = csys(equations=[((var("x"),), (var("x"),))])
    s.constrain("x", Nfa.empty(3))
    assert preprocess(s, "stabilization")[0] == "unsat"


def test_length_disjoint_equation_unsat():
    s = csys(equations=[((var("x"),), (var("y"), lit((A,))))])
    even = Nfa(2, 3, [(0, 0, 1), (1, 0, 0)], (0,), (0,))
    s.constrain("x", even)
    s.constrain("y", even)
    # |x| even, |y|+1 odd: never equal... lengths differ by parity
    assert preprocess(s, "stabilization")[0] == "unsat"


def test_side_length_set():
    s = csys()
    s.ensure_var("x")
    got = side_length_set(s, (lit((A, B)), var("x")))
    assert got.contains(2) and got.contains(5) and not got.contains(1)


def test_nielsen_pipeline_skips_splits():
    # rule 4 must not run for the nielsen target
    eqs = [((lit((A,)), var("x")), (lit((A,)), var("y"), lit((B,))))]
    s = csys(equations=list(eqs))
    status, out, _ = preprocess(s, "nielsen")
    assert status == "ok"
    assert out.equations == eqs
