import subprocess
import sys

from strsat.driver import Options, solve_text


def solve1(text, **kw):
    (v,) = solve_text(text, Options(**kw)) if kw else solve_text(text)
    return v


DECL = "(declare-fun x () String)(declare-fun y () String)"


def test_simple_equation_sat_with_model():
    v = solve1(f'{DECL}(assert (= x (str.++ "ab" y)))(check-sat)')
    assert v.status == "sat"
    assert v.smodel["x"] == "ab" + v.smodel["y"]


def test_commutation_with_lengths_unsat():
    v = solve1(
        f"{DECL}"
        "(assert (= (str.++ x y) (str.++ y x)))"
        "(assert (distinct x y))"
        "(assert (= (str.len x) 1))(assert (= (str.len y) 1))"
        "(check-sat)"
    )
    assert v.status == "unsat"


def test_regex_membership_sat():
    v = solve1(
        f'{DECL}(assert (str.in_re x (re.* (str.to_re "ab"))))'
        "(assert (>= (str.len x) 3))(check-sat)"
    )
    assert v.status == "sat"
    w = v.smodel["x"]
    assert len(w) >= 3 and w == "ab" * (len(w) // 2)


def test_disjoint_regexes_unsat():
    v = solve1(
        f'{DECL}(assert (str.in_re x (re.* (str.to_re "a"))))'
        '(assert (str.in_re x (re.* (str.to_re "b"))))'
        "(assert (>= (str.len x) 1))(check-sat)"
    )
    assert v.status == "unsat"


def test_regex_equation():
    v = solve1(
        '(assert (= (re.* (re.* (str.to_re "a"))) (re.* (str.to_re "a"))))'
        "(check-sat)"
    )
    assert v.status == "sat"
    v = solve1(
        '(assert (= (re.+ (str.to_re "a")) (re.* (str.to_re "a"))))'
        "(check-sat)"
    )
    assert v.status == "unsat"


def test_predicates():
    v = solve1(
        f'{DECL}(assert (str.contains x "ba"))'
        '(assert (str.prefixof "ab" x))(check-sat)'
    )
    assert v.status == "sat"
    assert "ba" in v.smodel["x"] and v.smodel["x"].startswith("ab")


def test_disequation_sat():
    v = solve1(f"{DECL}(assert (distinct x y))(check-sat)")
    assert v.status == "sat"
    assert v.smodel["x"] != v.smodel["y"]


def test_substr_indexof():
    v = solve1(
        f"{DECL}"
        '(assert (= (str.substr x 1 2) "bc"))'
        '(assert (= (str.indexof x "b" 0) 1))'
        "(check-sat)"
    )
    assert v.status == "sat"
    w = v.smodel["x"]
    assert w[1:3] == "bc" and w.find("b") == 1


def test_multiple_check_sats_accumulate():
    vs = solve_text(
        f"{DECL}"
        '(assert (str.prefixof "a" x))(check-sat)'
        '(assert (str.in_re x (re.* (str.to_re "b"))))(check-sat)'
    )
    assert [v.status for v in vs] == ["sat", "unsat"]


def test_unknown_for_open_negated_contains():
    v = solve1(f"{DECL}(assert (not (str.contains x y)))(check-sat)")
    # negated containment with a variable needle is outside the fragment
    assert v.status in ("sat", "unknown")
    if v.status == "sat":
        assert v.smodel["y"] not in v.smodel["x"]


def test_procedure_override_agreement():
    text = (
        f"{DECL}"
        '(assert (= (str.++ x "a") (str.++ "a" x)))'
        "(assert (= (str.len x) 2))(check-sat)"
    )
    r1 = solve1(text, procedure="nielsen")
    r2 = solve1(text, procedure="stabilization")
    assert r1.status == r2.status == "sat"
    assert r1.smodel["x"] == r2.smodel["x"] == "aa"


def test_determinism():
    text = (
        f"{DECL}(assert (distinct x y))"
        '(assert (str.contains x "b"))(check-sat)'
    )
    a = solve_text(text)
    b = solve_text(text)
    assert [(v.status, v.smodel, v.imodel) for v in a] == [
        (v.status, v.smodel, v.imodel) for v in b
    ]


# ---------------------------------------------------------------------------
# command line


def run_cli(args, **kw):
    return subprocess.run(
        [sys.executable, "-m", "strsat.cli", *args],
        capture_output=True,
        text=True,
        **kw,
    )


def write(tmp_path, text):
    p = tmp_path / "case.smt2"
    p.write_text(text)
    return str(p)


def test_cli_sat(tmp_path):
    p = write(tmp_path, f'{DECL}(assert (= x "ab"))(check-sat)')
    r = run_cli([p])
    assert r.returncode == 0
    assert r.stdout == "sat\n"


def test_cli_model_flag(tmp_path):
    p = write(tmp_path, f'{DECL}(assert (= x "ab"))(check-sat)')
    r = run_cli(["--model", p])
    assert r.returncode == 0
    assert r.stdout.startswith("sat\n")
    assert "define-fun" in r.stdout and '"ab"' in r.stdout


def test_cli_get_model_command(tmp_path):
    p = write(tmp_path, f'{DECL}(assert (= x "ab"))(check-sat)(get-model)')
    r = run_cli([p])
    assert "define-fun" in r.stdout


def test_cli_syntax_error(tmp_path):
    p = write(tmp_path, "(assert (= x)")
    r = run_cli([p])
    assert r.returncode == 1
    assert "error" in r.stderr


def test_cli_missing_file():
    r = run_cli(["/nonexistent/file.smt2"])
    assert r.returncode == 1


def test_cli_unsupported_is_unknown(tmp_path):
    p = write(tmp_path, "(push 1)(check-sat)")
    r = run_cli([p])
    assert r.returncode == 0
    assert r.stdout == "unknown\n"


def test_cli_deterministic_output(tmp_path):
    p = write(
        tmp_path,
        f"{DECL}(assert (distinct x y))(check-sat)(get-model)",
    )
    r1 = run_cli([p])
    r2 = run_cli([p])
    assert r1.stdout == r2.stdout


def test_cli_logging_env(tmp_path):
    p = write(tmp_path, f'{DECL}(assert (= x "a"))(check-sat)')
    r = run_cli([p], env={"SOLVER_LOG": "debug", "PATH": "/usr/bin:/bin"})
    assert r.returncode == 0
    assert r.stderr.strip()
