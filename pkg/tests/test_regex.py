import random

from strsat.nfa.alphabet import SymbolTable
from strsat.nfa.regex import (
    RAll,
    RAllChar,
    RComp,
    RConcat,
    RDiff,
    RInter,
    RLit,
    RLoop,
    RNone,
    ROpt,
    RPlus,
    RRange,
    RStar,
    RUnion,
    compile_regex,
)

from oracle import all_words, nfa_language, regex_language

A, B = ord("a"), ord("b")
TAB = SymbolTable((A, B), 1)


def lang(r, max_len):
    return nfa_language(compile_regex(r, TAB), max_len)


def test_none_and_all():
    assert compile_regex(RNone(), TAB).is_empty()
    assert lang(RAll(), 2) == set(all_words(3, 2))
    assert lang(RAllChar(), 3) == {(0,), (1,), (2,)}


def test_ab_star():
    r = RStar(RLit((A, B)))
    got = lang(r, 6)
    assert () in got and (0, 1) in got and (0, 1, 0, 1) in got
    assert (0,) not in got and (1, 0) not in got and (0, 1, 0) not in got


def test_comp_allchar():
    # complement of "any single char": epsilon and all words of length >= 2
    tab = SymbolTable((A,), 1)
    got = nfa_language(compile_regex(RComp(RAllChar()), tab), 4)
    want = {w for w in all_words(2, 4) if len(w) != 1}
    assert got == want


def test_degenerate_loop_and_range():
    assert compile_regex(RLoop(3, 2, RLit((A,))), TAB).is_empty()
    assert compile_regex(RRange(B, A), TAB).is_empty()
    assert lang(RRange(A, B), 2) == {(0,), (1,)}


def test_range_with_dummy_span():
    # a..z covers unmentioned points, so the dummy symbol is included
    r = RRange(ord("a"), ord("z"))
    assert lang(r, 1) == {(0,), (1,), (2,)}


def random_regex(rng: random.Random, depth: int):
    if depth == 0:
        return rng.choice(
            [
                RNone(),
                RAllChar(),
                RLit(()),
                RLit((A,)),
                RLit((B,)),
                RLit((A, B)),
                RRange(A, B),
            ]
        )
    kind = rng.randrange(9)
    sub = lambda: random_regex(rng, depth - 1)
    if kind == 0:
        return RConcat((sub(), sub()))
    if kind == 1:
        return RUnion((sub(), sub()))
    if kind == 2:
        return RInter((sub(), sub()))
    if kind == 3:
        return RComp(sub())
    if kind == 4:
        return RStar(sub())
    if kind == 5:
        return RPlus(sub())
    if kind == 6:
        return ROpt(sub())
    if kind == 7:
        return RLoop(rng.randrange(3), rng.randrange(4), sub())
    return RDiff(sub(), sub())


def test_random_regexes_vs_oracle():
    rng = random.Random(41)
    for _ in range(300):
        r = random_regex(rng, rng.randint(1, 3))
        assert lang(r, 5) == regex_language(r, TAB, 5)


def test_regex_member_agrees_with_compiler():
    from oracle import regex_member

    rng = random.Random(97)
    for _ in range(80):
        r = random_regex(rng, rng.randint(1, 2))
        nfa_lang = lang(r, 3)
        memo = {}
        for w in all_words(3, 3):
            cps = TAB.concretize_word(w)
            assert regex_member(r, cps, memo) == (w in nfa_lang), (r, w)
