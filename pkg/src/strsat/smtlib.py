"""SMT-LIB 2.6 frontend for the string fragment.

Tokenizer, s-expression reader, sort-checked translation into the core
IR, and a printer good enough to round-trip scripts and emit models.

String terms built from the interpreted functions (``str.substr``,
``str.at``, ``str.replace``, ``str.indexof``) are purified on the fly:
each occurrence becomes a fresh variable constrained by a definitional
atom, which keeps concatenations flat in the core IR.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from strsat.errors import SolverSyntaxError, SortError, Unsupported
from strsat.ir import (
    Contains,
    Formula,
    IndexOfIs,
    InRe,
    Lin,
    LinEq,
    LinLe,
    PrefixOf,
    RegexEq,
    ReplaceIs,
    SubstrIs,
    SuffixOf,
    WordEq,
    fand,
    fnot,
    for_,
    lit,
    norm_side,
    var,
)
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
)

# ---------------------------------------------------------------------------
# tokenizer

_SIMPLE_EXTRA = set("~!@$%^&*_-+=<>.?/")


@dataclass(frozen=True)
class Token:
    kind: str  # lparen | rparen | symbol | string | numeral | keyword
    text: str  # raw spelling
    value: object  # decoded word tuple (string) or int (numeral)
    line: int
    col: int


def tokenize(text: str) -> list:
    toks: list[Token] = []
    i = 0
    line = 1
    col = 1
    n = len(text)

    def bump(k: int):
        nonlocal i, line, col
        for _ in range(k):
            if text[i] == "\n":
                line += 1
                col = 1
            else:
                col += 1
            i += 1

    while i < n:
        c = text[i]
        if c in " \t\r\n":
            bump(1)
            continue
        if c == ";":
            while i < n and text[i] != "\n":
                bump(1)
            continue
        l0, c0 = line, col
        if c == "(":
            toks.append(Token("lparen", "(", None, l0, c0))
            bump(1)
        elif c == ")":
            toks.append(Token("rparen", ")", None, l0, c0))
            bump(1)
        elif c == '"':
            j = i + 1
            raw = ['"']
            word: list[int] = []
            while True:
                if j >= n:
                    raise SolverSyntaxError("unterminated string literal", l0, c0)
                ch = text[j]
                if ch == '"':
                    if j + 1 < n and text[j + 1] == '"':
                        raw.append('""')
                        word.append(ord('"'))
                        j += 2
                        continue
                    raw.append('"')
                    j += 1
                    break
                raw.append(ch)
                word.append(ord(ch))
                j += 1
            raw_text = "".join(raw)
            bump(j - i)
            toks.append(
                Token("string", raw_text, tuple(_decode_u(word, l0, c0)), l0, c0)
            )
        elif c == "|":
            j = i + 1
            while j < n and text[j] not in "|\\":
                j += 1
            if j >= n or text[j] != "|":
                raise SolverSyntaxError("unterminated quoted symbol", l0, c0)
            name = text[i + 1 : j]
            raw_text = text[i : j + 1]
            bump(j + 1 - i)
            toks.append(Token("symbol", raw_text, name, l0, c0))
        elif c == ":":
            j = i + 1
            while j < n and (text[j].isalnum() or text[j] in _SIMPLE_EXTRA):
                j += 1
            if j == i + 1:
                raise SolverSyntaxError("bare ':'", l0, c0)
            t = text[i:j]
            bump(j - i)
            toks.append(Token("keyword", t, t, l0, c0))
        elif c.isdigit():
            j = i
            while j < n and text[j].isdigit():
                j += 1
            if j < n and text[j] == ".":
                raise Unsupported("decimal literal")
            t = text[i:j]
            bump(j - i)
            toks.append(Token("numeral", t, int(t), l0, c0))
        elif c.isalpha() or c in _SIMPLE_EXTRA:
            j = i
            while j < n and (text[j].isalnum() or text[j] in _SIMPLE_EXTRA):
                j += 1
            t = text[i:j]
            bump(j - i)
            toks.append(Token("symbol", t, t, l0, c0))
        else:
            raise SolverSyntaxError(f"illegal character {c!r}", l0, c0)
    return toks


def _decode_u(points: list, line: int, col: int) -> list:
    """Decode the SMT-LIB \\u escape forms inside a string body."""
    out: list[int] = []
    i = 0
    n = len(points)
    while i < n:
        c = points[i]
        if c == ord("\\") and i + 1 < n and points[i + 1] == ord("u"):
            if i + 2 < n and points[i + 2] == ord("{"):
                j = i + 3
                digits = []
                while j < n and points[j] != ord("}"):
                    digits.append(chr(points[j]))
                    j += 1
                if (
                    j < n
                    and 1 <= len(digits) <= 5
                    and all(d in "0123456789abcdefABCDEF" for d in digits)
                ):
                    cp = int("".join(digits), 16)
                    if cp <= 0x2FFFF:
                        out.append(cp)
                        i = j + 1
                        continue
            else:
                digits = [chr(p) for p in points[i + 2 : i + 6]]
                if len(digits) == 4 and all(
                    d in "0123456789abcdefABCDEF" for d in digits
                ):
                    out.append(int("".join(digits), 16))
                    i += 6
                    continue
        out.append(c)
        i += 1
    return out


# ---------------------------------------------------------------------------
# s-expression reader


def read_sexprs(toks: list) -> list:
    """Nested lists of Tokens, one entry per top-level form."""
    out = []
    i = 0

    def read():
        nonlocal i
        t = toks[i]
        if t.kind == "lparen":
            i += 1
            items = []
            while True:
                if i >= len(toks):
                    raise SolverSyntaxError("unbalanced '('", t.line, t.col)
                if toks[i].kind == "rparen":
                    i += 1
                    return items
                items.append(read())
        if t.kind == "rparen":
            raise SolverSyntaxError("unbalanced ')'", t.line, t.col)
        i += 1
        return t

    while i < len(toks):
        out.append(read())
    return out


# ---------------------------------------------------------------------------
# script and translation


@dataclass
class Script:
    commands: list = field(default_factory=list)
    sorts: dict = field(default_factory=dict)  # name -> "String" | "Int"

    def assertions(self) -> list:
        return [c[1] for c in self.commands if c[0] == "assert"]

    def asserted(self) -> Formula:
        return fand(self.assertions())


_UNSUPPORTED_CMDS = {
    "push",
    "pop",
    "define-fun",
    "define-fun-rec",
    "declare-sort",
    "define-sort",
    "declare-datatype",
    "declare-datatypes",
    "get-value",
    "get-unsat-core",
}

_UNSUPPORTED_OPS = {
    "str.replace_all",
    "str.replace_re",
    "str.replace_re_all",
    "str.to_int",
    "str.from_int",
    "str.to_code",
    "str.from_code",
    "str.is_digit",
    "str.<",
    "str.<=",
    "div",
    "mod",
    "abs",
    "exists",
    "forall",
}


class _Parser:
    def __init__(self):
        self.script = Script()
        self.fresh_n = 0

    # -- helpers

    def fresh(self, sort: str, hint: str) -> str:
        while True:
            name = f"%{hint}{self.fresh_n}"
            self.fresh_n += 1
            if name not in self.script.sorts:
                self.script.sorts[name] = sort
                self.script.commands.append(("declare-fun", name, sort))
                return name

    def err(self, tok, msg: str):
        if isinstance(tok, Token):
            raise SolverSyntaxError(msg, tok.line, tok.col)
        if isinstance(tok, list) and tok:
            return self.err(tok[0], msg)
        raise SolverSyntaxError(msg)

    # -- commands

    def run(self, forms: list) -> Script:
        for form in forms:
            self.command(form)
        return self.script

    def command(self, form):
        if not isinstance(form, list) or not form:
            self.err(form, "expected a command")
        head = form[0]
        if not (isinstance(head, Token) and head.kind == "symbol"):
            self.err(head, "expected a command name")
        name = head.value
        if name in _UNSUPPORTED_CMDS:
            raise Unsupported(name)
        if name == "set-logic":
            if len(form) != 2 or not isinstance(form[1], Token):
                self.err(form, "malformed set-logic")
            self.script.commands.append(("set-logic", form[1].text))
        elif name in ("set-info", "set-option"):
            self.script.commands.append((name, _raw(form[1:])))
        elif name in ("declare-fun", "declare-const"):
            self.declare(form, name)
        elif name == "assert":
            if len(form) != 2:
                self.err(form, "malformed assert")
            self.defs: list = []
            f = self.formula(form[1], {})
            f = fand([f, *self.defs])
            self.script.commands.append(("assert", f))
        elif name in ("check-sat", "get-model", "exit"):
            if len(form) != 1:
                self.err(form, f"malformed {name}")
            self.script.commands.append((name,))
        else:
            self.err(head, f"unknown command {name}")

    def declare(self, form, kind):
        if kind == "declare-fun":
            if len(form) != 4 or not isinstance(form[1], Token):
                self.err(form, "malformed declare-fun")
            if form[2] != []:
                raise Unsupported("declare-fun with nonzero arity")
            sort_tok = form[3]
        else:
            if len(form) != 3 or not isinstance(form[1], Token):
                self.err(form, "malformed declare-const")
            sort_tok = form[2]
        if not isinstance(sort_tok, Token):
            raise Unsupported("parametric sort")
        sort = sort_tok.value
        if sort not in ("String", "Int"):
            raise Unsupported(f"sort {sort}")
        name = form[1].value
        if name in self.script.sorts:
            raise SortError(f"redeclared symbol {name}")
        self.script.sorts[name] = sort
        self.script.commands.append(("declare-fun", name, sort))

    # -- terms; tagged values ('str', side) ('int', lin) ('bool', f) ('re', r)

    def formula(self, sx, env) -> Formula:
        tag, val = self.term(sx, env)
        if tag != "bool":
            self.err(sx, f"expected a Bool term, got {tag}")
        return val

    def side(self, sx, env):
        tag, val = self.term(sx, env)
        if tag != "str":
            self.err(sx, f"expected a String term, got {tag}")
        return val

    def lin(self, sx, env) -> Lin:
        tag, val = self.term(sx, env)
        if tag != "int":
            self.err(sx, f"expected an Int term, got {tag}")
        return val

    def regex(self, sx, env):
        tag, val = self.term(sx, env)
        if tag != "re":
            self.err(sx, f"expected a RegLan term, got {tag}")
        return val

    def term(self, sx, env):
        if isinstance(sx, Token):
            return self.atom_term(sx, env)
        if not sx:
            self.err(sx, "empty application")
        head = sx[0]
        if isinstance(head, list):
            return self.indexed(sx, env)
        name = head.value
        args = sx[1:]
        if name in _UNSUPPORTED_OPS:
            raise Unsupported(name)
        if name == "let":
            return self.let(sx, env)
        handler = _HANDLERS.get(name)
        if handler is None:
            self.err(head, f"unknown function {name}")
        return handler(self, head, args, env)

    def atom_term(self, tok: Token, env):
        if tok.kind == "numeral":
            return ("int", Lin.const_of(tok.value))
        if tok.kind == "string":
            return ("str", norm_side([lit(tok.value)]))
        if tok.kind != "symbol":
            self.err(tok, f"unexpected token {tok.text}")
        name = tok.value
        if name in env:
            return env[name]
        if name == "true":
            return ("bool", fand([]))
        if name == "false":
            return ("bool", for_([]))
        if name == "re.none":
            return ("re", RNone())
        if name == "re.all":
            return ("re", RAll())
        if name == "re.allchar":
            return ("re", RAllChar())
        if name in _UNSUPPORTED_OPS:
            raise Unsupported(name)
        sort = self.script.sorts.get(name)
        if sort == "String":
            return ("str", (var(name),))
        if sort == "Int":
            return ("int", Lin.intvar(name))
        self.err(tok, f"undeclared symbol {name}")

    def let(self, sx, env):
        if len(sx) != 3 or not isinstance(sx[1], list):
            self.err(sx, "malformed let")
        new_env = dict(env)
        for binding in sx[1]:
            if (
                not isinstance(binding, list)
                or len(binding) != 2
                or not isinstance(binding[0], Token)
            ):
                self.err(binding, "malformed let binding")
            new_env[binding[0].value] = self.term(binding[1], env)
        return self.term(sx[2], new_env)

    def indexed(self, sx, env):
        head = sx[0]
        if (
            len(head) >= 2
            and isinstance(head[0], Token)
            and head[0].value == "_"
            and isinstance(head[1], Token)
        ):
            op = head[1].value
            if op == "re.loop" and len(head) == 4:
                lo, hi = head[2].value, head[3].value
                return ("re", RLoop(lo, hi, self.regex(sx[1], env)))
            if op == "re.^" and len(head) == 3:
                k = head[2].value
                return ("re", RLoop(k, k, self.regex(sx[1], env)))
            raise Unsupported(f"indexed operator {op}")
        self.err(sx, "malformed application head")

    # -- equality with purification shortcuts

    def equality(self, head, args, env):
        if len(args) < 2:
            self.err(head, "= needs at least two arguments")
        if len(args) == 2:
            direct = self.direct_def(args[0], args[1], env)
            if direct is None:
                direct = self.direct_def(args[1], args[0], env)
            if direct is not None:
                return ("bool", direct)
        vals = [self.term(a, env) for a in args]
        tags = {t for t, _ in vals}
        if len(tags) != 1:
            self.err(head, "= over mixed sorts")
        tag = tags.pop()
        parts = []
        for (t1, v1), (t2, v2) in zip(vals, vals[1:]):
            parts.append(self.eq_pair(tag, v1, v2))
        return ("bool", fand(parts))

    def eq_pair(self, tag, v1, v2) -> Formula:
        if tag == "str":
            return WordEq.of(v1, v2)
        if tag == "int":
            return LinEq.of(v1.sub(v2))
        if tag == "re":
            return RegexEq(v1, v2)
        # iff
        return for_([fand([v1, v2]), fand([fnot(v1), fnot(v2)])])

    def direct_def(self, lhs, rhs, env):
        """(= x (str.substr ...)) binds x directly, skipping a fresh var."""
        if not (isinstance(lhs, Token) and lhs.kind == "symbol"):
            return None
        if lhs.value in env:
            return None
        sort = self.script.sorts.get(lhs.value)
        if sort is None:
            return None
        if not (isinstance(rhs, list) and rhs and isinstance(rhs[0], Token)):
            return None
        op = rhs[0].value
        if sort == "String" and op in ("str.substr", "str.at", "str.replace"):
            return self.string_fun(op, rhs[0], rhs[1:], env, res=lhs.value)
        if sort == "Int" and op == "str.indexof":
            return self.indexof(rhs[0], rhs[1:], env, res=lhs.value)
        return None

    def string_fun(self, op, head, args, env, res=None) -> Formula:
        if op == "str.substr":
            if len(args) != 3:
                self.err(head, "str.substr needs 3 arguments")
            s = self.side(args[0], env)
            i = self.lin(args[1], env)
            n = self.lin(args[2], env)
            if res is None:
                res = self.fresh("String", "substr")
            return SubstrIs(res, s, i, n)
        if op == "str.at":
            if len(args) != 2:
                self.err(head, "str.at needs 2 arguments")
            s = self.side(args[0], env)
            i = self.lin(args[1], env)
            if res is None:
                res = self.fresh("String", "at")
            return SubstrIs(res, s, i, Lin.const_of(1))
        assert op == "str.replace"
        if len(args) != 3:
            self.err(head, "str.replace needs 3 arguments")
        hay = self.side(args[0], env)
        needle = self.side(args[1], env)
        repl = self.side(args[2], env)
        if res is None:
            res = self.fresh("String", "replace")
        return ReplaceIs(res, hay, needle, repl)

    def indexof(self, head, args, env, res=None) -> Formula:
        if len(args) == 2:
            start = Lin.const_of(0)
        elif len(args) == 3:
            start = self.lin(args[2], env)
        else:
            self.err(head, "str.indexof needs 2 or 3 arguments")
        hay = self.side(args[0], env)
        needle = self.side(args[1], env)
        if res is None:
            res = self.fresh("Int", "ixof")
        return IndexOfIs(res, hay, needle, start)


def _raw(sexprs) -> str:
    parts = []

    def walk(sx):
        if isinstance(sx, Token):
            parts.append(sx.text)
        else:
            parts.append("(")
            for s in sx:
                walk(s)
            parts.append(")")

    for sx in sexprs:
        walk(sx)
    out = []
    prev = ""
    for p in parts:
        if out and prev not in ("(",) and p not in (")",):
            out.append(" ")
        out.append(p)
        prev = p
    return "".join(out)


# -- operator handlers


def _h_and(p, head, args, env):
    return ("bool", fand([p.formula(a, env) for a in args]))


def _h_or(p, head, args, env):
    return ("bool", for_([p.formula(a, env) for a in args]))


def _h_not(p, head, args, env):
    if len(args) != 1:
        p.err(head, "not needs 1 argument")
    return ("bool", fnot(p.formula(args[0], env)))


def _h_implies(p, head, args, env):
    if len(args) < 2:
        p.err(head, "=> needs at least 2 arguments")
    fs = [p.formula(a, env) for a in args]
    out = fs[-1]
    for f in reversed(fs[:-1]):
        out = for_([fnot(f), out])
    return ("bool", out)


def _h_xor(p, head, args, env):
    if len(args) != 2:
        p.err(head, "xor needs 2 arguments")
    a = p.formula(args[0], env)
    b = p.formula(args[1], env)
    return ("bool", for_([fand([a, fnot(b)]), fand([fnot(a), b])]))


def _h_ite(p, head, args, env):
    if len(args) != 3:
        p.err(head, "ite needs 3 arguments")
    c = p.formula(args[0], env)
    ttag, tval = p.term(args[1], env)
    etag, eval_ = p.term(args[2], env)
    if ttag != "bool" or etag != "bool":
        raise Unsupported("non-Boolean ite")
    return ("bool", for_([fand([c, tval]), fand([fnot(c), eval_])]))


def _h_distinct(p, head, args, env):
    if len(args) < 2:
        p.err(head, "distinct needs at least 2 arguments")
    vals = [p.term(a, env) for a in args]
    tags = {t for t, _ in vals}
    if len(tags) != 1:
        p.err(head, "distinct over mixed sorts")
    tag = tags.pop()
    parts = []
    for i in range(len(vals)):
        for j in range(i + 1, len(vals)):
            parts.append(fnot(p.eq_pair(tag, vals[i][1], vals[j][1])))
    return ("bool", fand(parts))


def _h_eq(p, head, args, env):
    return p.equality(head, args, env)


def _cmp(rel):
    # rel maps (a, b) to the Lin that must be <= 0
    def h(p, head, args, env):
        if len(args) < 2:
            p.err(head, "comparison needs at least 2 arguments")
        lins = [p.lin(a, env) for a in args]
        parts = [LinLe(rel(a, b)) for a, b in zip(lins, lins[1:])]
        return ("bool", fand(parts))

    return h


_h_le = _cmp(lambda a, b: a.sub(b))
_h_lt = _cmp(lambda a, b: a.sub(b).add(Lin.const_of(1)))
_h_ge = _cmp(lambda a, b: b.sub(a))
_h_gt = _cmp(lambda a, b: b.sub(a).add(Lin.const_of(1)))


def _h_plus(p, head, args, env):
    out = Lin.const_of(0)
    for a in args:
        out = out.add(p.lin(a, env))
    return ("int", out)


def _h_minus(p, head, args, env):
    if not args:
        p.err(head, "- needs arguments")
    first = p.lin(args[0], env)
    if len(args) == 1:
        return ("int", first.scale(-1))
    for a in args[1:]:
        first = first.sub(p.lin(a, env))
    return ("int", first)


def _h_times(p, head, args, env):
    lins = [p.lin(a, env) for a in args]
    out = Lin.const_of(1)
    for l in lins:
        if out.is_const():
            out = l.scale(out.const)
        elif l.is_const():
            out = out.scale(l.const)
        else:
            raise Unsupported("nonlinear arithmetic")
    return ("int", out)


def _h_concat(p, head, args, env):
    out = []
    for a in args:
        out.extend(p.side(a, env))
    return ("str", norm_side(out))


def _h_len(p, head, args, env):
    from strsat.ir import side_len

    if len(args) != 1:
        p.err(head, "str.len needs 1 argument")
    return ("int", side_len(p.side(args[0], env)))


def _h_in_re(p, head, args, env):
    if len(args) != 2:
        p.err(head, "str.in_re needs 2 arguments")
    return ("bool", InRe.of(p.side(args[0], env), p.regex(args[1], env)))


def _h_contains(p, head, args, env):
    if len(args) != 2:
        p.err(head, "str.contains needs 2 arguments")
    return ("bool", Contains(p.side(args[0], env), p.side(args[1], env)))


def _h_prefixof(p, head, args, env):
    if len(args) != 2:
        p.err(head, "str.prefixof needs 2 arguments")
    return ("bool", PrefixOf(p.side(args[0], env), p.side(args[1], env)))


def _h_suffixof(p, head, args, env):
    if len(args) != 2:
        p.err(head, "str.suffixof needs 2 arguments")
    return ("bool", SuffixOf(p.side(args[0], env), p.side(args[1], env)))


def _strfun(op):
    def h(p, head, args, env):
        f = p.string_fun(op, head, args, env)
        p.defs.append(f)
        return ("str", (var(f.res),))

    return h


def _h_indexof(p, head, args, env):
    f = p.indexof(head, args, env)
    p.defs.append(f)
    return ("int", Lin.intvar(f.res))


def _h_to_re(p, head, args, env):
    if len(args) != 1:
        p.err(head, "str.to_re needs 1 argument")
    side = p.side(args[0], env)
    from strsat.ir import side_is_ground, side_word

    if not side_is_ground(side):
        raise Unsupported("str.to_re on a non-literal")
    return ("re", RLit(side_word(side)))


def _re_nary(ctor):
    def h(p, head, args, env):
        if not args:
            p.err(head, "regex operator needs arguments")
        parts = tuple(p.regex(a, env) for a in args)
        if len(parts) == 1:
            return ("re", parts[0])
        return ("re", ctor(parts))

    return h


def _re_unary(ctor):
    def h(p, head, args, env):
        if len(args) != 1:
            p.err(head, "regex operator needs 1 argument")
        return ("re", ctor(p.regex(args[0], env)))

    return h


def _h_re_range(p, head, args, env):
    if len(args) != 2:
        p.err(head, "re.range needs 2 arguments")
    from strsat.ir import side_is_ground, side_word

    bounds = []
    for a in args:
        side = p.side(a, env)
        if not side_is_ground(side):
            raise Unsupported("re.range on a non-literal")
        bounds.append(side_word(side))
    lo, hi = bounds
    if len(lo) != 1 or len(hi) != 1:
        return ("re", RNone())
    return ("re", RRange(lo[0], hi[0]))


def _h_re_diff(p, head, args, env):
    if len(args) != 2:
        p.err(head, "re.diff needs 2 arguments")
    return ("re", RDiff(p.regex(args[0], env), p.regex(args[1], env)))


_HANDLERS = {
    "and": _h_and,
    "or": _h_or,
    "not": _h_not,
    "=>": _h_implies,
    "xor": _h_xor,
    "ite": _h_ite,
    "distinct": _h_distinct,
    "=": _h_eq,
    "<=": _h_le,
    "<": _h_lt,
    ">=": _h_ge,
    ">": _h_gt,
    "+": _h_plus,
    "-": _h_minus,
    "*": _h_times,
    "str.++": _h_concat,
    "str.len": _h_len,
    "str.in_re": _h_in_re,
    "str.in.re": _h_in_re,
    "str.contains": _h_contains,
    "str.prefixof": _h_prefixof,
    "str.suffixof": _h_suffixof,
    "str.substr": _strfun("str.substr"),
    "str.at": _strfun("str.at"),
    "str.replace": _strfun("str.replace"),
    "str.indexof": _h_indexof,
    "str.to_re": _h_to_re,
    "str.to.re": _h_to_re,
    "re.++": _re_nary(RConcat),
    "re.union": _re_nary(RUnion),
    "re.inter": _re_nary(RInter),
    "re.comp": _re_unary(RComp),
    "re.*": _re_unary(RStar),
    "re.+": _re_unary(RPlus),
    "re.opt": _re_unary(ROpt),
    "re.diff": _h_re_diff,
    "re.range": _h_re_range,
}


def parse_script(text: str) -> Script:
    return _Parser().run(read_sexprs(tokenize(text)))


# ---------------------------------------------------------------------------
# printer


def escape_string(word) -> str:
    out = ['"']
    for cp in word:
        if cp == ord('"'):
            out.append('""')
        elif 0x20 <= cp <= 0x7E and cp != ord("\\"):
            out.append(chr(cp))
        else:
            out.append("\\u{%x}" % cp)
    out.append('"')
    return "".join(out)


def print_side(side) -> str:
    if not side:
        return '""'
    parts = [
        escape_string(it[1]) if it[0] == "lit" else it[1] for it in side
    ]
    if len(parts) == 1:
        return parts[0]
    return "(str.++ " + " ".join(parts) + ")"


def print_lin(lin: Lin) -> str:
    parts = []
    for (kind, name), c in lin.terms:
        base = name if kind == "iv" else f"(str.len {name})"
        if c == 1:
            parts.append(base)
        else:
            parts.append(f"(* {_num(c)} {base})")
    if lin.const or not parts:
        parts.append(_num(lin.const))
    if len(parts) == 1:
        return parts[0]
    return "(+ " + " ".join(parts) + ")"


def _num(k: int) -> str:
    return str(k) if k >= 0 else f"(- {-k})"


def print_regex(r) -> str:
    if isinstance(r, RNone):
        return "re.none"
    if isinstance(r, RAll):
        return "re.all"
    if isinstance(r, RAllChar):
        return "re.allchar"
    if isinstance(r, RLit):
        return f"(str.to_re {escape_string(r.word)})"
    if isinstance(r, RConcat):
        return "(re.++ " + " ".join(print_regex(p) for p in r.parts) + ")"
    if isinstance(r, RUnion):
        return "(re.union " + " ".join(print_regex(p) for p in r.parts) + ")"
    if isinstance(r, RInter):
        return "(re.inter " + " ".join(print_regex(p) for p in r.parts) + ")"
    if isinstance(r, RComp):
        return f"(re.comp {print_regex(r.arg)})"
    if isinstance(r, RStar):
        return f"(re.* {print_regex(r.arg)})"
    if isinstance(r, RPlus):
        return f"(re.+ {print_regex(r.arg)})"
    if isinstance(r, ROpt):
        return f"(re.opt {print_regex(r.arg)})"
    if isinstance(r, RRange):
        return (
            f"(re.range {escape_string((r.lo,))} {escape_string((r.hi,))})"
        )
    if isinstance(r, RLoop):
        return f"((_ re.loop {r.lo} {r.hi}) {print_regex(r.arg)})"
    if isinstance(r, RDiff):
        return f"(re.diff {print_regex(r.lhs)} {print_regex(r.rhs)})"
    raise TypeError(f"unknown regex {r!r}")


def print_formula(f) -> str:
    from strsat.ir import And, Bottom, Not, Or, Top

    if isinstance(f, Top):
        return "true"
    if isinstance(f, Bottom):
        return "false"
    if isinstance(f, Not):
        return f"(not {print_formula(f.arg)})"
    if isinstance(f, And):
        return "(and " + " ".join(print_formula(a) for a in f.args) + ")"
    if isinstance(f, Or):
        return "(or " + " ".join(print_formula(a) for a in f.args) + ")"
    if isinstance(f, WordEq):
        return f"(= {print_side(f.lhs)} {print_side(f.rhs)})"
    if isinstance(f, InRe):
        return f"(str.in_re {print_side(f.items)} {print_regex(f.regex)})"
    if isinstance(f, RegexEq):
        return f"(= {print_regex(f.lhs)} {print_regex(f.rhs)})"
    if isinstance(f, LinLe):
        return f"(<= {print_lin(f.lin)} 0)"
    if isinstance(f, LinEq):
        return f"(= {print_lin(f.lin)} 0)"
    if isinstance(f, Contains):
        return f"(str.contains {print_side(f.hay)} {print_side(f.needle)})"
    if isinstance(f, PrefixOf):
        return f"(str.prefixof {print_side(f.pre)} {print_side(f.full)})"
    if isinstance(f, SuffixOf):
        return f"(str.suffixof {print_side(f.suf)} {print_side(f.full)})"
    if isinstance(f, SubstrIs):
        return (
            f"(= {f.res} (str.substr {print_side(f.s)} "
            f"{print_lin(f.i)} {print_lin(f.n)}))"
        )
    if isinstance(f, ReplaceIs):
        return (
            f"(= {f.res} (str.replace {print_side(f.hay)} "
            f"{print_side(f.needle)} {print_side(f.repl)}))"
        )
    if isinstance(f, IndexOfIs):
        return (
            f"(= {f.res} (str.indexof {print_side(f.hay)} "
            f"{print_side(f.needle)} {print_lin(f.start)}))"
        )
    raise TypeError(f"cannot print {f!r}")


def print_script(script: Script) -> str:
    lines = []
    for cmd in script.commands:
        if cmd[0] == "set-logic":
            lines.append(f"(set-logic {cmd[1]})")
        elif cmd[0] in ("set-info", "set-option"):
            lines.append(f"({cmd[0]} {cmd[1]})")
        elif cmd[0] == "declare-fun":
            lines.append(f"(declare-fun {cmd[1]} () {cmd[2]})")
        elif cmd[0] == "assert":
            lines.append(f"(assert {print_formula(cmd[1])})")
        else:
            lines.append(f"({cmd[0]})")
    return "\n".join(lines) + "\n"


def print_model(script: Script, smodel: dict, imodel: dict) -> str:
    """SMT-LIB get-model block restricted to user-declared symbols."""
    lines = ["("]
    for cmd in script.commands:
        if cmd[0] != "declare-fun" or cmd[1].startswith("%"):
            continue
        name, sort = cmd[1], cmd[2]
        if sort == "String":
            val = escape_string(smodel.get(name, ()))
        else:
            val = _num(imodel.get(name, 0))
        lines.append(f"  (define-fun {name} () {sort} {val})")
    lines.append(")")
    return "\n".join(lines)
